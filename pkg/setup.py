"""Builds the optional compiled kernel; the package works without it."""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("BCFEEDBACK_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "bcfeedback._awgn_kernel",
                    ["src/bcfeedback/_awgn_kernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
