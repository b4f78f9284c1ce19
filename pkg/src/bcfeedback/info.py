"""Entropy and mutual information over finite joint pmfs and Gaussian models.

All quantities are in bits. Variables are addressed by name; name sets may be
given as any iterable of strings or as a single string of names separated by
spaces or commas (``"U~ S~"``).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np

ZERO_PROB = 1e-15
SUM_TOL = 1e-12
SYM_TOL = 1e-10
PSD_TOL = 1e-9
MAX_COND = 1e12
CLAMP_TOL = 1e-9


class InfoError(ValueError):
    """Base class for errors raised by information measures."""


class UnknownVariableError(InfoError):
    pass


class OverlapError(InfoError):
    pass


class DegenerateModelError(InfoError):
    """A Gaussian submatrix is singular or too badly conditioned to use."""

    def __init__(self, names, cond):
        self.names = tuple(names)
        self.cond = cond
        super().__init__(
            f"degenerate Gaussian submatrix over {{{', '.join(self.names)}}} "
            f"(condition number {cond:.3g})"
        )


NameSet = Union[str, Iterable[str]]


def names_of(spec: NameSet) -> tuple[str, ...]:
    """Normalize a name-set argument to a tuple of unique names, order kept."""
    if spec is None:
        return ()
    if isinstance(spec, str):
        items = [s for s in re.split(r"[\s,]+", spec.strip()) if s]
    else:
        items = list(spec)
    out: list[str] = []
    for s in items:
        if s not in out:
            out.append(s)
    return tuple(out)


def _check_disjoint(*sets: tuple[str, ...]) -> None:
    seen: set[str] = set()
    for s in sets:
        dup = seen.intersection(s)
        if dup:
            raise OverlapError(f"name sets overlap on {sorted(dup)}")
        seen.update(s)


def _log2_safe(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > ZERO_PROB
    out[mask] = np.log2(p[mask])
    return out


# --------------------------------------------------------------------------
# discrete


@dataclass(frozen=True)
class JointPmf:
    """Dense joint pmf; ``probs`` has one axis per variable, in ``names`` order."""

    names: tuple[str, ...]
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        names = tuple(self.names)
        probs = np.array(self.probs, dtype=float)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise InfoError(f"duplicate variable names in {names}")
        if probs.ndim != len(names):
            raise InfoError(
                f"pmf has {probs.ndim} axes but {len(names)} variable names")
        if any(c < 1 for c in probs.shape):
            raise InfoError("every cardinality must be >= 1")
        if np.any(probs < 0):
            raise InfoError("pmf has negative entries")
        total = probs.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise InfoError(f"pmf sums to {total!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_flat(cls, variables: Sequence[tuple[str, int]], probs) -> "JointPmf":
        names = tuple(n for n, _ in variables)
        cards = tuple(int(c) for _, c in variables)
        arr = np.asarray(probs, dtype=float).reshape(cards)
        return cls(names, arr)

    @property
    def variables(self) -> tuple[tuple[str, int], ...]:
        return tuple(zip(self.names, self.cards))

    @property
    def cards(self) -> tuple[int, ...]:
        return tuple(self.probs.shape)

    def card(self, name: str) -> int:
        return self.probs.shape[self.axis(name)]

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariableError(
                f"unknown variable {name!r}; have {list(self.names)}") from None

    def axes(self, names: NameSet) -> tuple[int, ...]:
        return tuple(self.axis(n) for n in names_of(names))

    def to_dict(self) -> dict:
        return {
            "variables": [{"name": n, "card": c} for n, c in zip(self.names, self.cards)],
            "probs": self.probs.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "JointPmf":
        variables = [(v["name"], int(v["card"])) for v in d["variables"]]
        return cls.from_flat(variables, d["probs"])

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "JointPmf":
        return cls.from_dict(json.loads(text))


def marginalize(pmf: JointPmf, keep: NameSet) -> JointPmf:
    """Marginal on ``keep``; kept variables stay in their original order."""
    keep_set = set(names_of(keep))
    for n in keep_set:
        pmf.axis(n)
    kept = [i for i, n in enumerate(pmf.names) if n in keep_set]
    drop = tuple(i for i in range(len(pmf.names)) if i not in kept)
    probs = pmf.probs.sum(axis=drop) if drop else pmf.probs
    return JointPmf(tuple(pmf.names[i] for i in kept), probs)


def joint_entropy(pmf: JointPmf, names: NameSet) -> float:
    axes = set(pmf.axes(names))
    if not axes:
        return 0.0
    drop = tuple(i for i in range(pmf.probs.ndim) if i not in axes)
    p = pmf.probs.sum(axis=drop) if drop else pmf.probs
    p = p.ravel()
    return float(-np.dot(p, _log2_safe(p)))


def entropy(pmf: JointPmf, S: NameSet, C: NameSet = ()) -> float:
    """Conditional entropy H(S|C) = H(S,C) - H(C)."""
    s, c = names_of(S), names_of(C)
    _check_disjoint(s, c)
    h = joint_entropy(pmf, s + c) - joint_entropy(pmf, c)
    return _clamp(h)


def mutual_info(pmf: JointPmf, A: NameSet, B: NameSet, C: NameSet = ()) -> float:
    """Conditional mutual information I(A;B|C)."""
    a, b, c = names_of(A), names_of(B), names_of(C)
    _check_disjoint(a, b, c)
    v = (joint_entropy(pmf, a + c) + joint_entropy(pmf, b + c)
         - joint_entropy(pmf, a + b + c) - joint_entropy(pmf, c))
    return _clamp(v)


def _clamp(v: float) -> float:
    if v < 0.0:
        if v < -CLAMP_TOL:
            raise ArithmeticError(f"information measure evaluated to {v!r}")
        return 0.0
    return v


# --------------------------------------------------------------------------
# Gaussian


@dataclass(frozen=True)
class GaussianCov:
    """Zero-mean jointly Gaussian scalars with covariance ``cov``."""

    names: tuple[str, ...]
    cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        names = tuple(self.names)
        cov = np.array(self.cov, dtype=float)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise InfoError(f"duplicate variable names in {names}")
        if cov.shape != (len(names), len(names)):
            raise InfoError(f"covariance shape {cov.shape} does not match {len(names)} names")
        if not np.allclose(cov, cov.T, atol=SYM_TOL, rtol=0.0):
            raise InfoError("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        if len(names):
            lo = np.linalg.eigvalsh(cov).min()
            if lo < -PSD_TOL:
                raise InfoError(f"covariance not PSD (min eigenvalue {lo:.3g})")
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariableError(
                f"unknown variable {name!r}; have {list(self.names)}") from None

    def sub(self, names: NameSet) -> np.ndarray:
        idx = [self.index(n) for n in names_of(names)]
        return self.cov[np.ix_(idx, idx)]

    def var(self, name: str) -> float:
        i = self.index(name)
        return float(self.cov[i, i])

    def corr(self, a: str, b: str) -> float:
        i, j = self.index(a), self.index(b)
        return float(self.cov[i, j] / np.sqrt(self.cov[i, i] * self.cov[j, j]))

    def to_dict(self) -> dict:
        return {"names": list(self.names), "cov": self.cov.tolist()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "GaussianCov":
        return cls(tuple(d["names"]), np.asarray(d["cov"], dtype=float))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "GaussianCov":
        return cls.from_dict(json.loads(text))


def gaussian_logdet(cov: GaussianCov, names: NameSet) -> float:
    """log2 det of the covariance of ``names``; the empty set gives 0."""
    names = names_of(names)
    if not names:
        return 0.0
    m = cov.sub(names)
    w = np.linalg.eigvalsh(m)
    lo, hi = w.min(), w.max()
    if lo <= 0.0 or hi / lo > MAX_COND:
        raise DegenerateModelError(names, np.inf if lo <= 0.0 else hi / lo)
    return float(np.sum(np.log2(w)))


def gaussian_mutual_info(cov: GaussianCov, A: NameSet, B: NameSet, C: NameSet = ()) -> float:
    a, b, c = names_of(A), names_of(B), names_of(C)
    _check_disjoint(a, b, c)
    v = 0.5 * (gaussian_logdet(cov, a + c) + gaussian_logdet(cov, b + c)
               - gaussian_logdet(cov, c) - gaussian_logdet(cov, a + b + c))
    return _clamp(v)


# --------------------------------------------------------------------------
# atoms


_ATOM_RE = re.compile(r"^\s*([HI])\((.*)\)\s*$")


@dataclass(frozen=True)
class InfoAtom:
    """A symbolic term H(A|C) or I(A;B|C) over variable names."""

    kind: str
    a: tuple[str, ...]
    b: tuple[str, ...] = ()
    c: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("entropy", "mutual"):
            raise InfoError(f"bad atom kind {self.kind!r}")
        a, b, c = names_of(self.a), names_of(self.b), names_of(self.c)
        if not a:
            raise InfoError("atom needs a nonempty first set")
        if self.kind == "entropy" and b:
            raise InfoError("entropy atom takes no second set")
        if self.kind == "mutual" and not b:
            raise InfoError("mutual-information atom needs a second set")
        _check_disjoint(a, b, c)
        a, b, c = tuple(sorted(a)), tuple(sorted(b)), tuple(sorted(c))
        if self.kind == "mutual" and b < a:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def parse(cls, text: str) -> "InfoAtom":
        """Parse ``"I(U~ K~; C | C~)"`` or ``"H(U|A C)"``."""
        m = _ATOM_RE.match(text)
        if not m:
            raise InfoError(f"cannot parse atom {text!r}")
        kind, body = m.groups()
        body, _, cond = body.partition("|")
        if kind == "H":
            if ";" in body:
                raise InfoError(f"entropy atom with ';': {text!r}")
            return cls("entropy", names_of(body), (), names_of(cond))
        left, sep, right = body.partition(";")
        if not sep:
            raise InfoError(f"mutual information atom without ';': {text!r}")
        return cls("mutual", names_of(left), names_of(right), names_of(cond))

    @property
    def id(self) -> str:
        cond = f"|{','.join(self.c)}" if self.c else ""
        if self.kind == "entropy":
            return f"H({','.join(self.a)}{cond})"
        return f"I({','.join(self.a)};{','.join(self.b)}{cond})"

    def __str__(self) -> str:
        return self.id


def expand_aliases(names: NameSet, aliases: Mapping[str, Sequence[str]] | None) -> tuple[str, ...]:
    """Replace alias names by their members, recursively; empty aliases vanish."""
    out: list[str] = []

    def push(n: str, depth: int) -> None:
        if aliases and n in aliases:
            if depth > 16:
                raise InfoError(f"alias cycle at {n!r}")
            for m in aliases[n]:
                push(m, depth + 1)
        elif n not in out:
            out.append(n)

    for n in names_of(names):
        push(n, 0)
    return tuple(out)


class AtomEvaluator:
    """Evaluates discrete atoms from a joint-entropy function, with memoization.

    ``joint_h`` maps a tuple of names to H of those names; it lets factored
    models (independent blocks) supply entropies without a dense joint.
    """

    def __init__(self, joint_h: Callable[[tuple[str, ...]], float],
                 aliases: Mapping[str, Sequence[str]] | None = None):
        self._joint_h = joint_h
        self.aliases = dict(aliases or {})
        self._cache: dict[frozenset, float] = {}

    @classmethod
    def for_pmf(cls, pmf: JointPmf, aliases=None) -> "AtomEvaluator":
        return cls(lambda names: joint_entropy(pmf, names), aliases)

    def h(self, names: Iterable[str]) -> float:
        key = frozenset(names)
        if not key:
            return 0.0
        v = self._cache.get(key)
        if v is None:
            v = self._joint_h(tuple(sorted(key)))
            self._cache[key] = v
        return v

    def entropy(self, S: NameSet, C: NameSet = ()) -> float:
        s = expand_aliases(S, self.aliases)
        c = expand_aliases(C, self.aliases)
        return _clamp(self.h(s + c) - self.h(c))

    def mutual(self, A: NameSet, B: NameSet, C: NameSet = ()) -> float:
        # overlap introduced by aliases is handled by the set algebra:
        # I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C) holds for any sets
        a = expand_aliases(A, self.aliases)
        b = expand_aliases(B, self.aliases)
        c = expand_aliases(C, self.aliases)
        v = self.h(a + c) + self.h(b + c) - self.h(a + b + c) - self.h(c)
        return _clamp(v)

    def __call__(self, atom: "InfoAtom") -> float:
        if atom.kind == "entropy":
            return self.entropy(atom.a, atom.c)
        return self.mutual(atom.a, atom.b, atom.c)


def eval_atom(atom: InfoAtom, model: JointPmf | GaussianCov,
              aliases: Mapping[str, Sequence[str]] | None = None) -> float:
    """Numeric value of ``atom`` on a discrete or Gaussian model.

    ``aliases`` maps a symbolic name to the model variables it stands for
    (``{"S~": ["Y~"]}``, or ``{"A": []}`` for an absent variable).
    """
    if isinstance(model, GaussianCov):
        if atom.kind == "entropy":
            raise InfoError("entropy atoms are only defined on discrete models")
        a = expand_aliases(atom.a, aliases)
        b = expand_aliases(atom.b, aliases)
        c = expand_aliases(atom.c, aliases)
        a = tuple(n for n in a if n not in c)
        b = tuple(n for n in b if n not in c)
        if set(a) & set(b):
            raise InfoError("overlapping Gaussian sets have infinite information")
        if not a or not b:
            return 0.0
        return gaussian_mutual_info(model, a, b, c)
    return AtomEvaluator.for_pmf(model, aliases)(atom)
