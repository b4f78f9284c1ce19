"""Discrete two-block models and the rate regions evaluated on them.

A single-block distribution ``P`` over named variables (no ``~`` in the
names) is paired with a covering kernel ``Q`` whose inputs are previous-block
names (suffix ``~``) and whose outputs are current-block variables. The
two-block joint is

    P~(all previous-block variables) * Q(outputs | inputs~) * P(rest | outputs)

and every region bound is a combination of information atoms on that joint.
"""
from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .info import (
    AtomEvaluator, InfoAtom, InfoError, JointPmf, entropy, joint_entropy,
    marginalize, mutual_info, names_of,
)
from .polytope import _merge_points, RatePolytope, max_sum_rate, region_diff, slice_r0

CONSISTENCY_TOL = 1e-10
TILDE = "~"


class ConsistencyError(InfoError):
    pass


class PreconditionError(ValueError):
    pass


def tilde(name: str) -> str:
    return name + TILDE


def h2(p: float) -> float:
    """Binary entropy in bits."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def star(x: float, y: float) -> float:
    return x * (1 - y) + y * (1 - x)


# --------------------------------------------------------------------------
# kernels

@dataclass(frozen=True)
class Kernel:
    """Conditional pmf ``table[inputs..., outputs...]``; sums to 1 over outputs."""

    inputs: tuple[tuple[str, int], ...]
    outputs: tuple[tuple[str, int], ...]
    table: np.ndarray

    def __post_init__(self):
        ins = tuple((str(n), int(c)) for n, c in self.inputs)
        outs = tuple((str(n), int(c)) for n, c in self.outputs)
        if not outs:
            raise InfoError("kernel needs at least one output")
        shape = tuple(c for _, c in ins) + tuple(c for _, c in outs)
        t = np.array(self.table, dtype=float).reshape(shape)
        if np.any(t < 0):
            raise InfoError("kernel has negative entries")
        sums = t.reshape(int(np.prod([c for _, c in ins], dtype=int)), -1).sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-12):
            raise InfoError("kernel rows must sum to 1")
        t.setflags(write=False)
        object.__setattr__(self, "inputs", ins)
        object.__setattr__(self, "outputs", outs)
        object.__setattr__(self, "table", t)

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.inputs)

    @property
    def output_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.outputs)

    @classmethod
    def deterministic(cls, inputs, outputs, fn) -> "Kernel":
        """Kernel putting mass 1 on ``fn(*input_values)`` (a tuple of output values)."""
        inputs, outputs = tuple(inputs), tuple(outputs)
        shape = tuple(c for _, c in inputs) + tuple(c for _, c in outputs)
        t = np.zeros(shape)
        for idx in np.ndindex(*[c for _, c in inputs]):
            out = fn(*idx)
            out = out if isinstance(out, tuple) else (out,)
            t[idx + tuple(out)] = 1.0
        return cls(inputs, outputs, t)

    @classmethod
    def unconditional(cls, pmf: JointPmf) -> "Kernel":
        return cls((), tuple(pmf.variables), pmf.probs)

    def to_dict(self) -> dict:
        return {
            "inputs": [{"name": n, "card": c} for n, c in self.inputs],
            "outputs": [{"name": n, "card": c} for n, c in self.outputs],
            "table": self.table.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Kernel":
        ins = tuple((v["name"], v["card"]) for v in d.get("inputs", []))
        outs = tuple((v["name"], v["card"]) for v in d["outputs"])
        return cls(ins, outs, np.asarray(d["table"], dtype=float))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "Kernel":
        return cls.from_dict(json.loads(text))


def _strip(name: str) -> str:
    if not name.endswith(TILDE):
        raise ConsistencyError(f"kernel input {name!r} is not a previous-block name")
    return name[:-1]


def _check_shapes(P: JointPmf, Q: Kernel) -> None:
    for name, card in Q.inputs:
        base = _strip(name)
        if base not in P.names or P.card(base) != card:
            raise ConsistencyError(f"kernel input {name!r} does not match the block distribution")
    for name, card in Q.outputs:
        if name not in P.names or P.card(name) != card:
            raise ConsistencyError(f"kernel output {name!r} does not match the block distribution")


def induced_marginal(P: JointPmf, Q: Kernel) -> np.ndarray:
    """Distribution of Q's outputs when its inputs are drawn from P."""
    _check_shapes(P, Q)
    if not Q.inputs:
        return np.array(Q.table)
    base = [_strip(n) for n in Q.input_names]
    p_in = marginalize(P, base)
    p_in = np.transpose(p_in.probs, [p_in.names.index(b) for b in base])
    k = len(base)
    return np.tensordot(p_in, Q.table, axes=(list(range(k)), list(range(k))))


def check_consistency(P: JointPmf, Q: Kernel, tol: float = CONSISTENCY_TOL) -> bool:
    """True iff Q applied to P regenerates P's marginal on Q's outputs."""
    induced = induced_marginal(P, Q)
    target = marginalize(P, Q.output_names)
    target = np.transpose(target.probs, [target.names.index(n) for n in Q.output_names])
    return bool(np.max(np.abs(induced - target)) <= tol)


# --------------------------------------------------------------------------
# two-block model

def _rename(pmf: JointPmf, fn) -> JointPmf:
    return JointPmf.from_flat(tuple((fn(n), c) for n, c in pmf.variables), pmf.probs)


@dataclass(frozen=True)
class TwoBlockModel:
    """Previous and current block joined through the covering kernel.

    ``pmf`` is the dense two-block joint, or None when the kernel has no
    inputs; then the blocks are independent and entropies add across them.
    """

    block: JointPmf
    kernel: Kernel
    aliases: Mapping[str, tuple[str, ...]]
    pmf: JointPmf | None = None
    evaluator: AtomEvaluator = field(default=None, compare=False, repr=False)

    @property
    def factored(self) -> bool:
        return self.pmf is None

    def atom(self, text: str) -> float:
        return self.evaluator(InfoAtom.parse(text))

    def I(self, a: str, b: str, c: str = "") -> float:
        return self.evaluator.mutual(a, b, c)

    def H(self, s: str, c: str = "") -> float:
        return self.evaluator.entropy(s, c)

    def current_marginal(self) -> JointPmf:
        if self.pmf is None:
            return self.block
        return marginalize(self.pmf, self.block.names)

    def previous_marginal(self) -> JointPmf:
        if self.pmf is None:
            return _rename(self.block, tilde)
        return marginalize(self.pmf, [tilde(n) for n in self.block.names])


def _full_aliases(block: JointPmf, aliases: Mapping[str, Sequence[str]] | None,
                  defaults: Sequence[str]) -> dict[str, tuple[str, ...]]:
    out: dict[str, tuple[str, ...]] = {}
    for name in defaults:
        if name not in block.names:
            out[name] = ()
    for k, v in (aliases or {}).items():
        out[k] = tuple(names_of(v))
    for k, v in list(out.items()):
        out[tilde(k)] = tuple(tilde(n) for n in v)
    return out


def build_two_block(P: JointPmf, Q: Kernel, aliases: Mapping[str, Sequence[str]] | None = None,
                    defaults: Sequence[str] = ()) -> TwoBlockModel:
    """Assemble the two-block joint; raises ConsistencyError if Q breaks stationarity.

    ``aliases`` maps composite names (e.g. ``"S": ["Y"]``) to block variables;
    names listed in ``defaults`` that are missing from P become empty aliases.
    """
    if any(n.endswith(TILDE) for n in P.names):
        raise ConsistencyError("block variable names must not end with '~'")
    if not check_consistency(P, Q):
        raise ConsistencyError("kernel does not regenerate the block marginal of its outputs")
    al = _full_aliases(P, aliases, defaults)
    prev = _rename(P, tilde)

    if not Q.inputs:
        def joint_h(names: tuple[str, ...]) -> float:
            old = [n for n in names if n.endswith(TILDE)]
            new = [n for n in names if not n.endswith(TILDE)]
            v = 0.0
            if old:
                v += joint_entropy(prev, old)
            if new:
                v += joint_entropy(P, new)
            return v

        return TwoBlockModel(P, Q, al, None, AtomEvaluator(joint_h, al))

    letters = iter(string.ascii_letters)
    sym = {}
    for n in prev.names + P.names:
        sym[n] = next(letters)
    outs = Q.output_names
    rest = [n for n in P.names if n not in outs]
    # P(rest | outputs)
    cur = np.transpose(P.probs, [P.axis(n) for n in list(outs) + rest])
    p_out = cur.reshape(cur.shape[:len(outs)] + (-1,)).sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = np.where(p_out.reshape(p_out.shape + (1,) * len(rest)) > 0,
                        cur / p_out.reshape(p_out.shape + (1,) * len(rest)), 0.0)
    spec = (
        "".join(sym[n] for n in prev.names) + ","
        + "".join(sym[n] for n in Q.input_names) + "".join(sym[n] for n in outs) + ","
        + "".join(sym[n] for n in list(outs) + rest) + "->"
        + "".join(sym[n] for n in prev.names) + "".join(sym[n] for n in P.names)
    )
    joint = np.einsum(spec, prev.probs, Q.table, cond, optimize=True)
    pmf = JointPmf.from_flat(prev.variables + P.variables, joint / joint.sum())
    model = TwoBlockModel(P, Q, al, pmf, AtomEvaluator.for_pmf(pmf, al))
    now = model.current_marginal()
    if np.max(np.abs(now.probs - P.probs)) > CONSISTENCY_TOL:
        raise ConsistencyError("current-block marginal differs from the block distribution")
    return model


# --------------------------------------------------------------------------
# region builders

THEOREM1_LABELS = ("R0<=T1", "R0<=T2", "R0<=T3", "R0<=T4", "R0<=T5",
                   "R0+R1", "R0+R2", "R0+R1+R2 (a)", "R0+R1+R2 (b)", "2R0+R1+R2")
COROLLARY1_LABELS = ("R0<=T1", "R0<=T2", "R0+R1", "R0+R2", "R0+R1+R2 (a)",
                     "R0+R1+R2 (b)", "2R0+R1+R2")
_COEFFS = {
    "R0": (1, 0, 0), "R0+R1": (1, 1, 0), "R0+R2": (1, 0, 1),
    "R0+R1+R2": (1, 1, 1), "2R0+R1+R2": (2, 1, 1),
}


def _coeff(label: str) -> tuple[int, int, int]:
    return _COEFFS[label.split(" ")[0].split("<=")[0]]


def polytope_from_bounds(bounds: Mapping[str, float], meta=None) -> RatePolytope:
    """Region from labelled right-hand sides; a negative one empties the region."""
    labels = list(bounds)
    rows = [_coeff(lab) + (bounds[lab],) for lab in labels]
    meta = dict(meta or {})
    meta.setdefault("time_sharing", "single distribution; convex hull not taken")
    return RatePolytope.from_rows(rows, labels, meta)


THEOREM1_DEFAULTS = ("A", "B", "S")


def build_theorem1_model(P: JointPmf, Q: Kernel, aliases=None) -> TwoBlockModel:
    """Two-block model with K = (A, B, S); missing A, B or S are empty."""
    al = dict(aliases or {})
    al.setdefault("K", ("A", "B", "S"))
    return build_two_block(P, Q, al, THEOREM1_DEFAULTS)


def theorem1_bounds(m: TwoBlockModel) -> dict[str, float]:
    I = m.I
    T = m.H("U", "A C") + m.H("V", "B C") - m.H("U V", "A B C")
    X1 = I("U~ A C", "Y Y~ A~", "C~") - I("V~ K~", "A C", "U~ C~")
    X2 = I("V~ B C", "Z Z~ B~", "C~") - I("U~ K~", "B C", "V~ C~")
    T1 = I("A C", "Y Y~ A~", "C~ U~") - I("V~ K~", "A C", "C~ U~")
    T2 = I("B C", "Z Z~ B~", "C~ V~") - I("U~ K~", "B C", "C~ V~")
    iab = I("A", "B", "C C~ U~ V~ K~")
    T3 = T1 + I("B", "Z Z~ B~", "C~ V~ C") - I("U~ K~ A", "B", "C C~ V~")
    T4 = (I("A", "Y Y~ A~", "C~ U~ C") - I("U~ K~", "B C", "C~ V~")
          + I("B C", "Z Z~ B~", "C~ V~") - I("V~ K~ B", "A", "C C~ U~"))
    T5 = 0.5 * (T1 + T2 - iab)
    sa = X1 - T + I("V~", "C", "C~") + I("V~ B", "Z Z~ B~", "C C~") - I("U~ K~ A", "B", "C V~ C~")
    sb = X2 - T + I("U~", "C", "C~") + I("U~ A", "Y Y~ A~", "C C~") - I("V~ K~ B", "A", "C U~ C~")
    return dict(zip(THEOREM1_LABELS, (T1, T2, T3, T4, T5, X1, X2, sa, sb, X1 + X2 - T - iab)))


def theorem1_region(model: TwoBlockModel) -> RatePolytope:
    return polytope_from_bounds(theorem1_bounds(model), {"region": "theorem1"})


COROLLARY1_DEFAULTS = ("W", "S")


def build_corollary1_model(P: JointPmf, Q: Kernel, aliases=None) -> TwoBlockModel:
    """Two-block model over C0, W, U, V, Y, Z (S by alias); Q outputs C0 only."""
    if Q.output_names != ("C0",):
        raise ConsistencyError("the covering kernel must output C0 alone")
    return build_two_block(P, Q, aliases, COROLLARY1_DEFAULTS)


def corollary1_terms(m: TwoBlockModel) -> dict[str, float]:
    I = m.I
    keys = {
        "I(UW;Y|C0)": ("U W", "Y", "C0"),
        "I(VW;Z|C0)": ("V W", "Z", "C0"),
        "I(C0;Y|Y~C0~W~)": ("C0", "Y", "Y~ C0~ W~"),
        "I(C0;Z|Z~C0~W~)": ("C0", "Z", "Z~ C0~ W~"),
        "I(C0;Y~|C0~W~U~)": ("C0", "Y~", "C0~ W~ U~"),
        "I(C0;Z~|C0~W~V~)": ("C0", "Z~", "C0~ W~ V~"),
        "I(V~S~;C0|C0~W~U~)": ("V~ S~", "C0", "C0~ W~ U~"),
        "I(U~S~;C0|C0~W~V~)": ("U~ S~", "C0", "C0~ W~ V~"),
        "I(C0Z~;V~|C0~W~)": ("C0 Z~", "V~", "C0~ W~"),
        "I(C0Y~;U~|C0~W~)": ("C0 Y~", "U~", "C0~ W~"),
        "I(U;V|W)": ("U", "V", "W"),
        "I(C0W;Y|Y~C0~W~U~)": ("C0 W", "Y", "Y~ C0~ W~ U~"),
        "I(C0W;Z|Z~C0~W~V~)": ("C0 W", "Z", "Z~ C0~ W~ V~"),
    }
    return {k: I(*v) for k, v in keys.items()}


def corollary1_bounds_from_terms(t: Mapping[str, float]) -> dict[str, float]:
    B1 = t["I(UW;Y|C0)"] + t["I(C0;Y|Y~C0~W~)"] + t["I(C0;Y~|C0~W~U~)"] - t["I(V~S~;C0|C0~W~U~)"]
    B2 = t["I(VW;Z|C0)"] + t["I(C0;Z|Z~C0~W~)"] + t["I(C0;Z~|C0~W~V~)"] - t["I(U~S~;C0|C0~W~V~)"]
    T1 = t["I(C0;Y~|C0~W~U~)"] + t["I(C0W;Y|Y~C0~W~U~)"] - t["I(V~S~;C0|C0~W~U~)"]
    T2 = t["I(C0;Z~|C0~W~V~)"] + t["I(C0W;Z|Z~C0~W~V~)"] - t["I(U~S~;C0|C0~W~V~)"]
    iuv = t["I(U;V|W)"]
    vals = (T1, T2, B1, B2, B1 + t["I(C0Z~;V~|C0~W~)"] - iuv,
            B2 + t["I(C0Y~;U~|C0~W~)"] - iuv, B1 + B2 - iuv)
    return dict(zip(COROLLARY1_LABELS, vals))


def corollary1_region(model: TwoBlockModel) -> RatePolytope:
    return polytope_from_bounds(corollary1_bounds_from_terms(corollary1_terms(model)),
                                {"region": "corollary1"})


# --------------------------------------------------------------------------
# closed forms

DUECK_LABELS = ("R0", "R0+R1", "R0+R2", "R0+R1+R2")


def _check_noise_pmf(pmf_N: JointPmf) -> None:
    if set(pmf_N.names) != {"N0", "N1", "N2"} or any(c != 2 for c in pmf_N.cards):
        raise PreconditionError("noise pmf must be over binary N0, N1, N2")
    for pair in (("N0", "N1"), ("N0", "N2")):
        if joint_entropy(pmf_N, pair) > 1.0 + 1e-12:
            raise PreconditionError(f"H({','.join(pair)}) exceeds 1 bit")


def dueck_region_closed_form(pmf_N: JointPmf) -> RatePolytope:
    _check_noise_pmf(pmf_N)
    H = lambda s: joint_entropy(pmf_N, s)  # noqa: E731
    b = {
        "R0": 1.0 - H("N0") - entropy(pmf_N, "N1", "N0 N2"),
        "R0+R1": 2.0 - H("N0 N1"),
        "R0+R2": 2.0 - H("N0 N1 N2"),
        "R0+R1+R2": 3.0 - H("N0 N1 N2"),
    }
    return polytope_from_bounds(b, {"region": "dueck-closed-form"})


def dueck_capacity_corners(pmf_N: JointPmf) -> list[tuple[float, float]]:
    """Vertices of {R1 <= 2-H(N0N1), R2 <= 2-H(N0N2), R1+R2 <= 3-H(N0N1N2)}."""
    _check_noise_pmf(pmf_N)
    H = lambda s: joint_entropy(pmf_N, s)  # noqa: E731
    poly = RatePolytope.from_rows([(0, 1, 0, 2 - H("N0 N1")), (0, 0, 1, 2 - H("N0 N2")),
                                   (0, 1, 1, 3 - H("N0 N1 N2"))])
    return slice_r0(poly, 0.0)


def swap_receivers(pmf_N: JointPmf) -> JointPmf:
    return JointPmf.from_flat(tuple(({"N1": "N2", "N2": "N1"}.get(n, n), c) for n, c in pmf_N.variables),
                    pmf_N.probs)


def dueck_reduced_slice(region_fn, pmf_N: JointPmf) -> list[tuple[float, float]]:
    """Convex hull of the R0 = 0 slices for both C0 role choices.

    The second choice is the first one with receivers relabelled; its slice
    is mirrored back into (R1, R2).
    """
    from scipy.spatial import ConvexHull

    first = slice_r0(region_fn(pmf_N), 0.0)
    second = [(r2, r1) for r1, r2 in slice_r0(region_fn(swap_receivers(pmf_N)), 0.0)]
    pts = _merge_points(np.array(first + second) + 0.0)
    if len(pts) < 3:
        return [tuple(map(float, p)) for p in pts]
    ring = [p for p in pts[ConvexHull(pts).vertices]]
    # qhull can keep points lying on an edge up to rounding; drop them
    changed = True
    while changed and len(ring) > 3:
        changed = False
        for i in range(len(ring)):
            a, b, c = ring[i - 1], ring[i], ring[(i + 1) % len(ring)]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if abs(cross) <= 1e-10:
                del ring[i]
                changed = True
                break
    keep = ring
    return [tuple(map(float, p)) for p in keep]


BLACKWELL_LABELS = ("R0", "R0+R1", "R0+R2", "R0+R1+R2")


def _check_blackwell(p: float, alpha: float, beta: float) -> None:
    if not 0.0 <= p <= 0.5:
        raise PreconditionError(f"p must lie in [0, 1/2], got {p}")
    if alpha < 0 or beta < 0 or alpha + beta > 1.0 + 1e-12:
        raise PreconditionError("need alpha, beta >= 0 and alpha + beta <= 1")


def _ratio_h(num: float, den: float) -> float:
    return den * h2(num / den) if den > 0 else 0.0


def blackwell_region_closed_form(p: float, alpha: float, beta: float,
                                 complete: bool = False) -> RatePolytope:
    """Region of the noisy Blackwell channel with the R0 bound written as
    h(p * (a+b)/2) - h(p * a)/2 - h(p * b)/2 (the common-message rate I(W;Y)).

    The four-row form leaves out the bound on 2R0+R1+R2, which is active for
    most parameters; ``complete=True`` adds it as
    2(h(p * (a+b)/2) - h(p)) - I(U;V|W).
    """
    _check_blackwell(p, alpha, beta)
    hs = h2(star(p, (alpha + beta) / 2))
    priv = 0.5 * (_ratio_h(alpha, 1 - beta) + _ratio_h(beta, 1 - alpha))
    b = {
        "R0": hs - 0.5 * h2(star(p, alpha)) - 0.5 * h2(star(p, beta)),
        "R0+R1": hs - h2(p),
        "R0+R2": hs - h2(p),
        "R0+R1+R2": hs + priv - h2(p),
    }
    if complete:
        iuv = 0.5 * (h2(alpha) + h2(beta)) - priv
        b["2R0+R1+R2"] = 2 * (hs - h2(p)) - iuv
    return polytope_from_bounds(b, {"region": "blackwell-closed-form"})


def blackwell_r0_variant(p: float, alpha: float, beta: float) -> float:
    """R0 expression with both crossover probabilities halved inside h(); it
    is not the common-message rate and is kept only for comparison."""
    hs = h2(star(p, (alpha + beta) / 2))
    return (hs - 0.5 * h2((alpha * p + (1 - alpha) * (1 - p)) / 2)
            - 0.5 * h2((beta * p + (1 - beta) * (1 - p)) / 2))


def closed_form_diff(closed: RatePolytope, numeric: RatePolytope) -> dict[str, float]:
    """|closed - numeric| per closed-form row, against the tightest numeric row
    with the same coefficients."""
    out = {}
    for lab, a, r in zip(closed.labels, closed.A, closed.b):
        same = [nr for na, nr in zip(numeric.A, numeric.b) if np.array_equal(na, a)]
        out[lab] = abs(float(r) - min(same)) if same else float("inf")
    return out


# --------------------------------------------------------------------------
# Marton

MARTON_LABELS = ("R0<=I(W;Y)", "R0<=I(W;Z)", "R0+R1", "R0+R2", "R0+R1+R2 (a)",
                 "R0+R1+R2 (b)", "2R0+R1+R2")


def marton_block(p_uvw: JointPmf, channel: Kernel) -> JointPmf:
    """Single-block joint over U, V, W, Y, Z from P_UVW(X) and a channel kernel.

    The channel's inputs are names of ``p_uvw`` (e.g. ``X`` or ``U, V``);
    any variable other than U, V, W, Y, Z is summed out.
    """
    ins = channel.input_names
    for n in ins:
        if n not in p_uvw.names:
            raise InfoError(f"channel input {n!r} is not in the source distribution")
    sym = {n: string.ascii_letters[i] for i, n in enumerate(p_uvw.names + channel.output_names)}
    kept = [(n, c) for n, c in p_uvw.variables + channel.outputs if n in ("U", "V", "W", "Y", "Z")]
    spec = ("".join(sym[n] for n in p_uvw.names) + ","
            + "".join(sym[n] for n in ins + channel.output_names) + "->"
            + "".join(sym[n] for n, _ in kept))
    joint = np.einsum(spec, p_uvw.probs, channel.table, optimize=True)
    return JointPmf.from_flat(tuple(kept), joint / joint.sum())


def marton_bounds_direct(block: JointPmf) -> dict[str, float]:
    I = lambda a, b, c="": mutual_info(block, a, b, c)  # noqa: E731
    iuv = I("U", "V", "W")
    uy, vz = I("U W", "Y"), I("V W", "Z")
    vals = (I("W", "Y"), I("W", "Z"), uy, vz, uy + I("V", "Z", "W") - iuv,
            vz + I("U", "Y", "W") - iuv, uy + vz - iuv)
    return dict(zip(MARTON_LABELS, vals))


def marton_direct_region(block: JointPmf) -> RatePolytope:
    return polytope_from_bounds(marton_bounds_direct(block), {"region": "marton"})


def marton_model(block: JointPmf) -> TwoBlockModel:
    """No covering inputs, C = W, no A or B: blocks are independent."""
    renamed = _rename(block, lambda n: "C" if n == "W" else n)
    q = Kernel.unconditional(marginalize(renamed, ["C"]))
    return build_theorem1_model(renamed, q, {"S": ()})


def marton_region(p_uvw: JointPmf, channel: Kernel) -> RatePolytope:
    return theorem1_region(marton_model(marton_block(p_uvw, channel)))


def marton_compare(block: JointPmf) -> dict[str, float]:
    """Signed differences (substituted minus direct) bound for bound."""
    t = theorem1_bounds(marton_model(block))
    d = marton_bounds_direct(block)
    pairs = {
        "R0": (min(t[k] for k in THEOREM1_LABELS[:5]), min(d["R0<=I(W;Y)"], d["R0<=I(W;Z)"])),
        "R0+R1": (t["R0+R1"], d["R0+R1"]),
        "R0+R2": (t["R0+R2"], d["R0+R2"]),
        "R0+R1+R2 (a)": (t["R0+R1+R2 (a)"], d["R0+R1+R2 (a)"]),
        "R0+R1+R2 (b)": (t["R0+R1+R2 (b)"], d["R0+R1+R2 (b)"]),
        "2R0+R1+R2": (t["2R0+R1+R2"], d["2R0+R1+R2"]),
    }
    return {k: a - b for k, (a, b) in pairs.items()}


# --------------------------------------------------------------------------
# derived system vs stated bounds

def fme_theorem1_report(model: TwoBlockModel, system=None, tol: float = 1e-6) -> dict:
    """Compare the evaluated elimination output with ``theorem1_region``.

    Returns a JSON-ready dict. Each vertex of one region lying outside the
    other lists the rows it violates; rows of the derived system carry their
    symbolic form and the chain of original constraints that produced them.
    """
    from . import fme

    if system is None:
        system = fme.derive_region()
    derived = fme.to_polytope(system, fme.model_values(model))
    stated = theorem1_region(model)
    diff = region_diff(derived, stated, tol)
    bounds = theorem1_bounds(model)

    def expand(entry):
        label = entry["label"]
        if label.startswith("fme"):
            q = system.ineqs[int(label[3:])]
            return dict(entry, row=str(q), derivation=q.label)
        return dict(entry, bound=bounds.get(label))

    def side(items):
        return [dict(v, violated=[expand(e) for e in v["violated"]]) for v in items]

    return {
        "equal": not diff["differs"],
        "tol": tol,
        "derived_empty": derived.is_empty,
        "stated_empty": stated.is_empty,
        "derived_outside_stated": side(diff["a_outside_b"]),
        "stated_outside_derived": side(diff["b_outside_a"]),
        "stated_bounds": bounds,
        "derived_rows": len(derived.b),
    }


__all__ = [
    "Kernel", "TwoBlockModel", "ConsistencyError", "PreconditionError",
    "check_consistency", "induced_marginal", "build_two_block", "build_theorem1_model",
    "build_corollary1_model", "theorem1_bounds", "theorem1_region", "corollary1_terms",
    "corollary1_bounds_from_terms", "corollary1_region", "dueck_region_closed_form",
    "dueck_capacity_corners", "dueck_reduced_slice", "swap_receivers",
    "blackwell_region_closed_form", "blackwell_r0_variant", "closed_form_diff",
    "marton_block", "marton_bounds_direct", "marton_direct_region", "marton_model",
    "marton_region", "marton_compare", "fme_theorem1_report", "polytope_from_bounds", "max_sum_rate", "h2", "star",
]
