"""Exact Fourier-Motzkin elimination over rate inequalities with symbolic
information-measure right-hand sides.

Each row reads ``sum_v c_v * v <= rhs`` where ``rhs`` is an affine
combination of information atoms (``InfoAtom`` ids) with rational weights.
All arithmetic is in ``fractions.Fraction``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .info import InfoAtom
from .polytope import RatePolytope

RATE_VARS = ("R0", "R1", "R2")
AUX_VARS = ("R1p", "R2p", "rho0", "rho1", "rho2")
ALL_VARS = RATE_VARS + AUX_VARS
DEFAULT_ELIMINATE = ("rho1", "rho2", "rho0", "R1p", "R2p")

_ATOMS: dict[str, InfoAtom] = {}


def atom(text: str) -> str:
    """Register an atom given as ``"I(U~ K~; C | C~)"`` and return its id."""
    a = InfoAtom.parse(text)
    _ATOMS.setdefault(a.id, a)
    return a.id


def atom_by_id(atom_id: str) -> InfoAtom:
    a = _ATOMS.get(atom_id)
    if a is None:
        a = InfoAtom.parse(atom_id)
        _ATOMS[atom_id] = a
    return a


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _freeze(d: Mapping[str, Fraction]) -> tuple[tuple[str, Fraction], ...]:
    return tuple(sorted((k, v) for k, v in d.items() if v != 0))


@dataclass(frozen=True)
class AffineExpr:
    """sum_k coeffs[k] * atom_k + constant."""

    coeffs: tuple[tuple[str, Fraction], ...] = ()
    constant: Fraction = Fraction(0)

    @classmethod
    def of(cls, terms: Mapping[str, object] | None = None, constant=0) -> "AffineExpr":
        d: dict[str, Fraction] = {}
        for k, v in (terms or {}).items():
            d[k] = d.get(k, Fraction(0)) + _frac(v)
        return cls(_freeze(d), _frac(constant))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other: "AffineExpr") -> "AffineExpr":
        d = self.as_dict()
        for k, v in other.coeffs:
            d[k] = d.get(k, Fraction(0)) + v
        return AffineExpr(_freeze(d), self.constant + other.constant)

    def scale(self, s: Fraction) -> "AffineExpr":
        s = _frac(s)
        return AffineExpr(_freeze({k: v * s for k, v in self.coeffs}), self.constant * s)

    def __neg__(self) -> "AffineExpr":
        return self.scale(Fraction(-1))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs and self.constant == 0

    def evaluate(self, values: Mapping[str, float] | Callable[[str], float]) -> float:
        get = values if callable(values) else values.__getitem__
        return float(self.constant) + sum(float(v) * get(k) for k, v in self.coeffs)

    def __str__(self) -> str:
        parts = [f"{v}*{k}" for k, v in self.coeffs]
        if self.constant or not parts:
            parts.append(str(self.constant))
        return " + ".join(parts)


@dataclass(frozen=True)
class LinIneq:
    """sum_v var_coeffs[v] * v <= rhs."""

    var_coeffs: tuple[tuple[str, Fraction], ...]
    rhs: AffineExpr
    label: str = ""

    @classmethod
    def of(cls, coeffs: Mapping[str, object], rhs: AffineExpr, label: str = "") -> "LinIneq":
        d = {k: _frac(v) for k, v in coeffs.items()}
        for k in d:
            if k not in ALL_VARS:
                raise ValueError(f"unknown rate variable {k!r}")
        return cls(_freeze(d), rhs, label)

    def coeff(self, var: str) -> Fraction:
        for k, v in self.var_coeffs:
            if k == var:
                return v
        return Fraction(0)

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.var_coeffs)

    @property
    def trivial(self) -> bool:
        """0 <= 0."""
        return not self.var_coeffs and self.rhs.is_zero

    def scale(self, s: Fraction) -> "LinIneq":
        if s <= 0:
            raise ValueError("inequalities scale by positive factors only")
        return LinIneq(_freeze({k: v * s for k, v in self.var_coeffs}), self.rhs.scale(s), self.label)

    def normalized(self) -> "LinIneq":
        """Positive rescaling with the first nonzero entry equal to +-1."""
        lead = None
        if self.var_coeffs:
            lead = self.var_coeffs[0][1]
        elif self.rhs.coeffs:
            lead = self.rhs.coeffs[0][1]
        elif self.rhs.constant != 0:
            lead = self.rhs.constant
        if lead is None:
            return self
        return self.scale(1 / abs(lead))

    def key(self):
        n = self.normalized()
        return n.var_coeffs, n.rhs

    def __str__(self) -> str:
        lhs = " + ".join(f"{v}*{k}" for k, v in self.var_coeffs) or "0"
        return f"{lhs} <= {self.rhs}"


@dataclass(frozen=True)
class IneqSystem:
    ineqs: tuple[LinIneq, ...]
    eliminated: tuple[str, ...] = ()

    def __post_init__(self):
        for q in self.ineqs:
            for v in q.vars:
                if v in self.eliminated:
                    raise ValueError(f"row references eliminated variable {v!r}")

    def __len__(self) -> int:
        return len(self.ineqs)

    @property
    def variables(self) -> tuple[str, ...]:
        seen = {v for q in self.ineqs for v in q.vars}
        return tuple(v for v in ALL_VARS if v in seen)

    def atoms(self) -> tuple[str, ...]:
        return tuple(sorted({k for q in self.ineqs for k, _ in q.rhs.coeffs}))

    def counts(self, var: str) -> tuple[int, int, int]:
        pos = sum(1 for q in self.ineqs if q.coeff(var) > 0)
        neg = sum(1 for q in self.ineqs if q.coeff(var) < 0)
        return pos, neg, len(self.ineqs) - pos - neg

    def canonical(self) -> "IneqSystem":
        rows = sorted(self.ineqs, key=lambda q: (q.var_coeffs, q.rhs.coeffs, q.rhs.constant))
        return IneqSystem(tuple(rows), self.eliminated)


# --------------------------------------------------------------------------
# the covering / packing system

def _E(*terms, const=0) -> AffineExpr:
    """AffineExpr from (coefficient, atom-text) pairs."""
    d: dict[str, Fraction] = {}
    for c, text in terms:
        k = atom(text)
        d[k] = d.get(k, Fraction(0)) + _frac(c)
    return AffineExpr(_freeze(d), _frac(const))


def build_theorem1_system() -> IneqSystem:
    """Covering, packing and bin-size constraints plus the auxiliary rows.

    Strict inequalities are closed; '>=' rows are negated into '<='.
    """
    cov0 = "I(U~ K~ V~; C | C~)"
    covA = "I(V~ K~; A | C C~ U~)"
    covB = "I(U~ K~; B | C C~ V~)"
    covAB = "I(A; B | U~ K~ V~ C C~)"
    packA = "I(A; Y A~ Y~ | U~ C C~)"
    packB = "I(B; Z B~ Z~ | V~ C C~)"
    packCY = "I(C; Y A~ Y~ U~ | C~)"
    packCZ = "I(C; Z B~ Z~ V~ | C~)"
    rows = [
        # bin sizes: R1' + R2' - R1 - R2 >= H(U|AC) + H(V|BC) - H(UV|ABC)
        LinIneq.of({"R1p": -1, "R2p": -1, "R1": 1, "R2": 1},
                   _E((-1, "H(U | A C)"), (-1, "H(V | B C)"), (1, "H(U V | A B C)")), "bins"),
        # covering
        LinIneq.of({"rho0": -1, "R0": 1}, _E((-1, cov0)), "cover0"),
        LinIneq.of({"rho0": -1, "rho1": -1, "R0": 1}, _E((-1, covA), (-1, cov0)), "cover01"),
        LinIneq.of({"rho0": -1, "rho2": -1, "R0": 1}, _E((-1, covB), (-1, cov0)), "cover02"),
        LinIneq.of({"rho0": -1, "rho1": -1, "rho2": -1, "R0": 1},
                   _E((-1, covA), (-1, covB), (-1, covAB), (-1, cov0)), "cover012"),
        # packing
        LinIneq.of({"R1p": 1, "rho0": 1, "rho1": 1},
                   _E((1, "I(U~; Y Y~ A~ | C~)"), (1, packCY), (1, packA)), "pack1a"),
        LinIneq.of({"R1p": 1, "rho1": 1},
                   _E((1, "I(U~; Y A~ Y~ C | C~)"), (1, packA)), "pack1b"),
        LinIneq.of({"R2p": 1, "rho0": 1, "rho2": 1},
                   _E((1, "I(V~; Z Z~ B~ | C~)"), (1, packCZ), (1, packB)), "pack2a"),
        LinIneq.of({"R2p": 1, "rho2": 1},
                   _E((1, "I(V~; Z B~ Z~ C | C~)"), (1, packB)), "pack2b"),
        LinIneq.of({"rho0": 1, "rho1": 1}, _E((1, packCY), (1, packA)), "pack1c"),
        LinIneq.of({"rho0": 1, "rho2": 1}, _E((1, packCZ), (1, packB)), "pack2c"),
        LinIneq.of({"rho1": 1}, _E((1, packA)), "pack1d"),
        LinIneq.of({"rho2": 1}, _E((1, packB)), "pack2d"),
    ]
    zero = AffineExpr()
    aux = [
        LinIneq.of({"R1": 1, "R1p": -1}, zero, "R1p>=R1"),
        LinIneq.of({"R2": 1, "R2p": -1}, zero, "R2p>=R2"),
        LinIneq.of({"R0": 1, "rho0": -1}, zero, "rho0>=R0"),
        LinIneq.of({"rho1": -1}, zero, "rho1>=0"),
        LinIneq.of({"rho2": -1}, zero, "rho2>=0"),
        LinIneq.of({"R0": -1}, zero, "R0>=0"),
        LinIneq.of({"R1": -1}, zero, "R1>=0"),
        LinIneq.of({"R2": -1}, zero, "R2>=0"),
    ]
    return IneqSystem(tuple(rows + aux))


# --------------------------------------------------------------------------
# elimination

def _combine(p: LinIneq, n: LinIneq, var: str) -> LinIneq:
    cp, cn = p.coeff(var), -n.coeff(var)
    a, b = p.scale(1 / cp), n.scale(1 / cn)
    d = dict(a.var_coeffs)
    for k, v in b.var_coeffs:
        d[k] = d.get(k, Fraction(0)) + v
    d.pop(var, None)
    return LinIneq(_freeze(d), a.rhs + b.rhs, f"({p.label})+({n.label})" if p.label or n.label else "")


def prune(rows: Iterable[LinIneq]) -> list[LinIneq]:
    """Drop 0 <= 0 rows, exact duplicates and positive multiples (first kept)."""
    seen = set()
    out = []
    for q in rows:
        if q.trivial:
            continue
        k = q.key()
        if k in seen:
            continue
        seen.add(k)
        out.append(q)
    return out


def eliminate(system: IneqSystem, var: str, prune_rows: bool = True) -> IneqSystem:
    if var in system.eliminated:
        raise ValueError(f"{var!r} already eliminated")
    if var not in ALL_VARS:
        raise ValueError(f"unknown rate variable {var!r}")
    pos = [q for q in system.ineqs if q.coeff(var) > 0]
    neg = [q for q in system.ineqs if q.coeff(var) < 0]
    rest = [q for q in system.ineqs if q.coeff(var) == 0]
    new = rest + [_combine(p, n, var) for p in pos for n in neg]
    if prune_rows:
        new = prune(new)
    return IneqSystem(tuple(new), system.eliminated + (var,)).canonical()


def choose_next(system: IneqSystem, candidates: Sequence[str]) -> str:
    """Variable with the fewest generated rows (pos * neg); ties by name."""
    def cost(v):
        p, n, _ = system.counts(v)
        return (p * n, v)
    return min(candidates, key=cost)


def eliminate_sequence(system: IneqSystem, order: Sequence[str]) -> IneqSystem:
    """Eliminate ``order`` left to right; an empty order returns ``system``."""
    for v in order:
        system = eliminate(system, v)
    return system


def derive_region(order: Sequence[str] | None = None,
                  system: IneqSystem | None = None) -> IneqSystem:
    """Project the covering/packing system onto (R0, R1, R2)."""
    sys_ = system if system is not None else build_theorem1_system()
    if order is not None:
        order = list(order)
        if sorted(order) != sorted(DEFAULT_ELIMINATE):
            raise ValueError(f"order must be a permutation of {DEFAULT_ELIMINATE}")
        return eliminate_sequence(sys_, order)
    left = list(DEFAULT_ELIMINATE)
    while left:
        v = choose_next(sys_, left)
        sys_ = eliminate(sys_, v)
        left.remove(v)
    return sys_


# --------------------------------------------------------------------------
# numeric evaluation and serialization

def evaluate_rows(system: IneqSystem, values, variables: Sequence[str] = RATE_VARS):
    """Numeric (A, b) with columns in ``variables``."""
    A = np.array([[float(q.coeff(v)) for v in variables] for q in system.ineqs]).reshape(-1, len(variables))
    b = np.array([q.rhs.evaluate(values) for q in system.ineqs])
    return A, b


def to_polytope(system: IneqSystem, values, meta=None, reduce: bool = True) -> RatePolytope:
    """Evaluate atoms (a mapping or callable on atom ids) into a RatePolytope.

    With ``reduce`` only the smallest right-hand side is kept among rows
    sharing a coefficient vector (numeric dominance, exact for the region).
    """
    extra = set(system.variables) - set(RATE_VARS)
    if extra:
        raise ValueError(f"system still has variables {sorted(extra)}")
    A, b = evaluate_rows(system, values)
    labels = [f"fme{i}" for i in range(len(b))]
    if reduce and len(b):
        best: dict[tuple, int] = {}
        for i, row in enumerate(map(tuple, A)):
            j = best.get(row)
            if j is None or b[i] < b[j]:
                best[row] = i
        keep = sorted(best.values())
        A, b, labels = A[keep], b[keep], [labels[i] for i in keep]
    return RatePolytope(A, b, labels, dict(meta or {"region": "fme"}))


def model_values(model) -> Callable[[str], float]:
    """Atom-id evaluator on a two-block model."""
    cache: dict[str, float] = {}

    def get(k: str) -> float:
        v = cache.get(k)
        if v is None:
            v = cache[k] = model.evaluator(atom_by_id(k))
        return v

    return get


def _fs(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def to_json_dict(system: IneqSystem) -> dict:
    vars_ = [v for v in ALL_VARS if v not in system.eliminated]
    return {
        "vars": vars_,
        "inequalities": [
            {
                "var_coeffs": {k: _fs(v) for k, v in q.var_coeffs},
                "rhs": {"atoms": {k: _fs(v) for k, v in q.rhs.coeffs}, "const": _fs(q.rhs.constant)},
            }
            for q in system.ineqs
        ],
    }


def from_json_dict(d: Mapping) -> IneqSystem:
    rows = []
    for q in d["inequalities"]:
        rhs = AffineExpr.of({k: Fraction(v) for k, v in q["rhs"]["atoms"].items()},
                            Fraction(q["rhs"]["const"]))
        rows.append(LinIneq.of({k: Fraction(v) for k, v in q["var_coeffs"].items()}, rhs))
    eliminated = tuple(v for v in ALL_VARS if v not in d["vars"])
    return IneqSystem(tuple(rows), eliminated)


def to_json(system: IneqSystem, **kw) -> str:
    return json.dumps(to_json_dict(system), **kw)


__all__ = [
    "AffineExpr", "LinIneq", "IneqSystem", "atom", "atom_by_id", "build_theorem1_system",
    "eliminate", "eliminate_sequence", "prune", "choose_next", "derive_region", "evaluate_rows", "to_polytope",
    "model_values", "to_json_dict", "from_json_dict", "to_json", "RATE_VARS", "ALL_VARS",
    "DEFAULT_ELIMINATE",
]
