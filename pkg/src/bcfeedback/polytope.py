"""Rate polytopes in (R0, R1, R2) and the small-dimension geometry on them."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

BOX = 1000.0
MERGE_TOL = 1e-9
SLACK_TOL = 1e-9
# vertex feasibility during enumeration; tighter than SLACK_TOL so that two
# nearly tied rows do not both produce vertices
VERTEX_TOL = 1e-11
_CHUNK = 200_000


@dataclass(frozen=True)
class RatePolytope:
    """{r >= 0 : A r <= b} in (R0, R1, R2).

    Rows are ``a0*R0 + a1*R1 + a2*R2 <= rhs``; nonnegativity is implicit.
    """

    A: np.ndarray
    b: np.ndarray
    labels: tuple[str, ...] = ()
    meta: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        A = np.array(self.A, dtype=float).reshape(-1, 3)
        b = np.array(self.b, dtype=float).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise ValueError("row count mismatch between A and b")
        labels = tuple(self.labels) or tuple(f"row{i}" for i in range(len(b)))
        if len(labels) != len(b):
            raise ValueError("one label per row")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "meta", dict(self.meta))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]], labels=(), meta=None) -> "RatePolytope":
        rows = [tuple(float(x) for x in r) for r in rows]
        if not rows:
            return cls(np.zeros((0, 3)), np.zeros(0), (), meta or {})
        arr = np.array(rows)
        return cls(arr[:, :3], arr[:, 3], tuple(labels), meta or {})

    @property
    def ineqs(self) -> list[tuple[float, float, float, float]]:
        return [(*map(float, a), float(r)) for a, r in zip(self.A, self.b)]

    def bound(self, label: str) -> float:
        return float(self.b[self.labels.index(label)])

    @property
    def contains_origin(self) -> bool:
        return bool(np.all(self.b >= -SLACK_TOL))

    @property
    def is_empty(self) -> bool:
        return len(self.vertices()) == 0

    def vertices(self) -> np.ndarray:
        cached = self.__dict__.get("_vertices")
        if cached is None:
            cached = _enumerate_vertices(*_with_box(self.A, self.b, 3))
            object.__setattr__(self, "_vertices", cached)
        return cached

    def to_dict(self) -> dict:
        return {
            "inequalities": [
                {"a": [float(x) for x in a], "rhs": float(r), "label": lab}
                for a, r, lab in zip(self.A, self.b, self.labels)
            ],
            "meta": dict(self.meta),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RatePolytope":
        rows = [tuple(q["a"]) + (q["rhs"],) for q in d["inequalities"]]
        labels = [q.get("label", f"row{i}") for i, q in enumerate(d["inequalities"])]
        return cls.from_rows(rows, labels, d.get("meta", {}))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "RatePolytope":
        return cls.from_dict(json.loads(text))


def _with_box(A: np.ndarray, b: np.ndarray, dim: int):
    H = np.vstack([A, -np.eye(dim), np.eye(dim)])
    h = np.concatenate([b, np.zeros(dim), np.full(dim, BOX)])
    return H, h


def _prune_rows(H: np.ndarray, h: np.ndarray):
    """Drop zero rows (or report infeasible) and exact duplicates."""
    zero = np.all(np.abs(H) < 1e-15, axis=1)
    if np.any(h[zero] < -SLACK_TOL):
        return None
    H, h = H[~zero], h[~zero]
    key = np.round(np.column_stack([H, h]), 12)
    _, idx = np.unique(key, axis=0, return_index=True)
    idx.sort()
    return H[idx], h[idx]


def _enumerate_vertices(H: np.ndarray, h: np.ndarray) -> np.ndarray:
    dim = H.shape[1]
    pruned = _prune_rows(H, h)
    if pruned is None:
        return np.zeros((0, dim))
    H, h = pruned
    m = H.shape[0]
    found = []
    combos = itertools.combinations(range(m), dim)
    while True:
        chunk = np.array(list(itertools.islice(combos, _CHUNK)), dtype=np.intp)
        if chunk.size == 0:
            break
        M = H[chunk]
        rhs = h[chunk]
        det = np.linalg.det(M)
        ok = np.abs(det) > 1e-12
        if not np.any(ok):
            continue
        x = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
        feas = np.all(x @ H.T <= h + VERTEX_TOL * (1.0 + np.abs(h)), axis=1)
        found.append(x[feas])
    if not found:
        return np.zeros((0, dim))
    pts = np.vstack(found)
    if len(pts) == 0:
        return pts
    return _merge_points(pts)


def _merge_points(pts: np.ndarray) -> np.ndarray:
    # rounding only groups candidates; representatives keep full precision
    _, idx = np.unique(np.round(pts, 10), axis=0, return_index=True)
    pts = pts[np.sort(idx)]
    keep: list[np.ndarray] = []
    for p in pts:
        if not any(np.max(np.abs(p - q)) <= MERGE_TOL for q in keep):
            keep.append(p)
    return np.array(keep)


def max_weighted_sum(poly: RatePolytope, w0: float, w1: float, w2: float) -> float:
    """max w.r over the region; 0.0 for an empty region (see ``is_empty``)."""
    w = np.array([w0, w1, w2], dtype=float)
    if np.any(w < 0) or not np.any(w > 0):
        raise ValueError("weights must be nonnegative and not all zero")
    v = poly.vertices()
    if len(v) == 0:
        return 0.0
    return float(np.max(v @ w))


def contains(poly: RatePolytope, point: Sequence[float], tol: float = SLACK_TOL) -> bool:
    r = np.asarray(point, dtype=float)
    if np.any(r < -tol):
        return False
    return bool(np.all(poly.A @ r <= poly.b + tol))


def slice_r0(poly: RatePolytope, r0: float) -> list[tuple[float, float]]:
    """Vertices of the (R1, R2) polygon at fixed R0, counterclockwise."""
    A2 = poly.A[:, 1:]
    b2 = poly.b - poly.A[:, 0] * r0
    if r0 < 0:
        return []
    pts = _enumerate_vertices(*_with_box(A2, b2, 2))
    if len(pts) <= 2:
        return [tuple(map(float, p)) for p in pts]
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    pts = pts[np.argsort(ang, kind="stable")]
    # start from the vertex closest to the origin for a stable listing
    start = int(np.argmin(np.round(pts[:, 0] + pts[:, 1], 12)))
    pts = np.roll(pts, -start, axis=0)
    return [tuple(map(float, p)) for p in pts]


def max_sum_rate(poly: RatePolytope) -> float:
    """max R1 + R2 at R0 = 0; 0.0 when the slice is empty."""
    pts = slice_r0(poly, 0.0)
    if not pts:
        return 0.0
    return float(max(p[0] + p[1] for p in pts))


def region_equal(a: RatePolytope, b: RatePolytope, tol: float = 1e-6) -> bool:
    return not region_diff(a, b, tol)["differs"]


def region_diff(a: RatePolytope, b: RatePolytope, tol: float = 1e-6) -> dict:
    """Vertices of each region lying outside the other, with the violated rows."""
    report = {"differs": False, "a_outside_b": [], "b_outside_a": []}
    for src, dst, key in ((a, b, "a_outside_b"), (b, a, "b_outside_a")):
        for v in src.vertices():
            slack = dst.A @ v - dst.b
            bad = np.nonzero(slack > tol)[0]
            if len(bad) or np.any(v < -tol):
                report["differs"] = True
                report[key].append({
                    "vertex": [float(x) for x in v],
                    "violated": [
                        {"label": dst.labels[i], "excess": float(slack[i])} for i in bad
                    ],
                })
    return report
