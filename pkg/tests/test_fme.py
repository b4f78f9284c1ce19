import json
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from bcfeedback import fme
from bcfeedback.fme import (
    ALL_VARS, DEFAULT_ELIMINATE, RATE_VARS, AffineExpr, IneqSystem, LinIneq, atom,
    build_theorem1_system, derive_region, eliminate, eliminate_sequence, evaluate_rows,
    model_values, to_polytope,
)
from bcfeedback.instances import random_theorem1_model
from bcfeedback.polytope import region_equal
from bcfeedback.regions import theorem1_bounds

from projection_oracle import check_projection, random_system


@pytest.fixture(scope="module")
def derived():
    return derive_region()


def test_system_row_counts():
    s = build_theorem1_system()
    assert len(s) == 21
    aux = {"R1p>=R1", "R2p>=R2", "rho0>=R0", "rho1>=0", "rho2>=0", "R0>=0", "R1>=0", "R2>=0"}
    assert sum(q.label in aux for q in s.ineqs) == 8
    assert set(s.variables) == set(ALL_VARS)


def test_atom_vocabulary_has_bin_entropy():
    assert atom("H(U | A C)") in build_theorem1_system().atoms()


def test_all_rows_are_upper_bounds():
    # every row is stored as lhs <= rhs with Fraction coefficients
    for q in build_theorem1_system().ineqs:
        assert all(isinstance(c, Fraction) for _, c in q.var_coeffs)
        assert not q.trivial


def test_textbook_pair():
    a, b = atom("H(X)"), atom("H(Y)")
    s = IneqSystem((
        LinIneq.of({"R0": 1}, AffineExpr.of({b: 1})),
        LinIneq.of({"R0": -1}, AffineExpr.of({a: -1})),
    ))
    out = eliminate(s, "R0")
    assert len(out) == 1
    (q,) = out.ineqs
    assert q.var_coeffs == ()
    assert q.rhs.as_dict() == {a: -1, b: 1}
    assert out.eliminated == ("R0",)


def test_one_sided_bound_vanishes():
    s = IneqSystem((LinIneq.of({"R0": -1}, AffineExpr()),))
    assert len(eliminate(s, "R0")) == 0


def test_eliminate_errors():
    s = eliminate(build_theorem1_system(), "rho2")
    with pytest.raises(ValueError):
        eliminate(s, "rho2")
    with pytest.raises(ValueError):
        eliminate(s, "X")


def test_rho2_row_count():
    s = build_theorem1_system()
    pos, neg, zero = s.counts("rho2")
    assert (pos, neg, zero) == (4, 3, 14)
    assert len(eliminate(s, "rho2", prune_rows=False)) == pos * neg + zero
    assert len(eliminate(s, "rho2")) <= pos * neg + zero


def test_derived_variables(derived):
    assert set(derived.variables) == set(RATE_VARS)
    assert sorted(derived.eliminated) == sorted(DEFAULT_ELIMINATE)


def test_empty_sequence_is_identity():
    s = build_theorem1_system()
    assert eliminate_sequence(s, []) is s


def test_rational_coefficients_bounded(derived):
    for q in derived.ineqs:
        for _, c in q.var_coeffs + q.rhs.coeffs:
            assert isinstance(c, Fraction)
            # all pivots in this system are +-1 or +-2
            assert c.denominator <= 2


def test_order_must_be_permutation():
    with pytest.raises(ValueError):
        derive_region(order=["rho1"])


def _nonempty_models(n, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        m = random_theorem1_model(rng, 2, 0.1, 0.0, separable=True)
        if not to_polytope(derive_region(), model_values(m)).is_empty:
            out.append(m)
    return out


@pytest.fixture(scope="module")
def models():
    return _nonempty_models(4)


def test_contains_stated_sum_rows(derived, models):
    for m in models:
        A, b = evaluate_rows(derived, model_values(m))
        bounds = theorem1_bounds(m)
        for label, co in (("R0+R1", (1, 1, 0)), ("R0+R2", (1, 0, 1))):
            rhs = b[np.all(A == co, axis=1)]
            assert np.min(np.abs(rhs - bounds[label])) < 1e-12


def test_order_independence(derived, models):
    other = derive_region(order=("R2p", "R1p", "rho0", "rho2", "rho1"))
    fixed = derive_region(order=DEFAULT_ELIMINATE)
    for m in models:
        v = model_values(m)
        a = to_polytope(derived, v)
        assert region_equal(a, to_polytope(other, v), 1e-9)
        assert region_equal(a, to_polytope(fixed, v), 1e-9)


def _support(poly, w):
    res = linprog(-np.asarray(w), A_ub=poly.A, b_ub=poly.b, bounds=[(0, None)] * 3, method="highs")
    return -res.fun if res.status == 0 else None


def test_reduce_is_exact(derived, models):
    rng = np.random.default_rng(9)
    for m in models:
        v = model_values(m)
        small, full = to_polytope(derived, v), to_polytope(derived, v, reduce=False)
        assert len(small.b) < len(full.b)
        for w in rng.random((10, 3)):
            assert _support(small, w) == pytest.approx(_support(full, w), abs=1e-10)


def test_to_polytope_rejects_leftover_vars():
    with pytest.raises(ValueError):
        to_polytope(build_theorem1_system(), lambda k: 0.0)


def test_soundness_random_feasible_points(derived, models):
    full = build_theorem1_system()
    rng = np.random.default_rng(5)
    for m in models:
        v = model_values(m)
        A, b = evaluate_rows(full, v, ALL_VARS)
        Ad, bd = evaluate_rows(derived, v)
        for _ in range(10):
            # random vertex of the pre-elimination system inside a box
            res = linprog(-rng.random(len(ALL_VARS)), A_ub=A, b_ub=b,
                          bounds=[(None, 50)] * len(ALL_VARS), method="highs")
            if res.status != 0:
                continue
            r = res.x[:3]
            assert np.all(Ad @ r <= bd + 1e-8)


def test_exact_projection_random_systems():
    rng = np.random.default_rng(2024)
    total_in = total_out = 0
    for _ in range(100):
        s, elim, keep = random_system(rng)
        n_in, n_out, bad = check_projection(s, elim, keep)
        assert not bad
        total_in += n_in
        total_out += n_out
    # the grid sees both sides of the projections
    assert total_in > 100 and total_out > 100


def test_json_round_trip(derived):
    d = fme.to_json_dict(derived)
    assert d["vars"] == ["R0", "R1", "R2"]
    text = json.dumps(d)
    back = fme.from_json_dict(json.loads(text))
    assert back.canonical().ineqs == tuple(
        LinIneq(q.var_coeffs, q.rhs) for q in derived.canonical().ineqs)
    assert back.eliminated == tuple(v for v in ALL_VARS if v not in RATE_VARS)
    const = d["inequalities"][0]["rhs"]["const"]
    assert "/" in const
