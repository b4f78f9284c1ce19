import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bcfeedback.info import (
    DegenerateModelError, GaussianCov, InfoAtom, InfoError, JointPmf, OverlapError,
    UnknownVariableError, entropy, eval_atom, gaussian_mutual_info, marginalize, mutual_info,
)
from bcfeedback.instances import dueck_block, quantized_gaussian_pair, random_dueck_noise


def h2(p):
    return 0.0 if p in (0.0, 1.0) else -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def bern(p, name="X"):
    return JointPmf((name,), np.array([1 - p, p]))


def test_entropy_uniform_bit():
    assert entropy(bern(0.5), "X") == pytest.approx(1.0, abs=1e-15)


def test_entropy_constant_is_zero():
    assert entropy(bern(0.0), "X") == 0.0


def test_entropy_three_iid_bits():
    p = 0.11
    one = np.array([1 - p, p])
    pmf = JointPmf(("N0", "N1", "N2"), np.einsum("i,j,k->ijk", one, one, one))
    # brute-force sum over the 8 outcomes
    brute = -sum(x * math.log2(x) for x in pmf.probs.ravel())
    assert entropy(pmf, "N0 N1 N2") == pytest.approx(brute, abs=1e-12)
    assert brute == pytest.approx(3 * h2(p), abs=1e-12)


def test_conditional_entropy_definition():
    rng = np.random.default_rng(1)
    pmf = JointPmf(("A", "B"), rng.dirichlet(np.ones(6)).reshape(2, 3))
    assert entropy(pmf, "A", "B") == pytest.approx(entropy(pmf, "A B") - entropy(pmf, "B"), abs=1e-14)


def test_mutual_info_copy_and_independence():
    copy = JointPmf(("X", "Y"), np.array([[0.5, 0.0], [0.0, 0.5]]))
    assert mutual_info(copy, "X", "Y") == pytest.approx(1.0, abs=1e-15)
    ind = JointPmf(("X", "Y"), np.outer([0.3, 0.7], [0.6, 0.4]))
    assert mutual_info(ind, "X", "Y") == 0.0


def test_mutual_info_bsc():
    e = 0.2
    probs = np.array([[0.5 * (1 - e), 0.5 * e], [0.5 * e, 0.5 * (1 - e)]])
    pmf = JointPmf(("X", "Y"), probs)
    brute = sum(probs[x, y] * math.log2(probs[x, y] / (0.5 * 0.5))
                for x in range(2) for y in range(2))
    assert mutual_info(pmf, "X", "Y") == pytest.approx(brute, abs=1e-12)
    assert brute == pytest.approx(1 - h2(e), abs=1e-12)


def test_errors_unknown_and_overlap():
    pmf = bern(0.3)
    with pytest.raises(UnknownVariableError):
        entropy(pmf, "Q")
    pmf2 = JointPmf(("X", "Y"), np.full((2, 2), 0.25))
    with pytest.raises(OverlapError):
        entropy(pmf2, "X", "X")
    with pytest.raises(OverlapError):
        mutual_info(pmf2, "X", "X Y")


def test_pmf_invariants():
    with pytest.raises(InfoError):
        JointPmf(("X",), np.array([0.5, 0.6]))
    with pytest.raises(InfoError):
        JointPmf(("X",), np.array([1.5, -0.5]))
    with pytest.raises(InfoError):
        JointPmf(("X", "X"), np.full((2, 2), 0.25))


def test_pmf_json_round_trip():
    rng = np.random.default_rng(3)
    pmf = JointPmf.from_flat((("U", 2), ("V", 3)), rng.dirichlet(np.ones(6)))
    d = pmf.to_dict()
    assert d["variables"] == [{"name": "U", "card": 2}, {"name": "V", "card": 3}]
    back = JointPmf.from_json(pmf.to_json())
    assert back.names == pmf.names
    np.testing.assert_array_equal(back.probs, pmf.probs)


def test_marginalize_identity_and_product():
    rng = np.random.default_rng(0)
    a, b = rng.dirichlet(np.ones(2)), rng.dirichlet(np.ones(3))
    pmf = JointPmf(("A", "B"), np.outer(a, b))
    same = marginalize(pmf, "A B")
    np.testing.assert_allclose(same.probs, pmf.probs)
    np.testing.assert_allclose(marginalize(pmf, "B").probs, b)
    # kept names stay in the original order
    assert marginalize(pmf, "B A").names == ("A", "B")


def test_marginalize_dueck_c0_matches_n1():
    pmf_N = random_dueck_noise(np.random.default_rng(4))
    block = dueck_block(pmf_N)
    np.testing.assert_allclose(marginalize(block, "C0").probs, marginalize(pmf_N, "N1").probs,
                               atol=1e-15)


def test_gaussian_scalar_channel():
    cov = GaussianCov(("X", "Y"), [[10.0, 10.0], [10.0, 11.0]])
    assert gaussian_mutual_info(cov, "X", "Y") == pytest.approx(0.5 * math.log2(11), abs=1e-12)
    assert 0.5 * math.log2(11) == pytest.approx(1.729716, abs=1e-6)


def test_gaussian_independent_blocks():
    cov = GaussianCov(("A", "B", "C"), np.diag([1.0, 2.0, 3.0]))
    assert gaussian_mutual_info(cov, "A", "B", "C") == 0.0


def test_gaussian_degenerate_names_set():
    cov = GaussianCov(("X", "Y"), [[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(DegenerateModelError) as e:
        gaussian_mutual_info(cov, "X", "Y")
    assert "X" in str(e.value)


def test_gaussian_psd_and_symmetry_checks():
    with pytest.raises(InfoError):
        GaussianCov(("X", "Y"), [[1.0, 0.5], [0.4, 1.0]])
    with pytest.raises(InfoError):
        GaussianCov(("X", "Y"), [[1.0, 2.0], [2.0, 1.0]])


def test_gaussian_json_round_trip():
    cov = GaussianCov(("X", "Y"), [[2.0, 0.3], [0.3, 1.0]])
    back = GaussianCov.from_json(cov.to_json())
    assert back.names == cov.names
    np.testing.assert_array_equal(back.cov, cov.cov)


def test_eval_atom_dispatch():
    assert eval_atom(InfoAtom.parse("H(X)"), bern(0.5)) == pytest.approx(1.0)
    ind = JointPmf(("X", "Y"), np.outer([0.3, 0.7], [0.6, 0.4]))
    assert eval_atom(InfoAtom.parse("I(X;Y)"), ind) == 0.0
    cov = GaussianCov(("X", "Y"), [[10.0, 10.0], [10.0, 11.0]])
    assert eval_atom(InfoAtom.parse("I(X;Y)"), cov) == pytest.approx(0.5 * math.log2(11))


def test_eval_atom_unresolved_name():
    with pytest.raises(UnknownVariableError):
        eval_atom(InfoAtom.parse("I(X;Q)"), JointPmf(("X", "Y"), np.full((2, 2), 0.25)))


def test_eval_atom_dueck_uw_y_given_c0():
    rng = np.random.default_rng(11)
    for _ in range(5):
        pmf_N = random_dueck_noise(rng)
        block = dueck_block(pmf_N)
        v = eval_atom(InfoAtom.parse("I(U W; Y | C0)"), block)
        assert v == pytest.approx(2 - entropy(pmf_N, "N0 N1"), abs=1e-12)


def test_atom_parse_and_canonical_id():
    a = InfoAtom.parse("I(V~ K~; A | C C~ U~)")
    assert a.kind == "mutual"
    assert a.id == InfoAtom.parse("I(A; K~ V~ | U~ C~ C)").id
    with pytest.raises(InfoError):
        InfoAtom.parse("I(A; A)")
    with pytest.raises(InfoError):
        InfoAtom.parse("H(A; B)")


def test_eval_atom_aliases():
    pmf = JointPmf(("X", "Y"), np.array([[0.4, 0.1], [0.1, 0.4]]))
    v = eval_atom(InfoAtom.parse("I(X;S)"), pmf, {"S": ["Y"]})
    assert v == pytest.approx(mutual_info(pmf, "X", "Y"))
    assert eval_atom(InfoAtom.parse("I(X;Y|W)"), pmf, {"W": []}) == pytest.approx(v)


def test_quantized_gaussian_error_decreases():
    exact = 0.5 * math.log2(1 + 3.0)
    errs = [abs(exact - mutual_info(quantized_gaussian_pair(3.0, n), "X", "Y")) for n in (4, 8, 16)]
    assert errs[0] > errs[1] > errs[2]


# --------------------------------------------------------------------------
# properties on random pmfs

@st.composite
def pmfs(draw):
    cards = draw(st.lists(st.integers(1, 3), min_size=4, max_size=4))
    while np.prod(cards) > 64:
        cards[cards.index(max(cards))] -= 1
    seed = draw(st.integers(0, 2**32 - 1))
    conc = draw(st.sampled_from([0.1, 0.5, 1.0, 5.0]))
    p = np.random.default_rng(seed).dirichlet(np.full(int(np.prod(cards)), conc))
    p[p < 1e-15] = 0.0
    return JointPmf(("A", "B", "C", "D"), (p / p.sum()).reshape(cards))


@settings(max_examples=150, deadline=None)
@given(pmfs())
def test_chain_rule(pmf):
    lhs = mutual_info(pmf, "A", "B C", "D")
    rhs = mutual_info(pmf, "A", "B", "D") + mutual_info(pmf, "A", "C", "B D")
    assert lhs == pytest.approx(rhs, abs=1e-9)


@settings(max_examples=150, deadline=None)
@given(pmfs())
def test_symmetry_and_nonnegativity(pmf):
    ab = mutual_info(pmf, "A", "B", "C D")
    ba = mutual_info(pmf, "B", "A", "C D")
    assert abs(ab - ba) <= 1e-12
    assert ab >= 0.0
    assert mutual_info(pmf, "A C", "B D") >= 0.0
    assert entropy(pmf, "A", "B") >= 0.0
