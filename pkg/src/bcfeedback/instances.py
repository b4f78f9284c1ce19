"""Concrete discrete models: Dueck, noisy Blackwell, random instances."""
from __future__ import annotations

import numpy as np

from .info import JointPmf, marginalize
from .regions import (
    Kernel, TwoBlockModel, build_corollary1_model, build_theorem1_model, _check_blackwell,
    _check_noise_pmf,
)


def noise_pmf(probs) -> JointPmf:
    """Binary (N0, N1, N2) pmf from 8 probabilities, row-major."""
    return JointPmf.from_flat((("N0", 2), ("N1", 2), ("N2", 2)), np.asarray(probs, dtype=float).reshape(2, 2, 2))


def original_dueck_noise() -> JointPmf:
    """N0 = 0, N1 = N2 = N with N ~ Bern(1/2)."""
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = p[0, 1, 1] = 0.5
    return noise_pmf(p)


def random_dueck_noise(rng: np.random.Generator, max_tries: int = 10_000) -> JointPmf:
    """Random binary noise pmf with H(N0,N1) <= 1 and H(N0,N2) <= 1."""
    for _ in range(max_tries):
        conc = rng.choice([0.05, 0.1, 0.3])
        p = rng.dirichlet(np.full(8, conc))
        p[p < 1e-13] = 0.0
        pmf = noise_pmf(p / p.sum())
        try:
            _check_noise_pmf(pmf)
        except ValueError:
            continue
        return pmf
    raise RuntimeError("could not draw a noise pmf meeting the entropy constraints")


def dueck_block(pmf_N: JointPmf) -> JointPmf:
    """One block: C0, W, U, V uniform bits, Y=(W^N0, U^N1), Z=(W^N0, V^N2).

    Y and Z are coded as 2*first + second. C0 carries the previous block's N1.
    """
    _check_noise_pmf(pmf_N)
    pn = np.transpose(pmf_N.probs, [pmf_N.axis(n) for n in ("N0", "N1", "N2")])
    p_c0 = pn.sum(axis=(0, 2))
    joint = np.zeros((2, 2, 2, 2, 4, 4))
    for w, u, v, n0, n1, n2 in np.ndindex(2, 2, 2, 2, 2, 2):
        y = 2 * (w ^ n0) + (u ^ n1)
        z = 2 * (w ^ n0) + (v ^ n2)
        for c0 in range(2):
            joint[c0, w, u, v, y, z] += p_c0[c0] * 0.125 * pn[n0, n1, n2]
    names = (("C0", 2), ("W", 2), ("U", 2), ("V", 2), ("Y", 4), ("Z", 4))
    return JointPmf.from_flat(names, joint)


def dueck_kernel() -> Kernel:
    """C0 = second bit of Y~ xor U~ (the previous block's N1)."""
    return Kernel.deterministic((("Y~", 4), ("U~", 2)), (("C0", 2),), lambda y, u: (y & 1) ^ u)


def dueck_model(pmf_N: JointPmf) -> TwoBlockModel:
    """Noiseless feedback from receiver 1 (S = Y)."""
    return build_corollary1_model(dueck_block(pmf_N), dueck_kernel(), {"S": ("Y",)})


def blackwell_block(p: float, alpha: float, beta: float) -> JointPmf:
    """One block over C0, W, U, V, Y, Z with X = U + V, Y = N^U, Z = N^V."""
    _check_blackwell(p, alpha, beta)
    p_uv = np.zeros((2, 2, 2))  # w, u, v
    rest = 1.0 - alpha - beta
    p_uv[0, 0, 0], p_uv[0, 1, 1], p_uv[0, 1, 0] = alpha, beta, rest
    p_uv[1, 0, 0], p_uv[1, 1, 1], p_uv[1, 1, 0] = beta, alpha, rest
    p_uv *= 0.5
    p_uv = np.clip(p_uv, 0.0, None)
    pn = np.array([1 - p, p])
    joint = np.zeros((2, 2, 2, 2, 2, 2))
    for w, u, v, n, c0 in np.ndindex(2, 2, 2, 2, 2):
        joint[c0, w, u, v, n ^ u, n ^ v] += pn[c0] * p_uv[w, u, v] * pn[n]
    names = (("C0", 2), ("W", 2), ("U", 2), ("V", 2), ("Y", 2), ("Z", 2))
    return JointPmf.from_flat(names, joint / joint.sum())


def blackwell_kernel() -> Kernel:
    """C0 = Y~ xor U~ (the previous block's noise)."""
    return Kernel.deterministic((("Y~", 2), ("U~", 2)), (("C0", 2),), lambda y, u: y ^ u)


def blackwell_model(p: float, alpha: float, beta: float) -> TwoBlockModel:
    """Noiseless feedback from both receivers (S = (Y, Z))."""
    return build_corollary1_model(blackwell_block(p, alpha, beta), blackwell_kernel(),
                                  {"S": ("Y", "Z")})


def random_blackwell_params(rng: np.random.Generator) -> tuple[float, float, float]:
    p = float(rng.uniform(0.0, 0.5))
    a, b = rng.dirichlet([1.0, 1.0, 1.0])[:2]
    return p, float(a), float(b)


# --------------------------------------------------------------------------
# random instances of the general two-block region

def _dirichlet(rng, shape, k, conc=1.0):
    return rng.dirichlet(np.full(k, conc), size=shape)


def stationary(T: np.ndarray) -> np.ndarray:
    """Stationary distribution of a row-stochastic matrix (least squares)."""
    n = T.shape[0]
    M = np.vstack([T.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def random_theorem1_instance(rng: np.random.Generator, card: int = 2, conc: float = 0.5,
                             mix: float = 1.0, separable: bool = False):
    """Random (P, Q) with feedback S = Y; returns (block pmf, kernel, aliases).

    P_{UV|ABC}, the input map and the channel are drawn at random; Q draws
    the next (A, B, C) from (U~, V~, A~, B~, C~, Y~); P_ABC is the stationary
    law of the resulting chain on (A, B, C), so the consistency condition holds.
    ``mix`` blends Q between an input-independent draw (0) and a fully
    input-dependent one (1); small values keep the covering cost low so
    the region is usually nonempty. With ``separable`` U depends on (A, C)
    and V on (B, C) only, independently, which makes the binning cost zero.
    """
    k = card
    if separable:
        p_u = _dirichlet(rng, (k, k), k, conc)  # a c u
        p_v = _dirichlet(rng, (k, k), k, conc)  # b c v
        p_uv = np.einsum("acu,bcv->abcuv", p_u, p_v)
    else:
        p_uv = _dirichlet(rng, (k, k, k), k * k, conc).reshape(k, k, k, k, k)  # a b c u v
    p_x = _dirichlet(rng, (k, k, k, k, k), k, conc)  # a b c u v x
    p_yz = _dirichlet(rng, (k,), k * k, conc).reshape(k, k, k)  # x y z
    p_yz_given = np.einsum("abcuvx,xyz->abcuvyz", p_x, p_yz)
    cond = p_uv[..., None, None] * p_yz_given  # a b c u v y z
    q = _dirichlet(rng, (k,) * 6, k ** 3, conc).reshape((k,) * 9)  # u v a b c y -> a' b' c'
    base = rng.dirichlet(np.full(k ** 3, 2.0)).reshape(k, k, k)
    q = mix * q + (1.0 - mix) * base
    p_uvy = cond.sum(axis=-1)  # a b c u v y
    trans = np.einsum("abcuvy,uvabcydef->abcdef", p_uvy, q).reshape(k ** 3, k ** 3)
    pi = stationary(trans).reshape(k, k, k)
    block = pi[..., None, None, None, None] * cond
    names = tuple((n, k) for n in ("A", "B", "C", "U", "V", "Y", "Z"))
    P = JointPmf.from_flat(names, block / block.sum())
    ins = tuple((n, k) for n in ("U~", "V~", "A~", "B~", "C~", "Y~"))
    outs = tuple((n, k) for n in ("A", "B", "C"))
    Q = Kernel(ins, outs, q)
    return P, Q, {"S": ("Y",)}


def random_theorem1_model(rng: np.random.Generator, card: int = 2, conc: float = 0.5,
                          mix: float = 1.0, separable: bool = False) -> TwoBlockModel:
    P, Q, al = random_theorem1_instance(rng, card, conc, mix, separable)
    return build_theorem1_model(P, Q, al)


def random_marton_bc(rng: np.random.Generator, cards=(2, 2, 2), x_card: int = 2,
                     y_card: int = 2, z_card: int = 2, conc: float = 0.7):
    """Random P_{UVW}, deterministic-or-random input map to X, random channel.

    Returns (P_UVWX pmf, channel kernel from X to (Y, Z)).
    """
    cu, cv, cw = cards
    p = rng.dirichlet(np.full(cu * cv * cw, conc)).reshape(cu, cv, cw)
    px = rng.dirichlet(np.full(x_card, conc), size=(cu, cv, cw))
    joint = p[..., None] * px
    pmf = JointPmf.from_flat((("U", cu), ("V", cv), ("W", cw), ("X", x_card)), joint)
    ch = rng.dirichlet(np.full(y_card * z_card, conc), size=x_card).reshape(x_card, y_card, z_card)
    kern = Kernel((("X", x_card),), (("Y", y_card), ("Z", z_card)), ch)
    return pmf, kern


# --------------------------------------------------------------------------
# discretized Gaussians

def quantized_gaussian_pair(snr: float, levels: int, span: float = 5.0) -> JointPmf:
    """X ~ N(0, snr), Y = X + N(0,1), both quantized to ``levels`` cells each.

    Cells are equal-probability bins of each marginal; probabilities come
    from the bivariate normal CDF.
    """
    from scipy.stats import multivariate_normal, norm

    sx, sy = np.sqrt(snr), np.sqrt(snr + 1.0)
    edges_u = norm.ppf(np.linspace(0, 1, levels + 1))
    edges_u[0], edges_u[-1] = -span * 2, span * 2
    cov = np.array([[1.0, sx / sy], [sx / sy, 1.0]])
    mvn = multivariate_normal(mean=[0, 0], cov=cov)
    grid = np.array([[mvn.cdf([a, b]) for b in edges_u] for a in edges_u])
    probs = grid[1:, 1:] - grid[:-1, 1:] - grid[1:, :-1] + grid[:-1, :-1]
    probs = np.clip(probs, 0.0, None)
    return JointPmf.from_flat((("X", levels), ("Y", levels)), probs / probs.sum())


def dirty_paper_instance(snr: float, levels: int, power_split: float = 0.5, sub: int = 8):
    """Discretized Marton/dirty-paper scheme on the scalar Gaussian BC.

    With a = ``power_split``: V ~ N(0, (1-a)P) takes ``levels`` Gauss-Hermite
    points, Q1 ~ N(0, aP), U = Q1 + b V with b = aP/(aP + 1) quantized to
    bins of width sqrt(aP)/``levels``, X = Q1 + V and W constant. The input
    letter is the pair (U bin, V); the channel from it averages over Q1
    inside the bin (``sub`` points per bin). Both receivers see X + N(0, 1)
    on a uniform output grid. Returns (P_UVWX pmf, channel kernel from X to
    (Y, Z)); the sum rate approaches 1/2 log2(1 + P) as ``levels`` grows.
    """
    from scipy.stats import norm

    P, a = float(snr), float(power_split)
    sq = np.sqrt(a * P)
    b = a * P / (a * P + 1.0)
    nv = int(levels)
    xv, wv = np.polynomial.hermite_e.hermegauss(nv)
    v = np.sqrt((1 - a) * P) * xv
    wv = wv / wv.sum()
    du = sq / levels
    lo = -6.0 * sq + b * v.min()
    n_u = int(np.ceil((12.0 * sq + b * (v.max() - v.min())) / du))
    # sub-grid of U values, each mapped to its bin; Q1 = U - b V
    u_fine = lo + (np.arange(n_u * sub) + 0.5) * du / sub
    q1 = u_fine[None, :] - b * v[:, None]  # j, k
    wq = norm.pdf(q1 / sq)
    wq = wq / wq.sum(axis=1, keepdims=True)
    bins = np.arange(n_u * sub) // sub
    joint = np.zeros((n_u, nv, 1, n_u * nv))
    p_letter = np.zeros((nv, n_u))
    for j in range(nv):
        p_letter[j] = np.bincount(bins, wq[j], n_u)
        joint[np.arange(n_u), j, 0, np.arange(n_u) * nv + j] = wv[j] * p_letter[j]
    pmf = JointPmf.from_flat((("U", n_u), ("V", nv), ("W", 1), ("X", n_u * nv)), joint)
    lim = 6.0 * sq + np.abs(v).max() + 6.0
    n_out = 16 * levels + 1
    edges = np.linspace(-lim, lim, n_out + 1)
    edges[0], edges[-1] = -np.inf, np.inf
    ch_y = np.zeros((n_u * nv, n_out))
    for j in range(nv):
        x = q1[j] + v[j]
        cells = np.diff(norm.cdf(edges[None, :] - x[:, None]), axis=1)  # k, y
        mix = np.zeros((n_u, n_out))
        np.add.at(mix, bins, wq[j][:, None] * cells)
        tot = mix.sum(axis=1, keepdims=True)
        mix = np.where(tot > 0, mix / np.where(tot > 0, tot, 1.0), 1.0 / n_out)
        ch_y[np.arange(n_u) * nv + j] = mix
    ch = np.einsum("xy,xz->xyz", ch_y, ch_y)
    ch = ch / ch.sum(axis=(1, 2), keepdims=True)
    kern = Kernel((("X", n_u * nv),), (("Y", n_out), ("Z", n_out)), ch)
    return pmf, kern


__all__ = [
    "noise_pmf", "original_dueck_noise", "random_dueck_noise", "dueck_block", "dueck_kernel",
    "dueck_model", "blackwell_block", "blackwell_kernel", "blackwell_model",
    "random_blackwell_params", "stationary", "random_theorem1_instance",
    "random_theorem1_model", "random_marton_bc", "quantized_gaussian_pair",
    "dirty_paper_instance", "marginalize",
]
