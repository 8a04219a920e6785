"""Optimal geodesic synthesis: exponential map, Jacobian, log map, distances.

Everything here reduces to scalar functions of the block angles
theta_j = alpha_j |v|, because L_v squares to -|v|^2 S^2 and S is diagonal.
Each scalar helper switches to a short Taylor series below theta = 1e-4, so
all removable singularities at v = 0 evaluate to their exact limits and no
branch introduces a jump.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import (
    CutLocusTarget,
    DimensionMismatch,
    IdentityTarget,
    NoCandidateFound,
    OutOfDomain,
    ZeroCovector,
)
from .group import GroupPoint, identity, inverse, multiply
from .randomness import DEFAULT_SEED, generator, unit_vector
from .structure import StructureConstants, l_of_v

_SMALL_THETA = 1e-4


def _switch(theta, direct: Callable, series: Callable):
    # Evaluate `direct` away from 0 and `series` below the cancellation
    # threshold; `direct` is called on a masked copy so it never sees 0.
    th = np.asarray(theta, dtype=np.float64)
    scalar = th.ndim == 0
    th = np.atleast_1d(th)
    small = np.abs(th) < _SMALL_THETA
    safe = np.where(small, 1.0, th)
    out = np.where(small, series(th), direct(safe))
    return float(out[0]) if scalar else out


def sinc(theta):
    """sin(theta)/theta with the limit 1 at 0."""
    return _switch(
        theta,
        lambda t: np.sin(t) / t,
        lambda t: _poly(t, 1.0, -1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880),
    )


def cos_minus_one_over_sq(theta):
    """(cos(theta) - 1)/theta^2 with the limit -1/2 at 0."""
    return _switch(
        theta,
        lambda t: (np.cos(t) - 1.0) / (t * t),
        lambda t: _poly(t, -0.5, 1.0 / 24, -1.0 / 720, 1.0 / 40320, -1.0 / 3628800),
    )


def one_minus_sinc(theta):
    """1 - sin(theta)/theta; vanishes to second order at 0."""
    return _switch(
        theta,
        lambda t: 1.0 - np.sin(t) / t,
        lambda t: t * t * _poly(t, 1.0 / 6, -1.0 / 120, 1.0 / 5040, -1.0 / 362880,
                                1.0 / 39916800),
    )


def theta_minus_sin_over_cube(theta):
    """(theta - sin(theta))/theta^3 with the limit 1/6 at 0."""
    return _switch(
        theta,
        lambda t: (t - np.sin(t)) / (t * t * t),
        lambda t: _poly(t, 1.0 / 6, -1.0 / 120, 1.0 / 5040, -1.0 / 362880,
                        1.0 / 39916800),
    )


def half_angle_defect(theta):
    """(sin(x) - x cos(x)) / (4 x^2 sin(x)) at x = theta/2; limit 1/12 at 0.

    Equals (1 - x cot x)/(4 x^2).  Finite and positive for theta in [0, 2pi).
    """

    def direct(t):
        x = 0.5 * t
        return (np.sin(x) - x * np.cos(x)) / (4.0 * x * x * np.sin(x))

    def series(t):
        x2 = 0.25 * t * t
        # (1 - x cot x) = x^2/3 + x^4/45 + 2 x^6/945 + x^8/4725 + ...
        return 0.25 * (1.0 / 3 + x2 * (1.0 / 45 + x2 * (2.0 / 945 + x2 / 4725)))

    return _switch(theta, direct, series)


def _poly(t, *coeffs):
    # even polynomial sum c_i * t^(2i), Horner on t^2
    t2 = t * t
    acc = np.zeros_like(t) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * t2 + c
    return acc


@dataclass(frozen=True)
class AnalyticPair:
    """Even/odd scalar decomposition of an analytic function of L_v.

    On the eigenblock with angle theta the matrix function acts as
    even_part(theta) * I + odd_part(theta) * L_v.
    """

    name: str
    even_part: Callable
    odd_part: Callable


def _zero(theta):
    th = np.asarray(theta, dtype=np.float64)
    return 0.0 if th.ndim == 0 else np.zeros_like(th)


def _cos(theta):
    th = np.asarray(theta, dtype=np.float64)
    out = np.cos(th)
    return float(out) if out.ndim == 0 else out


def _neg_sinc(theta):
    out = sinc(theta)
    return -out if np.ndim(out) == 0 else -out


# (1 - e^-z)/z: the endpoint map for the horizontal coordinates
F_PAIR = AnalyticPair("f", sinc, cos_minus_one_over_sq)
# 1 - sinh(z)/z: the quadratic form giving the vertical coordinates; even
G_PAIR = AnalyticPair("g", one_minus_sinc, _zero)
# e^-z: the momentum flow h_x(t) = expneg(t L_v) u
EXP_NEG_PAIR = AnalyticPair("exp-neg", _cos, _neg_sinc)


@dataclass(frozen=True, eq=False)
class Covector:
    """Initial covector (u, v): horizontal and vertical momenta at the identity."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.atleast_1d(np.asarray(self.u, dtype=np.float64))
        v = np.atleast_1d(np.asarray(self.v, dtype=np.float64))
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def scale(self, t: float) -> "Covector":
        return Covector(t * self.u, t * self.v)

    def as_vector(self) -> np.ndarray:
        return np.concatenate((self.u, self.v))

    @staticmethod
    def from_vector(w, rank: int) -> "Covector":
        w = np.asarray(w, dtype=np.float64)
        return Covector(w[:rank], w[rank:])

    def __repr__(self):
        return f"Covector(u={self.u.tolist()}, v={self.v.tolist()})"


def _check_covector(sc, lam: Covector):
    if lam.u.shape != (sc.rank,) or lam.v.shape != (sc.corank,):
        raise DimensionMismatch(
            f"covector has shapes u{lam.u.shape}, v{lam.v.shape}; expected "
            f"({sc.rank},), ({sc.corank},)"
        )


@dataclass(frozen=True)
class SpectralSplit:
    """Block data of a covector: angles and squared block norms of u."""

    theta: tuple[float, ...]
    u0_norm2: float
    ui_norm2: tuple[float, ...]


def spectral_split(sc: StructureConstants, lam: Covector) -> SpectralSplit:
    _check_covector(sc, lam)
    vn = float(np.linalg.norm(lam.v))
    theta = tuple(b.alpha * vn for b in sc.blocks)
    ker = lam.u[sc.kernel_indices]
    ui = tuple(float(lam.u[b.indices] @ lam.u[b.indices]) for b in sc.blocks)
    return SpectralSplit(theta=theta, u0_norm2=float(ker @ ker), ui_norm2=ui)


def apply_analytic(sc: StructureConstants, v, fn: AnalyticPair, w) -> np.ndarray:
    """Evaluate fn(L_v) w through the even/odd calculus, block by block."""
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    w = np.atleast_1d(np.asarray(w, dtype=np.float64))
    if v.shape != (sc.corank,) or w.shape != (sc.rank,):
        raise DimensionMismatch(
            f"shapes v{v.shape}, w{w.shape}; expected ({sc.corank},), ({sc.rank},)"
        )
    vn = float(np.linalg.norm(v))
    lw = l_of_v(sc, v) @ w
    out = np.empty_like(w)
    ker = sc.kernel_indices
    if ker.size:
        out[ker] = fn.even_part(0.0) * w[ker]  # L_v vanishes on ker S
    for b in sc.blocks:
        th = b.alpha * vn
        out[b.indices] = fn.even_part(th) * w[b.indices] + fn.odd_part(th) * lw[b.indices]
    return out


def exp_map(sc: StructureConstants, lam: Covector) -> GroupPoint:
    """Endpoint at time 1 of the normal geodesic with initial covector lam.

    The horizontal part is f(L_v) u with f(z) = (1 - e^-z)/z; the vertical
    part is the quadratic form (g(L_v) u . u) / (2 |v|^2) times v, with
    g(z) = 1 - sinh(z)/z, and 0 when v = 0.  Total and smooth on all of
    R^k x R^p.
    """
    _check_covector(sc, lam)
    x = apply_analytic(sc, lam.v, F_PAIR, lam.u)
    vn = float(np.linalg.norm(lam.v))
    if vn == 0.0:
        return GroupPoint(x, np.zeros(sc.corank))
    quad = 0.0
    for b in sc.blocks:
        ub = lam.u[b.indices]
        quad += one_minus_sinc(b.alpha * vn) * float(ub @ ub)
    return GroupPoint(x, (quad / (2.0 * vn * vn)) * lam.v)


def geodesic_sample(sc: StructureConstants, lam: Covector, ts) -> list[GroupPoint]:
    """Sample the geodesic t -> exp(t u, t v) at the given sorted times in [0, 1]."""
    ts = np.asarray(ts, dtype=np.float64)
    if ts.ndim != 1:
        raise ValueError("ts must be a one-dimensional sequence")
    if ts.size and (ts.min() < 0.0 or ts.max() > 1.0 or np.any(np.diff(ts) < 0)):
        raise ValueError("ts must be sorted and contained in [0, 1]")
    return [exp_map(sc, lam.scale(float(t))) for t in ts]


def hamiltonian(lam: Covector) -> float:
    """The sub-Riemannian Hamiltonian |u|^2 / 2; geodesic speed is |u|."""
    return 0.5 * float(lam.u @ lam.u)


def _jacobian_core(alphas, pair_mults, corank, q, vnorm):
    """Vectorized Jacobian determinant of the exponential map.

    Parameters are per-block arrays: q has shape (..., d) holding the squared
    block norms of u, vnorm has shape (...,).  Valid for vnorm strictly below
    the first conjugate radius; the v -> 0 limit is exact by construction:

        J = prod_j sinc(theta_j/2)^(2 m_j)
            * ((1/2) sum_j q_j alpha_j^2 h3(theta_j))^(p-1)
            * (sum_j q_j alpha_j^2 tau(theta_j))

    with h3 = theta_minus_sin_over_cube and tau = half_angle_defect.
    """
    theta = np.multiply.outer(vnorm, alphas)
    pref = np.prod(sinc(0.5 * theta) ** (2 * pair_mults), axis=-1)
    wsum = 0.5 * np.sum(q * alphas**2 * theta_minus_sin_over_cube(theta), axis=-1)
    tsum = np.sum(q * alphas**2 * half_angle_defect(theta), axis=-1)
    return pref * wsum ** (corank - 1) * tsum


def jacobian(sc: StructureConstants, lam: Covector) -> float:
    """Jacobian determinant of exp at lam, for |v| within the injectivity radius.

    Strictly positive iff S u != 0; equals (|S u|^2 / 12)^p at v = 0.
    """
    _check_covector(sc, lam)
    vn = float(np.linalg.norm(lam.v))
    if vn >= sc.first_conjugate_radius:
        raise OutOfDomain(
            f"|v| = {vn:.6g} is not below the first conjugate radius "
            f"{sc.first_conjugate_radius:.6g}"
        )
    split = spectral_split(sc, lam)
    q = np.array(split.ui_norm2)
    val = _jacobian_core(
        sc.block_alphas(), sc.block_pairs(), sc.corank, q, np.float64(vn)
    )
    return float(val)


def cut_time(sc: StructureConstants, lam: Covector) -> float:
    """First time the geodesic t -> exp(t lam) stops minimizing.

    2 pi / (alpha_max |v|) when v != 0 and S u != 0; +inf otherwise
    (straight lines and abnormal directions minimize forever).
    """
    _check_covector(sc, lam)
    if not np.any(lam.u) and not np.any(lam.v):
        raise ZeroCovector("the zero covector has no geodesic")
    su = sc.s_diag * lam.u
    vn = float(np.linalg.norm(lam.v))
    if vn == 0.0 or not np.any(su):
        return float("inf")
    return 2.0 * np.pi / (sc.alpha_max * vn)


def in_injectivity_domain(sc: StructureConstants, lam: Covector) -> bool:
    """Membership in D = { |v| < 2 pi / alpha_max and S u != 0 }, with exact tests."""
    _check_covector(sc, lam)
    su = sc.s_diag * lam.u
    vn = float(np.linalg.norm(lam.v))
    return bool(np.any(su)) and vn < sc.first_conjugate_radius


def is_abnormal(sc: StructureConstants, lam: Covector) -> bool:
    """True iff the covector generates an abnormal geodesic, i.e. S u = 0."""
    _check_covector(sc, lam)
    if not np.any(lam.u) and not np.any(lam.v):
        raise ZeroCovector("the zero covector has no geodesic")
    return not np.any(sc.s_diag * lam.u)


def _apply_f_inverse(sc, v, x):
    # f(L_v)^{-1} x via the inverted even/odd pair: on a block with angle
    # theta, f has even part E = sinc, odd part O = cos_minus_one_over_sq,
    # and E^2 + theta^2 O^2 = sinc(theta/2)^2 > 0 for theta < 2 pi.
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    vn = float(np.linalg.norm(v))
    lx = l_of_v(sc, v) @ x
    out = np.empty_like(x)
    ker = sc.kernel_indices
    if ker.size:
        out[ker] = x[ker]
    for b in sc.blocks:
        th = b.alpha * vn
        den = sinc(0.5 * th) ** 2
        e = sinc(th) / den
        o = -cos_minus_one_over_sq(th) / den
        out[b.indices] = e * x[b.indices] + o * lx[b.indices]
    return out


def _vertical_reach(sc, x, vhat, r):
    # |z|-component of exp at the covector (f(r L_vhat)^{-1} x, r vhat):
    # F(r) = (r/2) sum_j |u_j(r)|^2 alpha_j^2 h3(alpha_j r).
    u = _apply_f_inverse(sc, r * vhat, x)
    acc = 0.0
    for b in sc.blocks:
        ub = u[b.indices]
        acc += float(ub @ ub) * b.alpha**2 * theta_minus_sin_over_cube(b.alpha * r)
    return 0.5 * r * acc


_SCAN_POINTS = 64
_BISECT_WIDTH = 1e-6
_NEWTON_STEP = 1e-7
_LOG_RESIDUAL = 1e-12


def log_map(sc: StructureConstants, target: GroupPoint) -> Covector:
    """Invert the exponential map on the injectivity domain.

    For targets with z = 0 the answer is the straight-line covector (x, 0).
    Otherwise the vertical direction is forced to z/|z| and the problem
    reduces to the scalar equation F(r) = |z| on (0, 2 pi / alpha_max),
    where F is the vertical reach of the horizontal data at radius r.  The
    root is bracketed by a uniform scan, then polished by bisection and a
    Newton refinement.  Uniqueness follows from injectivity of exp on D, so
    finding two brackets aborts loudly instead of guessing.

    Raises CutLocusTarget when no root exists (the target is not in the
    diffeomorphic image) and IdentityTarget for the identity.
    """
    if target.x.shape != (sc.rank,) or target.z.shape != (sc.corank,):
        raise DimensionMismatch("target dimensions do not match the structure")
    zn = float(np.linalg.norm(target.z))
    if zn == 0.0:
        if not np.any(target.x):
            raise IdentityTarget("log of the identity is not defined")
        return Covector(target.x.copy(), np.zeros(sc.corank))
    vhat = target.z / zn
    radius = sc.first_conjugate_radius
    rmax = radius * (1.0 - 1e-12)

    def gap(r):
        return _vertical_reach(sc, target.x, vhat, r) - zn

    rs = np.linspace(0.0, rmax, _SCAN_POINTS + 1)[1:]
    vals = np.array([gap(r) for r in rs])

    # virtual left endpoint: F(0+) = 0 < |z|
    grid_r = np.concatenate(([0.0], rs))
    grid_g = np.concatenate(([-zn], vals))
    brackets = []
    root = None
    for i in range(len(grid_r) - 1):
        a, b = grid_g[i], grid_g[i + 1]
        if b == 0.0:
            root = grid_r[i + 1]
            break
        if a * b < 0.0:
            brackets.append((grid_r[i], grid_r[i + 1]))
    if root is None:
        if len(brackets) > 1:
            raise RuntimeError(
                f"multiple root brackets {brackets} for the vertical-reach "
                "equation; exp should be injective here, so this indicates a "
                "Jacobian or synthesis bug"
            )
        if not brackets:
            raise CutLocusTarget(
                "no radius below the first conjugate radius reaches the "
                "target; the point lies outside the diffeomorphic image"
            )
        lo, hi = brackets[0]
        glo = gap(lo) if lo > 0.0 else -zn
        while hi - lo > _BISECT_WIDTH:
            mid = 0.5 * (lo + hi)
            gm = gap(mid)
            if gm == 0.0:
                lo = hi = mid
                break
            if glo * gm < 0.0:
                hi = mid
            else:
                lo, glo = mid, gm
        root = 0.5 * (lo + hi)
        tol = _LOG_RESIDUAL * max(1.0, zn)
        for _ in range(60):
            g0 = gap(root)
            if abs(g0) <= tol:
                break
            d = (gap(root + _NEWTON_STEP) - gap(root - _NEWTON_STEP)) / (2 * _NEWTON_STEP)
            if d == 0.0:
                break
            step = g0 / d
            cand = root - step
            if not (lo <= cand <= hi):
                # Newton left the bracket; fall back to its midpoint
                cand = 0.5 * (lo + hi)
            root = cand

    u = _apply_f_inverse(sc, root * vhat, target.x)
    lam = Covector(u, root * vhat)
    residual = float(np.linalg.norm(exp_map(sc, lam).as_vector() - target.as_vector()))
    if residual > 1e-10:
        raise RuntimeError(
            f"log residual {residual:.3e} exceeds 1e-10 after root polishing; "
            "this indicates a synthesis bug"
        )
    return lam


@dataclass(frozen=True)
class DistanceResult:
    """Distance value plus whether it came from an exact log or a search bound."""

    value: float
    exact: bool

    def __float__(self):
        return self.value


def distance(sc: StructureConstants, p: GroupPoint, q: GroupPoint) -> DistanceResult:
    """Carnot-Caratheodory distance d(p, q), total on all pairs.

    Left-invariant reduction to d(e, p^{-1} q); exact (|u| of the log) on the
    diffeomorphic image, and an upper bound from the boundary search on the
    cut locus, flagged by ``exact=False``.
    """
    target = multiply(sc, inverse(p), q)
    try:
        lam = log_map(sc, target)
    except IdentityTarget:
        return DistanceResult(0.0, True)
    except CutLocusTarget:
        return DistanceResult(distance_bound(sc, target), False)
    return DistanceResult(float(np.linalg.norm(lam.u)), True)


_BOUND_STARTS = 32
_BOUND_ITER = 500
_BOUND_RESIDUAL = 1e-8


def distance_bound(sc: StructureConstants, target: GroupPoint,
                   seed: int = DEFAULT_SEED) -> float:
    """Upper bound on d(e, target) for cut-locus targets.

    Minimizes |u| over covectors with |v| pinned to the first conjugate
    radius whose endpoint matches the target to residual 1e-8.  The search
    runs 32 seeded Nelder-Mead starts over (u, v-direction) with a quadratic
    penalty tightened in three stages; it is deterministic for a fixed seed.
    """
    if target.x.shape != (sc.rank,) or target.z.shape != (sc.corank,):
        raise DimensionMismatch("target dimensions do not match the structure")
    if not np.any(target.x) and not np.any(target.z):
        raise IdentityTarget("the identity is at distance zero")
    zn = float(np.linalg.norm(target.z))
    if zn == 0.0:
        raise ValueError(
            "targets with z = 0 are reached by straight lines and belong to "
            "log_map, not the boundary search"
        )
    radius = sc.first_conjugate_radius
    k, p = sc.rank, sc.corank
    tvec = target.as_vector()
    u_scale = np.sqrt(sc.alpha_max * zn) + float(np.linalg.norm(target.x))

    def endpoint_gap2(u, w):
        wn = np.linalg.norm(w)
        if wn < 1e-12:
            return None
        pt = exp_map(sc, Covector(u, (radius / wn) * w))
        d = pt.as_vector() - tvec
        return float(d @ d)

    def objective(mu):
        def fn(raw):
            u, w = raw[:k], raw[k:]
            gap2 = endpoint_gap2(u, w)
            if gap2 is None:
                return 1e30
            return float(u @ u) + mu * gap2
        return fn

    rng = generator(seed, stream=7)
    best = None
    for _ in range(_BOUND_STARTS):
        raw = np.concatenate((u_scale * rng.standard_normal(k), unit_vector(rng, p)))
        for mu in (1e4, 1e8, 1e12):
            res = optimize.minimize(
                objective(mu), raw, method="Nelder-Mead",
                options={"maxiter": _BOUND_ITER, "xatol": 1e-13, "fatol": 1e-16},
            )
            raw = res.x
        u, w = raw[:k], raw[k:]
        gap2 = endpoint_gap2(u, w)
        if gap2 is not None and np.sqrt(gap2) <= _BOUND_RESIDUAL:
            val = float(np.linalg.norm(u))
            if best is None or val < best:
                best = val
    if best is None:
        raise NoCandidateFound(
            f"no boundary covector reached the target within residual "
            f"{_BOUND_RESIDUAL:g} after {_BOUND_STARTS} starts"
        )
    return best


def homothety(sc: StructureConstants, x0: GroupPoint, y: GroupPoint, t: float) -> GroupPoint:
    """Point at parameter t on the unique minimizing geodesic from x0 to y.

    Computed as x0 * exp(t * log(x0^{-1} y)); requires the translated target
    to lie in the diffeomorphic image (CutLocusTarget propagates otherwise).
    """
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"homothety parameter must lie in [0, 1], got {t}")
    translated = multiply(sc, inverse(x0), y)
    try:
        lam = log_map(sc, translated)
    except IdentityTarget:
        return GroupPoint(x0.x.copy(), x0.z.copy())
    return multiply(sc, x0, exp_map(sc, lam.scale(t)))
