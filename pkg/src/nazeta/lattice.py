"""Rank-2 lattice zeta over Q.

A point tau = x + iy of the upper half plane gives the covolume-1 lattice
(Z + Z tau)/sqrt(y). The semistable region is |x| <= 1/2, x^2 + y^2 >= 1,
y <= 1 with measure dx dy / y^2, and

    xi(s) = integral over that region of E^(tau, s),
    E^(tau, s) = pi^-s Gamma(s) sum' |v|^-2s.

The direct sum needs Re s > 1. Everywhere else we use the theta split

    E^(s) = sum' G(s, pi|v|^2) + sum' G(1-s, pi|w|^2) - 1/s - 1/(1-s),
    G(a, X) = int_1^inf exp(-X u) u^(a-1) du,

with w over the dual lattice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from mpmath.ctx_mp import MPContext

from .errors import ConsistencyError, ConvergenceError, InputError

AREA = math.pi / 3 - 1


@dataclass(frozen=True)
class UpperHalfPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise InputError("tau must lie in the upper half plane")

    @property
    def tau(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def of(cls, tau: complex) -> "UpperHalfPoint":
        return cls(tau.real, tau.imag)

    def basis(self) -> np.ndarray:
        """Columns are the basis vectors 1/sqrt(y) and tau/sqrt(y) in R^2."""
        r = math.sqrt(self.y)
        return np.array([[1 / r, self.x / r], [0.0, r]])

    def reduced(self) -> "UpperHalfPoint":
        """SL2(Z)-equivalent point with |x| <= 1/2 and |tau| >= 1."""
        t = self.tau
        for _ in range(1000):
            t = complex(t.real - math.floor(t.real + 0.5), t.imag)
            if abs(t) >= 1 - 1e-15:
                return UpperHalfPoint.of(t)
            t = -1 / t
        raise ConvergenceError("reduction did not terminate")


@dataclass(frozen=True)
class SemistableDomain:
    """|x| <= 1/2, x^2 + y^2 >= 1, y <= 1; hyperbolic area pi/3 - 1."""

    @staticmethod
    def contains(p: UpperHalfPoint, eps: float = 1e-12) -> bool:
        return abs(p.x) <= 0.5 + eps and p.x**2 + p.y**2 >= 1 - eps and p.y <= 1 + eps

    @staticmethod
    def lower(x):
        return np.sqrt(1 - np.asarray(x) ** 2)

    area = AREA


@dataclass(frozen=True)
class EpsteinParams:
    tail_tol: float = 5e-7
    max_radius: int = 6000

    def __post_init__(self):
        if not self.tail_tol > 0:
            raise InputError("tail_tol must be positive")


@dataclass(frozen=True)
class QuadSpec:
    tol: float = 1e-9
    order: int = 8
    max_level: int = 5
    laguerre: int = 96
    cutoff: float = 46.0

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError("tolerance must be positive")


def _ctx(dps=30) -> MPContext:
    ctx = MPContext()
    ctx.dps = dps
    return ctx


def gamma_factor(s: complex) -> complex:
    """pi^-s Gamma(s)."""
    ctx = _ctx()
    return complex(ctx.power(ctx.pi, -s) * ctx.gamma(s))


# direct summation


def _covering(p: UpperHalfPoint) -> float:
    """Half the longer diagonal of the fundamental parallelogram."""
    B = p.basis()
    a, b = B[:, 0], B[:, 1]
    return 0.5 * max(np.linalg.norm(a + b), np.linalg.norm(a - b))


def direct_radius(p: UpperHalfPoint, sigma: float, params: EpsteinParams) -> float:
    """Smallest R with pi (R - delta)^(2 - 2 sigma) / (sigma - 1) < tail_tol."""
    delta = _covering(p)
    log_excess = math.log(math.pi / ((sigma - 1) * params.tail_tol)) / (2 * sigma - 2)
    R = delta + math.exp(min(log_excess, 700.0))
    if R > params.max_radius:
        raise ConvergenceError(f"direct sum needs radius {R:.0f} > max_radius")
    return R


def lattice_sum(p: UpperHalfPoint, s: complex, R: float) -> complex:
    """sum' |v|^-2s over lattice vectors with |v| <= R."""
    y, x = p.y, p.x
    ry = math.sqrt(y)
    nmax = int(R / ry) + 1
    total = 0j
    for n0 in range(-nmax, nmax + 1, 64):
        ns = np.arange(n0, min(n0 + 64, nmax + 1))
        half = np.sqrt(np.maximum(R * R - (ns * ry) ** 2, 0.0)) * ry
        mlo = np.floor(-ns * x - half).astype(np.int64)
        mhi = np.ceil(-ns * x + half).astype(np.int64)
        width = int((mhi - mlo).max()) + 1
        m = mlo[:, None] + np.arange(width)[None, :]
        n = np.broadcast_to(ns[:, None], m.shape)
        r2 = ((m + n * x) ** 2 + (n * y) ** 2) / y
        keep = (r2 <= R * R) & (r2 > 0) & (m <= mhi[:, None])
        total += np.sum(np.exp(-s * np.log(r2[keep])))
    return complex(total)


def epstein_sum(p: UpperHalfPoint, s: complex, params: EpsteinParams = EpsteinParams()) -> complex:
    s = complex(s)
    if s.real <= 1:
        raise InputError("divergent direct sum")
    return lattice_sum(p, s, direct_radius(p, s.real, params))


def epstein_hat(p: UpperHalfPoint, s: complex, params: EpsteinParams = EpsteinParams()) -> complex:
    return gamma_factor(s) * epstein_sum(p, s, params)


# theta split


@lru_cache(maxsize=8)
def _laguerre(n: int):
    return np.polynomial.laguerre.laggauss(n)


def upper_gamma(a: complex, X, n: int = 96) -> np.ndarray:
    """G(a, X) = X^-a Gamma(a, X) for X > 0, by Gauss-Laguerre after u = 1 + v/X."""
    X = np.asarray(X, dtype=float)
    nodes, weights = _laguerre(n)
    inner = np.exp((a - 1) * np.log1p(nodes / X[..., None])) @ weights
    return np.exp(-X) / X * inner


def _norms2(B: np.ndarray, M: int) -> np.ndarray:
    """|v|^2 for v = B (m, n), |m|, |n| <= M, origin removed."""
    k = np.arange(-M, M + 1)
    m, n = np.meshgrid(k, k, indexing="ij")
    mn = np.stack([m.ravel(), n.ravel()])
    mn = mn[:, (mn != 0).any(axis=0)]
    v = B @ mn
    return np.sum(v * v, axis=0)


def _theta_terms(B: np.ndarray, quad: QuadSpec) -> np.ndarray:
    X = math.pi * _norms2(B, _box(B, quad.cutoff))
    return X[X <= quad.cutoff]


def _box(B: np.ndarray, cutoff: float) -> int:
    # |(m, n)| <= |v| / sigma_min(B)
    smin = np.linalg.svd(B, compute_uv=False)[-1]
    return int(math.ceil(math.sqrt(cutoff / math.pi) / smin)) + 1


def epstein_hat_theta(p: UpperHalfPoint, s: complex, quad: QuadSpec = QuadSpec()) -> complex:
    s = complex(s)
    if abs(s) < 1e-14 or abs(1 - s) < 1e-14:
        raise InputError("evaluation at singularity")
    B = p.basis()
    Bd = np.linalg.inv(B).T
    Xv = _theta_terms(B, quad)
    Xw = _theta_terms(Bd, quad)
    val = upper_gamma(s, Xv, quad.laguerre).sum() + upper_gamma(1 - s, Xw, quad.laguerre).sum()
    return complex(val - 1 / s - 1 / (1 - s))


# quadrature over the semistable region


@lru_cache(maxsize=16)
def _gl_nodes(order: int, panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre on [0, 1]."""
    t, w = np.polynomial.legendre.leggauss(order)
    t, w = (t + 1) / 2, w / 2
    edges = np.arange(panels) / panels
    nodes = (edges[:, None] + t[None, :] / panels).ravel()
    weights = np.tile(w / panels, panels)
    return nodes, weights


def domain_rule(level: int, order: int = 8):
    """Points (x, y) and weights for int f dx dy / y^2 over the region, x >= 0 half doubled."""
    panels = 2**level
    u, wu = _gl_nodes(order, panels)
    x = 0.5 * u
    wx = 0.5 * wu
    y0 = SemistableDomain.lower(x)
    X = np.repeat(x, len(u))
    Y = (y0[:, None] + u[None, :] * (1 - y0)[:, None]).ravel()
    W = (2 * wx[:, None] * (1 - y0)[:, None] * wu[None, :]).ravel() / Y**2
    return X, Y, W


def integrate(f, quad: QuadSpec = QuadSpec()):
    """Adaptive composite rule: double the panel count until two levels agree.

    Returns (value, error estimate, number of cells).
    """
    prev = None
    for level in range(quad.max_level + 1):
        X, Y, W = domain_rule(level, quad.order)
        val = sum(w * f(UpperHalfPoint(x, y)) for x, y, w in zip(X, Y, W))
        if prev is not None and abs(val - prev) < quad.tol:
            return val, abs(val - prev), (2**level) ** 2
        prev = val
    raise ConvergenceError("quadrature failure")


def area_by_quadrature(quad: QuadSpec = QuadSpec()) -> float:
    return integrate(lambda p: 1.0, quad)[0]


@dataclass(frozen=True)
class XiValue:
    value: complex
    error: float
    cells: int


def xi_q2(s: complex, quad: QuadSpec = QuadSpec(), method: str = "theta", params: EpsteinParams | None = None) -> XiValue:
    """Integral of E^(tau, s) over the semistable region."""
    s = complex(s)
    if abs(s) < 1e-12 or abs(s - 1) < 1e-12:
        raise InputError("evaluation at singularity")
    if method == "theta":
        f = lambda p: epstein_hat_theta(p, s, quad)  # noqa: E731
    elif method == "direct":
        params = params or EpsteinParams()
        f = lambda p: epstein_hat(p, s, params)  # noqa: E731
    else:
        raise InputError(f"unknown method {method!r}")
    v, err, cells = integrate(f, quad)
    return XiValue(complex(v), err, cells)


def fe_defect(s: complex, quad: QuadSpec = QuadSpec()) -> float:
    return abs(xi_q2(s, quad).value - xi_q2(1 - complex(s), quad).value)


def _lagrange_at(xs, ys, x0):
    total = 0j
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        L = 1.0
        for j, xj in enumerate(xs):
            if j != i:
                L *= (x0 - xj) / (xi - xj)
        total += yi * L
    return total


def residue(at: int, quad: QuadSpec = QuadSpec(), offsets=(0.5, 0.25, 0.125)) -> complex:
    """Residue of xi at s = 1 (or 0): (s - at) xi(s) sampled away from the pole, extrapolated."""
    if at not in (0, 1):
        raise InputError("poles are at 0 and 1")
    side = 1 if at == 1 else -1
    ss = [at + side * h for h in offsets]
    ys = [(s - at) * xi_q2(s, quad).value for s in ss]
    return _lagrange_at(ss, ys, at)


def representation_check(points, s: complex, quad: QuadSpec = QuadSpec(), params: EpsteinParams = EpsteinParams()):
    """Largest |direct - theta| over the given points; both must agree where the sum converges."""
    return max(abs(epstein_hat(p, s, params) - epstein_hat_theta(p, s, quad)) for p in points)


# theta sum and critical line


def h0_lattice(p: UpperHalfPoint, params: EpsteinParams = EpsteinParams(tail_tol=1e-15)) -> float:
    """log sum_v exp(-pi |v|^2), tail below params.tail_tol."""
    delta = _covering(p)
    R = delta + math.sqrt(max(-math.log(params.tail_tol), 1.0) / math.pi)
    B = p.basis()
    n2 = _norms2(B, _box(B, math.pi * R * R))
    return math.log(1.0 + float(np.exp(-math.pi * n2[n2 <= R * R]).sum()))


@dataclass(frozen=True)
class ScanResult:
    ts: tuple[float, ...]
    values: tuple[complex, ...]
    brackets: tuple[tuple[float, float], ...]
    max_imag: float


def critical_scan(t_range: tuple[float, float], step: float, quad: QuadSpec = QuadSpec(), refine: int = 0) -> ScanResult:
    """Sign changes of Re xi(1/2 + it) on a grid; Im must vanish up to 10 quad.tol."""
    t0, t1 = t_range
    n = int(round((t1 - t0) / step))
    ts = [t0 + k * step for k in range(n + 1)]
    vals = [xi_q2(complex(0.5, t), quad).value for t in ts]
    worst = max(abs(v.imag) for v in vals)
    if worst > 10 * quad.tol:
        raise ConsistencyError(f"inconsistent continuation: |Im xi| = {worst:.3g} on the critical line")
    brackets = []
    for a, b, va, vb in zip(ts, ts[1:], vals, vals[1:]):
        if va.real == 0 or va.real * vb.real < 0:
            lo, hi, flo = a, b, va.real
            for _ in range(refine):
                mid = (lo + hi) / 2
                fm = xi_q2(complex(0.5, mid), quad).value.real
                if fm * flo <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            brackets.append((lo, hi))
    return ScanResult(tuple(ts), tuple(vals), tuple(brackets), worst)
