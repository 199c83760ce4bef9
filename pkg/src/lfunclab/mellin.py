"""Vertical-line Mellin inversion: the quadrature engine, the smoothing
cutoffs defined by archimedean factor ratios, Mellin transforms of bump
functions, and the gamma-kernel weight of the dual summation formula.

Quadrature layout.  Every line integral is a trapezoid on sigma + i[-T, T]
with a fine step h/2 and a single Richardson extrapolation against the
coarse step h (the coarse sum reuses every other fine node).  Nodes are
evaluated in conjugate pairs and each pair is added before accumulation, so
integrands that commute with conjugation produce an exactly real result.
Accumulation order is fixed, which makes every value reproducible bit for
bit.

Kernels (the x-independent part of each integrand) are cached per parameter
set, so sweeping a cutoff over thousands of arguments costs one dot product
per argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import NonConvergence, PoleOnContour, ViolationError
from .numkernel import (
    AlphaTriple,
    log_complex_gamma,
    log_complex_gamma_vec,
    voronoi_gamma_kernel,
)

LOG_PI = math.log(math.pi)
TWO_PI = 2.0 * math.pi
PI_CUBED = math.pi ** 3

# contours with sigma above this are evaluated on a shifted line plus
# residue corrections; gamma ratio growth makes direct lines pointless
SIGMA_DIRECT_MAX = 1.6
_T_CAP = 6000.0


@dataclass(frozen=True)
class ContourSpec:
    """A vertical-line integration task: line Re s = sigma, truncation
    height T, coarse step h, target tolerance."""

    sigma: float
    height: float
    step: float
    tolerance: float

    def __post_init__(self):
        if not self.height > 0:
            raise ValueError("height must be positive")
        if not 0 < self.step <= self.height / 100.0:
            raise ValueError("step must satisfy 0 < h <= T/100")
        if not 0 < self.tolerance <= 1e-3:
            raise ValueError("tolerance must lie in (0, 1e-3]")


def default_contour(sigma: float = 1.0, tolerance: float = 1e-9,
                    height: float = 40.0, step: float = 0.05) -> ContourSpec:
    return ContourSpec(sigma, height, step, tolerance)


# ----------------------------------------------------------------------
# bump functions


class BumpFunction:
    """Smooth compactly supported test function with exact derivatives.

    The model is psi(x) = exp(1 - 1/(1 - y^2)) with y the affine map of the
    support onto (-1, 1).  Derivatives up to order 8 come from an exact
    integer polynomial recurrence in (y, w), w = 1/(1-y^2); no finite
    differences are involved.
    """

    MAX_DERIV = 8

    def __init__(self, a: float = 1.0, b: float = 2.0):
        if not 0 < a < b:
            raise ValueError("support must satisfy 0 < a < b")
        self.a = float(a)
        self.b = float(b)
        self.key = ("std_bump", self.a, self.b)
        self._scale = 2.0 / (self.b - self.a)
        self._polys = self._derivative_polys(self.MAX_DERIV, self._scale)
        self._sup_cache: dict[int, float] = {}

    @staticmethod
    def _derivative_polys(n_max: int, scale: float):
        # poly[n] maps (i, j) -> coeff of y^i w^j in psi^(n) / psi
        polys = [{(0, 0): 1.0}]
        for _ in range(n_max):
            prev = polys[-1]
            nxt: dict[tuple, float] = {}

            def add(key, val):
                nxt[key] = nxt.get(key, 0.0) + val

            for (i, j), c in prev.items():
                # d/dy of y^i w^j = i y^{i-1} w^j + 2 j y^{i+1} w^{j+1}
                if i > 0:
                    add((i - 1, j), scale * c * i)
                if j > 0:
                    add((i + 1, j + 1), scale * c * 2 * j)
                # times phi' = -2 y w^2
                add((i + 1, j + 2), scale * c * -2.0)
            polys.append(nxt)
        return polys

    def __call__(self, x, deriv: int = 0):
        if not 0 <= deriv <= self.MAX_DERIV:
            raise ValueError(f"derivatives available up to order {self.MAX_DERIV}")
        x = np.asarray(x, dtype=np.float64)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.zeros_like(x)
        inside = (x > self.a) & (x < self.b)
        if np.any(inside):
            y = (2.0 * x[inside] - (self.a + self.b)) / (self.b - self.a)
            w = 1.0 / (1.0 - y * y)
            psi = np.exp(1.0 - w)
            acc = np.zeros_like(y)
            for (i, j), c in self._polys[deriv].items():
                acc += c * y ** i * w ** j
            out[inside] = psi * acc
        return float(out[0]) if scalar else out

    def sup_norm(self, deriv: int) -> float:
        if deriv not in self._sup_cache:
            grid = np.linspace(self.a, self.b, 20001)
            self._sup_cache[deriv] = float(np.max(np.abs(self(grid, deriv))))
        return self._sup_cache[deriv]


def standard_bump() -> BumpFunction:
    """The classical bump exp(1 - 1/(1-(2x-3)^2)) supported on (1, 2)."""
    return BumpFunction(1.0, 2.0)


@lru_cache(maxsize=32)
def _bump_by_key(key) -> BumpFunction:
    tag, a, b = key
    return BumpFunction(a, b)


# ----------------------------------------------------------------------
# Mellin transforms of bumps


def mellin_transform(psi: BumpFunction, s: complex) -> complex:
    """psi-tilde(s) = int_a^b x^{s-1} psi(x) dx, entire in s.

    Uses the log substitution u = log x and a fixed spectral rectangle rule
    sized to the frequency; since all derivatives of the integrand vanish at
    the endpoints the rule converges faster than any power of the step.
    Accuracy ~1e-13 relative to the sup of the integrand.
    """
    return complex(_mellin_grid(psi, np.asarray([s], dtype=np.complex128))[0])


def _grid_size(psi: BumpFunction, t_max: float) -> int:
    width = math.log(psi.b) - math.log(psi.a)
    margin = 3000.0
    m = int(width * (t_max + margin) / TWO_PI) + 64
    return m


def _mellin_grid(psi: BumpFunction, s: np.ndarray) -> np.ndarray:
    """Vectorized psi-tilde(s) over an array of complex s."""
    s = np.asarray(s, dtype=np.complex128)
    t_max = float(np.max(np.abs(s.imag))) if s.size else 0.0
    m = _grid_size(psi, t_max)
    ua, ub = math.log(psi.a), math.log(psi.b)
    du = (ub - ua) / m
    u = ua + (np.arange(m) + 0.5) * du
    g = psi(np.exp(u)) * du
    out = np.empty(s.shape, dtype=np.complex128)
    flat_s = s.ravel()
    flat_o = out.ravel()
    chunk = max(1, int(4e6) // m)
    for i in range(0, flat_s.size, chunk):
        sc = flat_s[i:i + chunk]
        flat_o[i:i + chunk] = np.exp(np.multiply.outer(sc, u)) @ g
    return out


def mellin_transform_quad(psi: BumpFunction, s: complex) -> complex:
    """Adaptive-quadrature reference path for psi-tilde, used in tests."""
    re = quad(lambda x: (x ** (s - 1) * psi(x)).real, psi.a, psi.b,
              epsabs=1e-13, epsrel=1e-13, limit=800)[0]
    im = quad(lambda x: (x ** (s - 1) * psi(x)).imag, psi.a, psi.b,
              epsabs=1e-13, epsrel=1e-13, limit=800)[0]
    return complex(re, im)


# ----------------------------------------------------------------------
# trapezoid line integration


class LineKernel:
    """Precomputed integrand values K(sigma + i t) on a fine node grid,
    with a method evaluating (1/2pi i) int x^{-s} K(s) ds for many x."""

    def __init__(self, sigma: float, h2: float, values: np.ndarray):
        m = (len(values) - 1) // 2
        if len(values) != 2 * m + 1 or m % 2 != 0:
            raise ValueError("kernel grid must be symmetric with even half-count")
        self.sigma = sigma
        self.h2 = h2
        self.m = m
        self.values = values
        self.t = h2 * np.arange(-m, m + 1)

    def _paired(self, w: np.ndarray):
        m = self.m
        center = w[..., m]
        pairs = w[..., m + 1:] + w[..., m - 1::-1]
        return center, pairs

    def integrate(self, factors: np.ndarray = None):
        """Richardson-extrapolated (1/2pi) int K(sigma+it) (factors) dt.

        factors, if given, multiplies the kernel nodewise; it may be a
        matrix with trailing axis matching the node count.  Returns
        (value, error_estimate).
        """
        w = self.values if factors is None else factors * self.values
        center, pairs = self._paired(w)
        fine = self.h2 * (center + pairs.sum(axis=-1) - 0.5 * pairs[..., -1])
        coarse = 2 * self.h2 * (center + pairs[..., 1::2].sum(axis=-1)
                                - 0.5 * pairs[..., -1])
        value = (4.0 * fine - coarse) / 3.0
        floor = 1e-15 * self.h2 * np.sum(np.abs(w), axis=-1)
        err = np.abs(fine - coarse) / 3.0 + floor
        return value / TWO_PI, err / TWO_PI

    def inverse_at(self, xs: np.ndarray, tolerance: float):
        """(1/2pi i) int x^{-s} K(s) ds for an array of positive x."""
        xs = np.asarray(xs, dtype=np.float64)
        if np.any(xs <= 0):
            raise ValueError("arguments must be positive")
        s = self.sigma + 1j * self.t
        out = np.empty(xs.shape, dtype=np.complex128)
        err = np.empty(xs.shape, dtype=np.float64)
        flat_x = xs.ravel()
        chunk = max(1, int(6e6) // len(s))
        for i in range(0, flat_x.size, chunk):
            xc = flat_x[i:i + chunk]
            fac = np.exp(np.multiply.outer(-np.log(xc), s))
            v, e = self.integrate(fac)
            out.ravel()[i:i + chunk] = v
            err.ravel()[i:i + chunk] = e
        if np.any(err > tolerance):
            bad = flat_x[err.ravel() > tolerance][0]
            raise NonConvergence(
                f"quadrature error {float(np.max(err)):.2e} above {tolerance} at x={bad}")
        return out


def _make_grid(height: float, step: float):
    """Fine half-count (even) and fine step for a requested (T, h)."""
    h2 = step / 2.0
    m = int(math.ceil(height / h2))
    if m % 2:
        m += 1
    return m, h2


def vertical_line_integral(f, c: ContourSpec) -> complex:
    """(1/2pi i) int_{(sigma)} f(s) ds by trapezoid plus one Richardson step.

    The integrand must decay by itself beyond T (the caller asserts this);
    disagreement between the two trapezoid levels beyond the tolerance
    raises NonConvergence, a pole hit on the line raises PoleOnContour.
    """
    m, h2 = _make_grid(c.height, c.step)
    t = h2 * np.arange(-m, m + 1)
    s = c.sigma + 1j * t
    try:
        values = np.asarray(f(s), dtype=np.complex128)
        if values.shape != s.shape:
            raise TypeError
    except TypeError:
        try:
            values = np.array([f(complex(z)) for z in s], dtype=np.complex128)
        except ZeroDivisionError as exc:
            raise PoleOnContour(str(exc)) from exc
    if not np.all(np.isfinite(values)):
        raise PoleOnContour(f"integrand not finite on Re s = {c.sigma}")
    kernel = LineKernel(c.sigma, h2, values)
    value, err = kernel.integrate()
    if err > c.tolerance:
        raise NonConvergence(f"extrapolation disagreement {err:.2e} > {c.tolerance}")
    return complex(value)


# ----------------------------------------------------------------------
# cutoffs from archimedean factor ratios


@dataclass(frozen=True)
class CutoffKind:
    """Which factor ratio drives the cutoff: the degree-2 factor ('gl2') or
    the degree-6 Rankin-Selberg factor ('rankin' / 'rankin_dual', the dual
    variant normalized by the plain factor at the center)."""

    tag: str
    k: int
    alpha: AlphaTriple | None = None

    def __post_init__(self):
        if self.tag not in ("gl2", "rankin", "rankin_dual"):
            raise ValueError(f"unknown cutoff tag {self.tag!r}")
        if self.tag != "gl2" and self.alpha is None:
            raise ValueError("rankin cutoffs need a parameter triple")


def _log_factor(kind: CutoffKind, s: np.ndarray) -> np.ndarray:
    """log of the relevant completed factor at 1/2 + s, vectorized."""
    s = np.asarray(s, dtype=np.complex128)
    z = 0.5 + s
    k = kind.k
    if kind.tag == "gl2":
        return (-z * LOG_PI
                + log_complex_gamma_vec((z + (k - 1) / 2.0) / 2.0)
                + log_complex_gamma_vec((z + (k + 1) / 2.0) / 2.0))
    alpha = kind.alpha if kind.tag == "rankin" else kind.alpha.dual
    total = -3.0 * z * LOG_PI
    for a in alpha.items:
        total = total + log_complex_gamma_vec((z + (k + 1) / 2.0 + a) / 2.0)
        total = total + log_complex_gamma_vec((z + (k - 1) / 2.0 + a) / 2.0)
    return total


def _log_center(kind: CutoffKind) -> complex:
    """log of the normalizing factor at the center; always the plain
    (non-dual) factor, also for the dual cutoff."""
    k = kind.k
    if kind.tag == "gl2":
        return (-0.5 * LOG_PI
                + log_complex_gamma((0.5 + (k - 1) / 2.0) / 2.0)
                + log_complex_gamma((0.5 + (k + 1) / 2.0) / 2.0))
    total = complex(-1.5 * LOG_PI)
    for a in kind.alpha.items:
        total += log_complex_gamma((0.5 + (k + 1) / 2.0 + a) / 2.0)
        total += log_complex_gamma((0.5 + (k - 1) / 2.0 + a) / 2.0)
    return total


def _alpha_key(alpha: AlphaTriple | None):
    return None if alpha is None else alpha.items


@lru_cache(maxsize=64)
def _cutoff_kernel(tag: str, k: int, alpha_key, sigma: float, step: float,
                   min_height: float, tol: float) -> LineKernel:
    """Kernel x^{-s}-free part of the cutoff integrand, K = ratio / s, on an
    adaptively extended line."""
    alpha = None if alpha_key is None else AlphaTriple(*alpha_key)
    kind = CutoffKind(tag, k, alpha)
    center = _log_center(kind)
    target = tol * 1e-7

    height = max(min_height, 12.0)
    while True:
        m, h2 = _make_grid(height, step)
        t = h2 * np.arange(-m, m + 1)
        s = sigma + 1j * t
        values = np.exp(_log_factor(kind, s) - center) / s
        env = np.abs(values[-max(8, m // 50):])
        tail_scale = float(np.max(env)) * height
        if tail_scale < target or height >= _T_CAP:
            break
        height *= 1.5
    if tail_scale >= target:
        raise NonConvergence(
            f"cutoff kernel tail {tail_scale:.2e} above target at T={height}")
    return LineKernel(sigma, h2, values)


def cutoff_many(kind: CutoffKind, xs, c: ContourSpec) -> np.ndarray:
    """Vectorized cutoff evaluation; see cutoff()."""
    if c.sigma <= 0:
        raise PoleOnContour("cutoff contour must have sigma > 0")
    kernel = _cutoff_kernel(kind.tag, kind.k, _alpha_key(kind.alpha),
                            c.sigma, c.step, c.height, c.tolerance)
    vals = kernel.inverse_at(np.asarray(xs, dtype=np.float64), c.tolerance)
    imag_max = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    if imag_max > 1e-9:
        raise NonConvergence(
            f"cutoff imaginary residual {imag_max:.2e} exceeds 1e-9")
    return vals.real


def cutoff(kind: CutoffKind, x: float, c: ContourSpec) -> float:
    """The smoothing cutoff V(x) = (1/2pi i) int x^{-s} R(1/2+s) ds/s where R
    is the factor ratio selected by kind.  Real by construction for real or
    self-dual parameters; the imaginary residual is asserted below 1e-9."""
    if x <= 0:
        raise ValueError("cutoff argument must be positive")
    return float(cutoff_many(kind, np.asarray([x]), c)[0])


def cutoff_derivative_factor(kind: CutoffKind, xs, order: int,
                             c: ContourSpec) -> np.ndarray:
    """Exact order-th derivative of the cutoff by differentiating under the
    integral: d^B/dx^B x^{-s} = (-1)^B (s)_B x^{-s-B}."""
    if order == 0:
        return cutoff_many(kind, xs, c)
    kernel = _cutoff_kernel(kind.tag, kind.k, _alpha_key(kind.alpha),
                            c.sigma, c.step, c.height, c.tolerance)
    s = kernel.sigma + 1j * kernel.t
    poch = np.ones_like(s)
    for j in range(order):
        poch = poch * (-(s + j))
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty(xs.shape, dtype=np.complex128)
    for i, x in enumerate(xs.ravel()):
        fac = np.exp(-(s + order) * math.log(x)) * poch
        v, _ = kernel.integrate(fac)
        out.ravel()[i] = v
    return out.real


def cutoff_decay_check(kind: CutoffKind, a_exp: float, b_order: int,
                       c: ContourSpec | None = None,
                       cap: float = 1e6) -> float:
    """Fit the smallest C with |V^(B)(x)| <= C x^B (1+x)^{-A} over a log grid
    x in [1e-4, 1e3]; raises ViolationError naming the worst x if no
    C <= cap fits."""
    if a_exp > 20 or b_order > 4:
        raise ValueError("supported ranges: A <= 20, B <= 4")
    if c is None:
        c = default_contour()
    xs = np.geomspace(1e-4, 1e3, 120)
    deriv = cutoff_derivative_factor(kind, xs, b_order, c)
    bound = xs ** b_order * (1 + xs) ** (-a_exp)
    ratio = np.abs(deriv) / bound
    fitted = float(np.max(ratio))
    if fitted > cap:
        worst = float(xs[int(np.argmax(ratio))])
        raise ViolationError(
            f"no constant <= {cap:.0e} fits at x={worst:.3e}", point=worst)
    return fitted


# ----------------------------------------------------------------------
# the gamma-kernel weight of the dual summation formula


def _safe_abscissa(alpha: AlphaTriple) -> float:
    """Abscissa in (0, 1.5) keeping all gamma arguments away from integers
    at t = 0."""
    candidates = np.arange(0.55, 1.45, 0.05)
    best, best_d = 0.8, -1.0
    for sig in candidates:
        dmin = math.inf
        for a in alpha.items:
            for arg in ((sig + a) / 2.0, (1 - sig - a) / 2.0,
                        (1 + sig + a) / 2.0, (2 - sig - a) / 2.0):
                if abs(arg.imag) < 1e-12:
                    dmin = min(dmin, abs(arg.real - round(arg.real)))
        if dmin > best_d:
            best, best_d = float(sig), dmin
    return best


def _term_values(s: np.ndarray, alpha: AlphaTriple, term: int) -> np.ndarray:
    """Individual ratio term of the dual-summation kernel (term 0 or 1)."""
    from .numkernel import _gamma_ratio_term
    if term == 0:
        return _gamma_ratio_term(np.asarray(s, dtype=np.complex128), 0.0, 1.0,
                                 alpha.items)
    return _gamma_ratio_term(np.asarray(s, dtype=np.complex128), 1.0, 2.0,
                             alpha.items)


def _crossed_poles(alpha: AlphaTriple, lo: float) -> list[tuple[complex, int]]:
    """Candidate poles (s0, term) of the kernel with Re s0 > lo, keeping only
    those of positive net order after numerator/denominator cancellation."""
    out = []
    for term, shift_n, shift_d in ((0, 0.0, 1.0), (1, 1.0, 2.0)):
        cands = set()
        for a in alpha.items:
            j = 0
            while True:
                s0 = -shift_n - a - 2 * j
                if s0.real <= lo:
                    break
                cands.add(complex(round(s0.real, 9), round(s0.imag, 9)))
                j += 1
        for s0 in cands:
            order = 0
            for a in alpha.items:
                num = (shift_n + s0 + a) / 2.0
                if abs(num.imag) < 1e-9 and abs(num.real - round(num.real)) < 1e-9 \
                        and round(num.real) <= 0:
                    order += 1
                den = (shift_d - s0 - a) / 2.0
                if abs(den.imag) < 1e-9 and abs(den.real - round(den.real)) < 1e-9 \
                        and round(den.real) <= 0:
                    order -= 1
            if order >= 1:
                out.append((s0, term))
    return out


def _circle_integral(f, center: complex, radius: float, n: int = 96) -> complex:
    theta = TWO_PI * (np.arange(n) + 0.5) / n
    e = np.exp(1j * theta)
    vals = f(center + radius * e)
    return complex(radius / n * np.sum(vals * e))


@lru_cache(maxsize=48)
def _psi_weight_kernel(alpha_key, sign: int, bump_key, sigma: float,
                       step: float, tol: float) -> LineKernel:
    """Kernel H_sign(s) psi-tilde(1-s) on the evaluation line, extended in T
    until the measured tail is negligible at the requested tolerance."""
    alpha = AlphaTriple(*alpha_key)
    psi = _bump_by_key(bump_key)
    target = tol * 1e-4
    height = 300.0
    while True:
        m, h2 = _make_grid(height, step)
        t = h2 * np.arange(-m, m + 1)
        s = sigma + 1j * t
        hv = voronoi_gamma_kernel(s, alpha, sign)
        mv = _mellin_grid(psi, 1.0 - s)
        values = hv * mv
        tail = float(np.max(np.abs(values[-max(16, m // 100):]))) * height
        if tail < target or height >= _T_CAP:
            break
        height *= 1.6
    if tail >= target:
        raise NonConvergence(
            f"dual-weight kernel tail {tail:.2e} above target at T={height}")
    return LineKernel(sigma, h2, values)


def voronoi_weight_psi_many(xs, psi: BumpFunction, alpha: AlphaTriple,
                            sign: int, c: ContourSpec) -> np.ndarray:
    """The dual-side weight Psi_sign(X) = X (1/2pi i) int (pi^3 X)^{-s}
    H_sign(s) psi-tilde(1-s) ds for an array of X > 0.

    The defining line must satisfy sigma > theta2.  Lines with sigma above
    SIGMA_DIRECT_MAX are evaluated on an equivalent safe abscissa; when the
    kernel has genuine poles between the two lines (possible for strongly
    non-tempered parameters) the crossed residues are added back via small
    circle quadratures, so the result always equals the defining integral.
    """
    if c.sigma <= alpha.theta2:
        raise PoleOnContour(
            f"abscissa {c.sigma} not right of theta2={alpha.theta2}")
    xs = np.asarray(xs, dtype=np.float64)
    if np.any(xs <= 0):
        raise ValueError("weight argument must be positive")
    sigma_eval = c.sigma if c.sigma <= SIGMA_DIRECT_MAX else _safe_abscissa(alpha)
    kernel = _psi_weight_kernel(alpha.items, sign, psi.key, sigma_eval,
                                c.step, c.tolerance)
    y = PI_CUBED * xs
    vals = kernel.inverse_at(y, c.tolerance) * xs

    if sigma_eval != c.sigma:
        for s0, term in _crossed_poles(alpha, sigma_eval):
            if s0.real >= c.sigma:
                continue
            pref = (-1j if sign > 0 else 1j) if term == 1 else 1.0

            def integrand(z, _term=term, _pref=pref):
                tv = _term_values(z, alpha, _term)
                mv = _mellin_grid(psi, 1.0 - z)
                base = np.exp(np.multiply.outer(-np.log(y), z))
                return _pref * base * tv * mv

            radius = min(0.3, 0.45 * (s0.real - sigma_eval))
            theta = TWO_PI * (np.arange(96) + 0.5) / 96
            e = np.exp(1j * theta)
            ring = s0 + radius * e
            ring_vals = integrand(ring)
            res = radius / 96 * (ring_vals * e).sum(axis=-1)
            vals = vals + xs * res
    return vals


def voronoi_weight_psi(x: float, psi: BumpFunction, alpha: AlphaTriple,
                       sign: int, c: ContourSpec) -> complex:
    """Scalar form of voronoi_weight_psi_many; psi identically zero gives 0."""
    return complex(voronoi_weight_psi_many(np.asarray([x]), psi, alpha, sign, c)[0])
