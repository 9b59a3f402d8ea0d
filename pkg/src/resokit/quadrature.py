"""Quadrature kernels used across the package.

Two families live here.  The double-exponential (tanh-sinh and exp-sinh)
rules produce explicit node/weight tables; the contour-deformation code
stores those tables immutably and reuses them for every evolution time,
checking convergence by comparing against the embedded step-doubled rule
(the even-index subset of a table with step h is exactly the table with
step 2h).  The scipy wrappers adapt ``scipy.integrate.quad`` to complex
integrands, full-line integrals and oscillatory Fourier weights.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import expit

from .errors import QuadratureError

__all__ = [
    "tanh_sinh_rule",
    "exp_sinh_rule",
    "integrate_exp_sinh",
    "complex_quad",
    "complex_quad_full_line",
    "oscillatory_quad",
    "decaying_fourier_quad",
    "circle_sum",
    "circle_residue",
]


def tanh_sinh_rule(a, b, h, clip=3.6):
    """Tanh-sinh nodes and weights for the finite interval (a, b).

    Parameters
    ----------
    a, b : float
        Interval endpoints, a < b.  Nodes are placed by their offset
        from the nearer endpoint in a cancellation-free form, so an
        endpoint sitting at zero is approached arbitrarily closely and
        integrable singularities there are evaluated at genuinely
        interior points.  A nonzero endpoint is resolved only to its
        own rounding spacing, which caps how deep a singularity there
        can be probed.
    h : float
        Step in the trapezoidal variable.  The even-index subset of the
        returned table is exactly the rule with step 2h, which is what
        the stride-doubling error checks rely on.
    clip : float, optional
        Truncation of the trapezoidal variable.  The default keeps the
        truncated tail near 1e-12 even for integrable endpoint
        singularities; raise it to push that floor lower.

    Returns
    -------
    x, w : ndarray
        Nodes in (a, b) and positive weights, ordered by the underlying
        trapezoidal index so stride slicing stays meaningful.
    """
    if not b > a:
        raise QuadratureError(f"empty interval [{a}, {b}]")
    if h <= 0:
        raise QuadratureError("step must be positive")
    m = int(np.ceil(clip / h))
    if m % 2:
        m += 1  # even m keeps the [::2] subset exactly on the 2h grid
    t = np.arange(-m, m + 1) * h
    s = 0.5 * np.pi * np.sinh(t)
    w = 0.5 * np.pi * np.cosh(t) / np.cosh(s) ** 2 * h
    span = b - a
    # expit(2s) equals (1 + tanh(s))/2 but never saturates, so the gap
    # to the nearer endpoint survives in floating point
    x = np.where(s <= 0.0, a + span * expit(2.0 * s), b - span * expit(-2.0 * s))
    return x, 0.5 * span * w


@lru_cache(maxsize=64)
def exp_sinh_rule(h, clip=3.7):
    """Exp-sinh nodes and weights for (0, inf), decaying integrands.

    The map x = exp(pi/2 sinh t) spreads nodes from 0 to infinity double
    exponentially.  Same stride-doubling property as `tanh_sinh_rule`.
    Tables are cached and read-only; copy before mutating.
    """
    if h <= 0:
        raise QuadratureError("step must be positive")
    m = int(np.ceil(clip / h))
    t = np.arange(-m, m + 1) * h
    x = np.exp(0.5 * np.pi * np.sinh(t))
    w = 0.5 * np.pi * np.cosh(t) * x * h
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def integrate_exp_sinh(f, h0=2e-3, tol=1e-11, max_halvings=8):
    """Integrate f over (0, inf) with step-halved exp-sinh rules.

    f must accept an ndarray of positive abscissas.  Halves the step
    until two successive estimates agree to ``tol`` (absolute, plus a
    matching relative term), then returns the finer estimate and the
    last difference as the error measure.
    """
    h = h0
    x, w = exp_sinh_rule(h)
    prev = np.sum(w * f(x))
    for _ in range(max_halvings):
        h *= 0.5
        x, w = exp_sinh_rule(h)
        cur = np.sum(w * f(x))
        if abs(cur - prev) <= tol * (1.0 + abs(cur)):
            return cur, abs(cur - prev)
        prev = cur
    raise QuadratureError(
        f"exp-sinh integral did not reach tol={tol:g} after {max_halvings} halvings"
    )


def complex_quad(f, a, b, **kwargs):
    """scipy quad for complex-valued f; returns (value, error bound).

    Accepts the usual quad keywords (limit, epsabs, epsrel).  Infinite
    limits are allowed and use quad's internal variable transform, which
    is essential for slowly decaying rational tails.
    """
    kwargs.setdefault("limit", 400)
    re, re_err = quad(lambda x: np.real(f(x)), a, b, **kwargs)
    im, im_err = quad(lambda x: np.imag(f(x)), a, b, **kwargs)
    return re + 1j * im, re_err + im_err


def complex_quad_full_line(f, **kwargs):
    """Integral of complex f over the whole real line."""
    kwargs.setdefault("limit", 800)
    kwargs.setdefault("epsabs", 1e-12)
    kwargs.setdefault("epsrel", 1e-12)
    return complex_quad(f, -np.inf, np.inf, **kwargs)


def oscillatory_quad(f, upper, omega, **kwargs):
    """Integral of f(x) e^{-i omega x} over [0, upper] for complex f.

    Uses quad's Clenshaw-Curtis oscillatory weights (QAWO), which stay
    accurate when omega * upper spans thousands of cycles.  For omega
    exactly zero this reduces to a plain adaptive integral.
    """
    if omega == 0.0:
        return complex_quad(f, 0.0, upper, **kwargs)
    kwargs.setdefault("limit", 3000)
    kwargs.setdefault("maxp1", 200)
    rc, e1 = quad(lambda x: np.real(f(x)), 0.0, upper, weight="cos", wvar=omega, **kwargs)
    rs, e2 = quad(lambda x: np.real(f(x)), 0.0, upper, weight="sin", wvar=omega, **kwargs)
    ic, e3 = quad(lambda x: np.imag(f(x)), 0.0, upper, weight="cos", wvar=omega, **kwargs)
    is_, e4 = quad(lambda x: np.imag(f(x)), 0.0, upper, weight="sin", wvar=omega, **kwargs)
    # (re + i im)(cos - i sin) collected into real and imaginary parts
    value = (rc + is_) + 1j * (ic - rs)
    return value, e1 + e2 + e3 + e4


def decaying_fourier_quad(f, omega, **kwargs):
    """Integral of f(x) e^{-i omega x} over [0, inf) for complex f.

    quad's QAWF Fourier algorithm handles the infinite oscillatory tail;
    f must decay at infinity.  omega must be nonzero (use complex_quad
    with an infinite limit otherwise).
    """
    if omega == 0.0:
        raise QuadratureError("QAWF needs a nonzero frequency")
    kwargs.setdefault("limit", 600)
    kwargs.setdefault("maxp1", 200)
    rc, e1 = quad(lambda x: np.real(f(x)), 0.0, np.inf, weight="cos", wvar=omega, **kwargs)
    rs, e2 = quad(lambda x: np.real(f(x)), 0.0, np.inf, weight="sin", wvar=omega, **kwargs)
    ic, e3 = quad(lambda x: np.imag(f(x)), 0.0, np.inf, weight="cos", wvar=omega, **kwargs)
    is_, e4 = quad(lambda x: np.imag(f(x)), 0.0, np.inf, weight="sin", wvar=omega, **kwargs)
    value = (rc + is_) + 1j * (ic - rs)
    return value, e1 + e2 + e3 + e4


def circle_sum(f, center, radius, moment=0, nodes=256):
    """(1/2 pi i) contour integral of f(z) (z - center)^moment on a circle.

    Midpoint rule on the circle; spectrally accurate for integrands
    analytic in an annulus around the contour.  moment=0 with a simple
    pole inside returns its residue, moment=1 returns residue * position
    offsets, which is what the pole locator uses.
    """
    theta = 2.0 * np.pi * (np.arange(nodes) + 0.5) / nodes
    z = center + radius * np.exp(1j * theta)
    vals = f(z) * (z - center) ** moment
    # dz = i r e^{i theta} dtheta folds the 1/(2 pi i) away
    return np.mean(vals * radius * np.exp(1j * theta))


def circle_residue(f, center, radius, nodes=256):
    """Residue of f at an isolated singularity inside the circle."""
    return circle_sum(f, center, radius, moment=0, nodes=nodes)
