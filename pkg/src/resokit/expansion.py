"""Complex basis-vector expansion by contour deformation.

The S-matrix pairing on the physical spectrum,

    I(t) = integral_0^inf conj(psi(E)) S(E) e^{-i E t} phi(E) dE,

is deformed through the fourth quadrant of the momentum plane (E = k^2,
physical rim k > 0, exit ray k = -i u).  Each resonance pole crossed on
the way contributes a residue term b_i e^{-i z_i t}; what remains is the
background integral along the negative real axis of the second sheet,

    bg(t) = integral_0^inf g(u) e^{+i u^2 t} du,
    g(u) = conj(psi)(-u^2) S(-i u) phi(-u^2) (-2 u),

which decays slower than any exponential.  The deformation requires
t >= 0: on the ray the evolution factor e^{+i u^2 t} is bounded only
for forward times, which is how the semigroup arrow enters.

Pole coefficients are extracted with midpoint-rule circle integrals at
a quarter of the distance to the nearest other singularity, and checked
for radius independence.  The ray uses a frozen tanh-sinh table shared
by all evaluation times; every background evaluation is verified against
the embedded step-doubled rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    ArrowOfTimeError,
    ConfigurationError,
    GeometryError,
    HardyClassError,
    QuadratureError,
)
from .hardy import HalfPlane, HardyFunction, paley_wiener_check
from .quadrature import (
    circle_residue,
    complex_quad,
    oscillatory_quad,
    tanh_sinh_rule,
)
from .surface import SMatrixModel

__all__ = [
    "PreparedState",
    "PairingResult",
    "TruncationError",
    "dirac_pairing",
    "smatrix_pairing_direct",
    "expand",
    "ResonanceExpansion",
    "background_profile",
    "EffectiveMatrix",
    "effective_matrix",
    "truncated_evolve",
]


class PairingResult(NamedTuple):
    value: complex
    error: float


class TruncationError(NamedTuple):
    error: float
    relative: bool


@dataclass(frozen=True)
class PreparedState:
    """An in-state prepared before registration: LOWER-class wave.

    Construction runs the Paley-Wiener check so that only functions with
    the right Fourier support enter pairings; `leakage` records the
    measured forbidden-side fraction.  Pass validate=False to skip the
    check (leakage is then None).
    """

    wave: HardyFunction
    leakage: float | None = None
    leakage_tol: float = 1e-5

    def __init__(self, wave, leakage_tol=1e-5, e_max=200.0, n=2**18, validate=True):
        if not isinstance(wave, HardyFunction):
            raise ConfigurationError("PreparedState needs a HardyFunction")
        if wave.half_plane is not HalfPlane.LOWER:
            raise HardyClassError(
                "prepared states live in the LOWER Hardy class (H2-)"
            )
        leakage = None
        if validate:
            leakage = paley_wiener_check(wave, e_max=e_max, n=n)
            if leakage > leakage_tol:
                raise HardyClassError(
                    f"Paley-Wiener leakage {leakage:.3e} exceeds {leakage_tol:g};"
                    " the wave is not numerically in its declared class"
                )
        object.__setattr__(self, "wave", wave)
        object.__setattr__(self, "leakage", leakage)
        object.__setattr__(self, "leakage_tol", leakage_tol)


def _as_wave(state):
    return state.wave if isinstance(state, PreparedState) else state


def _require_pair(psi, state):
    if not isinstance(psi, HardyFunction) or psi.half_plane is not HalfPlane.UPPER:
        raise HardyClassError("the registration-side function must be UPPER class")
    wave = _as_wave(state)
    if not isinstance(wave, HardyFunction) or wave.half_plane is not HalfPlane.LOWER:
        raise HardyClassError("the prepared state must be LOWER class")
    return psi.conjugated(), wave


def dirac_pairing(psi, state):
    """<psi|state> over the physical spectrum [0, inf)."""
    dag, wave = _require_pair(psi, state)
    value, _ = complex_quad(lambda e: dag(e) * wave(e), 0.0, np.inf)
    return value


def _direct_cutoff(dag, wave, tail_tol):
    """Upper integration limit so the dropped rational tail stays below
    tail_tol (|S| = 1 on the spectrum makes the envelope exact)."""
    m = dag.decay_order + wave.decay_order
    scale = dag.decay_scale * wave.decay_scale
    cut = (scale / ((m - 1) * tail_tol)) ** (1.0 / (m - 1))
    floor = 8.0 * max(dag.pole_scale, wave.pole_scale, 1.0)
    return max(cut, floor), m, scale


def smatrix_pairing_direct(psi, state, model, t, tail_tol=1e-9):
    """The evolved S-matrix pairing, integrated on the physical spectrum.

    Uses oscillatory (QAWO) quadrature on [0, L] with L chosen so the
    truncated tail is below tail_tol, which is added to the reported
    error bound.  This is the reference value the deformation identity
    is checked against.
    """
    if not isinstance(model, SMatrixModel):
        raise ConfigurationError("smatrix_pairing_direct needs an SMatrixModel")
    if t < 0.0:
        raise ArrowOfTimeError(f"the pairing evolves forward only, got t = {t}")
    dag, wave = _require_pair(psi, state)
    cut, _, _ = _direct_cutoff(dag, wave, tail_tol)

    def f(e):
        return dag(e) * model.on_spectrum(e) * wave(e)

    value, err = oscillatory_quad(f, cut, t)
    return PairingResult(value=value, error=err + tail_tol)


def _wave_momentum_images(dag, wave):
    """Momentum-plane images of every energy pole of the pair.

    Hardy classes keep these out of the closed fourth quadrant; that is
    verified here because the deformation is meaningless otherwise.
    """
    images = []
    for f in (dag, wave):
        for _, p, _ in f.terms:
            root = np.sqrt(complex(p))
            for k_img in (root, -root):
                if k_img.real > 1e-12 and k_img.imag < -1e-12:
                    raise GeometryError(
                        f"energy pole {p} has a momentum image {k_img} inside "
                        "the deformation quadrant"
                    )
                images.append(k_img)
    return images


@dataclass(frozen=True, eq=False)
class ResonanceExpansion:
    """Pole coefficients plus a frozen background-ray table."""

    model: SMatrixModel
    psi: HardyFunction
    state: PreparedState
    coefficients: tuple
    ray_nodes: np.ndarray = field(repr=False)
    ray_weights: np.ndarray = field(repr=False)
    ray_values: np.ndarray = field(repr=False)
    step: float
    cutoff: float
    t_max: float

    def __post_init__(self):
        for arr in (self.ray_nodes, self.ray_weights, self.ray_values):
            arr.setflags(write=False)

    @property
    def eigenvalues(self):
        return tuple(p.position for p in self.model.poles)

    def pole_sum(self, t):
        """Sum of resonance terms b_i e^{-i z_i t}, t >= 0."""
        if t < 0.0:
            raise ArrowOfTimeError(f"expansion terms evolve forward only, got t = {t}")
        return complex(
            sum(
                b * np.exp(-1j * z * t)
                for b, z in zip(self.coefficients, self.eigenvalues)
            )
        )

    def background_with_error(self, t):
        """Background integral at time t and its stride-doubling error."""
        if t < 0.0:
            raise ArrowOfTimeError(f"the background evolves forward only, got t = {t}")
        if t > self.t_max * (1.0 + 1e-12):
            raise QuadratureError(
                f"table was built for t <= {self.t_max:g}; rebuild with a larger t_max"
            )
        phase = np.exp(1j * self.ray_nodes**2 * t)
        contrib = self.ray_weights * self.ray_values * phase
        full = complex(np.sum(contrib))
        coarse = 2.0 * complex(np.sum(contrib[::2]))
        return full, abs(full - coarse)

    def background(self, t):
        value, est = self.background_with_error(t)
        if est > max(5e-9, 1e-4 * abs(value)):
            raise QuadratureError(
                f"background ray under-resolved at t = {t:g} "
                f"(stride check {est:.3e})"
            )
        return value

    def reconstruct(self, t):
        """Pole sum plus background: the deformed pairing at time t."""
        return self.pole_sum(t) + self.background(t)

    def truncation_error(self, t):
        """Relative weight of the background against the full pairing.

        Falls back to the absolute difference (relative=False) when the
        full value is numerically zero.
        """
        full = self.reconstruct(t)
        trunc = self.pole_sum(t)
        diff = abs(full - trunc)
        if abs(full) < 1e-15 * max(abs(trunc), 1.0):
            return TruncationError(error=diff, relative=False)
        return TruncationError(error=diff / abs(full), relative=True)


def expand(psi, state, model, t_max=None, ray_tail_tol=1e-10, step=None,
           node_cap=4_000_000, nodes=256):
    """Deform the evolved pairing into pole terms plus a background table.

    Parameters
    ----------
    psi, state : HardyFunction (UPPER), PreparedState
        Registration-side and preparation-side functions.
    model : SMatrixModel
    t_max : float, optional
        Largest evolution time the ray table must support; defaults to
        ten lifetimes of the narrowest resonance.
    ray_tail_tol : float
        Absolute bound on the truncated ray tail.
    step : float, optional
        Tanh-sinh step override.  The default scales like
        3 / (cutoff^2 t_max) so the oscillation e^{i u^2 t} stays
        resolved out to t_max.
    node_cap : int
        Hard ceiling on the ray table size.
    nodes : int
        Circle nodes for residue extraction.
    """
    if not isinstance(model, SMatrixModel):
        raise ConfigurationError("expand needs an SMatrixModel")
    dag, wave = _require_pair(psi, state)
    if t_max is None:
        t_max = 10.0 / min(p.width for p in model.poles)
    if not t_max > 0.0:
        raise ConfigurationError("t_max must be positive")

    images = _wave_momentum_images(dag, wave)
    sing = list(model.singularities()) + images

    def integrand(k):
        return dag(k * k) * model.eval(k) * wave(k * k) * 2.0 * k

    coeffs = []
    for i, pole in enumerate(model.poles):
        ki = pole.momentum
        dist = min(
            [abs(ki - s) for s in sing if abs(ki - s) > 1e-13 * abs(ki)]
            + [abs(ki.imag), abs(ki.real)]
        )
        radius = 0.25 * dist
        b_outer = -2j * np.pi * circle_residue(integrand, ki, radius, nodes=nodes)
        b_inner = -2j * np.pi * circle_residue(integrand, ki, 0.5 * radius, nodes=nodes)
        if abs(b_outer - b_inner) > 1e-8 * max(abs(b_inner), 1e-30):
            raise QuadratureError(
                f"residue at pole {i} depends on the circle radius "
                f"({abs(b_outer - b_inner):.3e}); singularity layout suspect"
            )
        coeffs.append(complex(b_inner))

    # ray cutoff: walk outward until the analytic tail bound drops under tol
    m_ray = 2 * (dag.decay_order + wave.decay_order) - 1

    def ray_g(u):
        e = -(u * u)
        return dag(e) * model.eval(-1j * u) * wave(e) * (-2.0 * u)

    cutoff = 4.0 * max(
        [math.sqrt(dag.pole_scale), math.sqrt(wave.pole_scale), 1.0]
        + [abs(s) for s in sing]
    )
    for _ in range(60):
        bound = abs(ray_g(np.array([cutoff]))[0]) * cutoff / (m_ray - 1)
        if bound < ray_tail_tol:
            break
        cutoff *= 1.5
    else:
        raise QuadratureError("ray tail bound did not converge")

    if step is None:
        step = min(2e-4, 3.0 / (cutoff**2 * t_max))
    n_nodes = 2 * int(np.ceil(3.6 / step)) + 1
    if n_nodes > node_cap:
        raise QuadratureError(
            f"ray table would need {n_nodes} nodes (cap {node_cap}); "
            "reduce t_max or raise the cap"
        )
    ray_u, ray_w = tanh_sinh_rule(0.0, cutoff, step)
    ray_vals = ray_g(ray_u)

    return ResonanceExpansion(
        model=model,
        psi=psi,
        state=state,
        coefficients=tuple(coeffs),
        ray_nodes=ray_u,
        ray_weights=ray_w,
        ray_values=ray_vals,
        step=step,
        cutoff=cutoff,
        t_max=float(t_max),
    )


def background_profile(expansion, times):
    """|background| sampled on a strictly increasing time grid."""
    ts = np.asarray(times, dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise ConfigurationError("need a one-dimensional, nonempty time grid")
    if np.any(ts < 0.0):
        raise ArrowOfTimeError("background profile needs t >= 0")
    if np.any(np.diff(ts) <= 0.0):
        raise ConfigurationError("time grid must be strictly increasing")
    mags = np.array([abs(expansion.background(t)) for t in ts])
    return ts, mags


@dataclass(frozen=True)
class EffectiveMatrix:
    """Diagonal complex-energy matrix of the truncated expansion."""

    eigenvalues: tuple

    def __post_init__(self):
        if not self.eigenvalues:
            raise ConfigurationError("an effective matrix needs at least one level")
        object.__setattr__(self, "eigenvalues", tuple(complex(z) for z in self.eigenvalues))
        for z in self.eigenvalues:
            if z.imag >= 0.0:
                raise ConfigurationError(
                    f"effective eigenvalues must decay (Im z < 0), got {z}"
                )

    @property
    def size(self):
        return len(self.eigenvalues)

    def as_matrix(self):
        return np.diag(np.array(self.eigenvalues, dtype=complex))


def effective_matrix(model):
    """Truncate the expansion of a model to its finite pole sector."""
    if not isinstance(model, SMatrixModel):
        raise ConfigurationError("effective_matrix needs an SMatrixModel")
    return EffectiveMatrix(eigenvalues=tuple(p.position for p in model.poles))


def truncated_evolve(matrix, coefficients, t):
    """Evolve component coefficients under the diagonal effective matrix.

    Exactly-zero components stay exactly zero: the evolution is
    componentwise multiplication and never mixes levels, so a truncated
    theory cannot regenerate a decayed component.
    """
    if not isinstance(matrix, EffectiveMatrix):
        raise ConfigurationError("truncated_evolve needs an EffectiveMatrix")
    if t < 0.0:
        raise ArrowOfTimeError(f"truncated evolution is forward only, got t = {t}")
    coeff = np.asarray(coefficients, dtype=complex)
    if coeff.shape != (matrix.size,):
        raise ConfigurationError(
            f"coefficient vector must have length {matrix.size}, got {coeff.shape}"
        )
    return coeff * np.exp(-1j * np.array(matrix.eigenvalues) * t)
