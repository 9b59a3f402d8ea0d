"""Two-sheeted energy surface and unitary S-matrix models.

Conventions
-----------
The scattering energy surface for a semibounded Hamiltonian is the
two-sheeted Riemann surface of sqrt(E), uniformized by the momentum
plane through E = k^2.  The upper half k-plane is the physical sheet
(sheet I), the lower half is the second sheet (sheet II).  The physical
spectrum [0, inf) corresponds to the positive real k-axis; the ray used
by contour deformation, the negative real axis of sheet II, corresponds
to the negative imaginary k-axis (k = -iu, E = -u^2).

S-matrix models are finite Blaschke products in k,

    S(k) = prod_i (k + k_i)(k - conj(k_i)) / ((k - k_i)(k + conj(k_i)))
           * exp(2 i delta(k)),

with resonance poles k_i in the fourth quadrant and an optional rational
background phase delta.  |S| = 1 on the real axis by construction.  For
pure pole models S(-k) = 1/S(k) and S(-conj(k)) = conj(S(k)) hold at
every k where both sides exist.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchPointError,
    ConfigurationError,
    GeometryError,
    PoleProximityError,
)
from .quadrature import circle_sum

__all__ = [
    "Sheet",
    "energy_to_momentum",
    "momentum_to_energy",
    "ResonancePole",
    "BackgroundPhase",
    "SMatrixModel",
    "blaschke_residue",
    "locate_pole",
    "poles_of",
    "unitarity_deviation",
]


class Sheet(enum.Enum):
    """Riemann sheet labels: I is physical, II is the resonance sheet."""

    I = "I"
    II = "II"


def energy_to_momentum(energy, sheet):
    """Map a point of the energy surface to the momentum plane.

    The branch cut sits on the physical spectrum [0, inf).  With
    theta = arg(E) taken in [0, 2 pi), sheet I maps to
    sqrt(|E|) e^{i theta/2} (upper half plane including the positive
    real boundary) and sheet II to its negative.
    """
    energy = complex(energy)
    if energy == 0:
        raise BranchPointError("E = 0 is the branch point; no momentum image")
    if not isinstance(sheet, Sheet):
        raise ConfigurationError(f"sheet must be a Sheet member, got {sheet!r}")
    theta = np.angle(energy) % (2.0 * np.pi)
    k = math.sqrt(abs(energy)) * np.exp(0.5j * theta)
    return k if sheet is Sheet.I else -k


def momentum_to_energy(k):
    """Inverse of `energy_to_momentum`: returns (energy, sheet).

    Real k (the boundary between the half planes) is assigned to the
    physical sheet, matching the limit from above the cut.
    """
    k = complex(k)
    if k == 0:
        raise BranchPointError("k = 0 is the branch point image")
    sheet = Sheet.I if k.imag > 0 or (k.imag == 0 and k.real > 0) else Sheet.II
    return k * k, sheet


@dataclass(frozen=True)
class ResonancePole:
    """A resonance with real energy > 0 and width > 0.

    position is the second-sheet energy E - i width/2; momentum is its
    image in the lower half k-plane (fourth quadrant for narrow poles).
    """

    energy: float
    width: float

    def __post_init__(self):
        if not (self.energy > 0.0 and np.isfinite(self.energy)):
            raise ConfigurationError(f"resonance energy must be > 0, got {self.energy}")
        if not (self.width > 0.0 and np.isfinite(self.width)):
            raise ConfigurationError(f"resonance width must be > 0, got {self.width}")
        if self.width >= 2.0 * self.energy:
            raise ConfigurationError(
                "width/2 must stay below the resonance energy so the pole "
                "remains on the fourth-quadrant part of sheet II"
            )

    @property
    def position(self):
        """Second-sheet pole position E - i width / 2."""
        return self.energy - 0.5j * self.width

    @property
    def momentum(self):
        """Pole position in the momentum plane (fourth quadrant)."""
        return energy_to_momentum(self.position, Sheet.II)

    @property
    def lifetime(self):
        return 1.0 / self.width

    def to_dict(self):
        return {"energy": self.energy, "width": self.width}

    @classmethod
    def from_dict(cls, data):
        return cls(energy=float(data["energy"]), width=float(data["width"]))


@dataclass(frozen=True)
class BackgroundPhase:
    """Rational background phase, real on the real axis.

    delta(k) = sum_j c_j * 2 (k - a_j) / ((k - a_j)^2 + b_j^2)

    with poles at a_j +/- i b_j.  Deformation-safe models need every
    a_j < 0 so the fourth quadrant of the momentum plane and the
    negative imaginary ray stay free of background singularities; the
    constructor enforces this.
    """

    terms: tuple = ()

    def __post_init__(self):
        cleaned = []
        for term in self.terms:
            c, a, b = (float(x) for x in term)
            if not b > 0.0:
                raise ConfigurationError("background pole half-width must be > 0")
            if not a < 0.0:
                raise GeometryError(
                    "background poles must sit at negative real part (a < 0) "
                    "to keep the deformation quadrant clean"
                )
            cleaned.append((c, a, b))
        object.__setattr__(self, "terms", tuple(cleaned))

    def phase(self, k):
        k = np.asarray(k, dtype=complex)
        out = np.zeros_like(k)
        for c, a, b in self.terms:
            out = out + c * 2.0 * (k - a) / ((k - a) ** 2 + b * b)
        return out if out.shape else complex(out)

    def pole_positions(self):
        """All poles of delta in the momentum plane."""
        pts = []
        for _, a, b in self.terms:
            pts.extend([a + 1j * b, a - 1j * b])
        return tuple(pts)

    def to_dict(self):
        return {"terms": [list(t) for t in self.terms]}

    @classmethod
    def from_dict(cls, data):
        return cls(terms=tuple(tuple(t) for t in data.get("terms", ())))


@dataclass(frozen=True)
class SMatrixModel:
    """Finite Blaschke product with an optional background phase."""

    poles: tuple
    background: BackgroundPhase | None = None
    proximity: float = field(default=1e-12, compare=False)

    def __post_init__(self):
        if not self.poles:
            raise ConfigurationError("an S-matrix model needs at least one pole")
        poles = tuple(self.poles)
        for p in poles:
            if not isinstance(p, ResonancePole):
                raise ConfigurationError("poles must be ResonancePole instances")
        ks = [p.momentum for p in poles]
        for i in range(len(ks)):
            for j in range(i + 1, len(ks)):
                if abs(ks[i] - ks[j]) < 1e-9 * max(abs(ks[i]), abs(ks[j])):
                    raise ConfigurationError("coincident resonance poles")
        object.__setattr__(self, "poles", poles)

    def singularities(self):
        """Momentum-plane poles of S: resonance poles, their mirror
        images -conj(k_i), and any background-phase poles."""
        pts = []
        for p in self.poles:
            k = p.momentum
            pts.extend([k, -np.conj(k)])
        if self.background is not None:
            pts.extend(self.background.pole_positions())
        return tuple(pts)

    def eval(self, k):
        """S(k) for scalar or array k; rejects points at pole distance
        below `proximity` relative to the pole scale."""
        k_arr = np.asarray(k, dtype=complex)
        for s in self.singularities():
            d = np.abs(k_arr - s)
            if np.any(d < self.proximity * max(abs(s), 1.0)):
                raise PoleProximityError(
                    f"evaluation within {self.proximity:g} of pole {s}",
                    pole=s,
                    distance=float(np.min(d)),
                )
        out = np.ones_like(k_arr)
        for p in self.poles:
            kp = p.momentum
            out = out * (k_arr + kp) * (k_arr - np.conj(kp))
            out = out / ((k_arr - kp) * (k_arr + np.conj(kp)))
        if self.background is not None:
            out = out * np.exp(2j * self.background.phase(k_arr))
        return out if out.shape else complex(out)

    def eval_energy(self, energy, sheet):
        return self.eval(energy_to_momentum(energy, sheet))

    def on_spectrum(self, energy):
        """S on the physical spectrum (real energy >= 0, sheet I rim).

        The threshold E = 0 itself is regular for Blaschke models (every
        factor evaluates to 1 there), so it is allowed even though the
        surface map is singular at the branch point.
        """
        energy = np.asarray(energy, dtype=float)
        if np.any(energy < 0.0):
            raise BranchPointError("physical spectrum evaluation needs E >= 0")
        return self.eval(np.sqrt(energy))

    def to_dict(self):
        d = {"poles": [p.to_dict() for p in self.poles]}
        if self.background is not None and self.background.terms:
            d["background"] = self.background.to_dict()
        return d

    @classmethod
    def from_dict(cls, data):
        poles = tuple(ResonancePole.from_dict(p) for p in data["poles"])
        bg = None
        if data.get("background"):
            bg = BackgroundPhase.from_dict(data["background"])
        return cls(poles=poles, background=bg)


def blaschke_residue(model, index):
    """Residue of S at the resonance pole `index`, in closed form.

    For the single factor the residue at k_i is
    2 k_i (k_i - conj(k_i)) / (k_i + conj(k_i)); remaining factors and
    the background phase multiply in evaluated at k_i.
    """
    poles = model.poles
    ki = poles[index].momentum
    res = 2.0 * ki * (ki - np.conj(ki)) / (ki + np.conj(ki))
    for j, p in enumerate(poles):
        if j == index:
            continue
        kj = p.momentum
        res *= (ki + kj) * (ki - np.conj(kj)) / ((ki - kj) * (ki + np.conj(kj)))
    if model.background is not None:
        res *= np.exp(2j * model.background.phase(ki))
    return res


def locate_pole(model, center, radius, nodes=256):
    """Locate a simple pole of S near `center` without derivatives.

    For f with a single simple pole inside the circle the first two
    contour moments give the position exactly:
    oint k f dk / oint f dk = k_pole.  Spectral accuracy in `nodes`.
    """
    m0 = circle_sum(model.eval, center, radius, moment=0, nodes=nodes)
    m1 = circle_sum(lambda k: model.eval(k) * k, center, radius, moment=0, nodes=nodes)
    if abs(m0) == 0.0:
        raise GeometryError("no pole enclosed by the search circle")
    return m1 / m0


def poles_of(model, nodes=256):
    """Numerically recover every resonance pole of the model.

    Search circles are centered on the declared positions with radius a
    quarter of the distance to the nearest other singularity, so each
    encloses exactly one pole.
    """
    sing = model.singularities()
    found = []
    for i, p in enumerate(model.poles):
        ki = p.momentum
        others = [s for s in sing if abs(s - ki) > 1e-14 * abs(ki)]
        dist = min(abs(ki - s) for s in others)
        dist = min(dist, abs(ki.imag), abs(ki.real))  # stay inside the quadrant
        found.append(locate_pole(model, ki, 0.25 * dist, nodes=nodes))
    return tuple(found)


def unitarity_deviation(model, k_values):
    """max | |S(k)| - 1 | over real momenta k_values."""
    k = np.asarray(k_values, dtype=float)
    return float(np.max(np.abs(np.abs(model.eval(k)) - 1.0)))
