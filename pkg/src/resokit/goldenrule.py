"""Decay rates into detected channels: exact and Born golden rules.

A decay configuration couples one resonance to a finite set of channels.
Channel eta carries a coupling strength v2 (the squared matrix element
scale) and a spectral weight w(E) >= 0 on [0, inf) decaying at least
like E^-2.  With the Breit-Wigner density

    bw(E) = (Gamma / 2 pi) / ((E - E_R)^2 + Gamma^2 / 4)

the exact channel integral is I_eta = integral_0^inf w_eta bw dE and the
partial width is Gamma_eta = 2 pi v2_eta I_eta.  The Born approximation
replaces bw by a point evaluation: Gamma_eta^Born = 2 pi v2_eta w(E_R).
The relative gap between the two closes linearly in Gamma / E_R, which
is the Born-limit statement tested by the acceptance suite.

After `normalize` (a common rescale of all strengths so the partial
widths sum to Gamma) the registered decay probability follows

    P(t) = R * (1 - e^{-Gamma t}),

with R the detector-weighted registered fraction; R = 1 for an ideal
detector.  P is defined for t >= 0 only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ArrowOfTimeError,
    ChannelLookupError,
    ConfigurationError,
    NormalizationError,
    StateError,
)
from .quadrature import integrate_exp_sinh
from .surface import ResonancePole

__all__ = [
    "FormFactor",
    "Channel",
    "Detector",
    "DecayConfig",
    "breit_wigner_density",
    "normalize",
    "partial_width",
    "total_width_check",
    "registered_fraction",
    "decay_probability",
    "decay_rate",
    "partial_rate",
    "born_rate",
    "born_gap",
    "bw_delta_limit_check",
]


def breit_wigner_density(resonance, energy):
    """Unit-normalized full-line Lorentzian at the resonance."""
    e = np.asarray(energy, dtype=float)
    g = resonance.width
    out = (g / (2.0 * math.pi)) / ((e - resonance.energy) ** 2 + 0.25 * g * g)
    return out if out.shape else float(out)


@dataclass(frozen=True)
class FormFactor:
    """Serializable spectral weight w(E) = E / (E / cutoff + 1)^4.

    Vanishes at threshold, peaks near cutoff / 3 and decays like E^-3,
    comfortably inside the E^-2 integrability contract.
    """

    cutoff: float

    def __post_init__(self):
        if not (self.cutoff > 0.0 and np.isfinite(self.cutoff)):
            raise ConfigurationError(f"cutoff must be > 0, got {self.cutoff}")

    def __call__(self, energy):
        e = np.asarray(energy, dtype=float)
        out = e / (e / self.cutoff + 1.0) ** 4
        return out if out.shape else float(out)

    def to_dict(self):
        return {"kind": "threshold_cutoff", "cutoff": self.cutoff}

    @classmethod
    def from_dict(cls, data):
        if data.get("kind") != "threshold_cutoff":
            raise ConfigurationError(f"unknown form factor kind {data.get('kind')!r}")
        return cls(cutoff=float(data["cutoff"]))


@dataclass(frozen=True)
class Channel:
    """One decay channel: label, coupling strength, spectral weight."""

    label: str
    strength: float
    form_factor: object

    def __post_init__(self):
        if not self.label:
            raise ConfigurationError("channel label must be nonempty")
        if not (self.strength >= 0.0 and np.isfinite(self.strength)):
            raise ConfigurationError(f"strength must be >= 0, got {self.strength}")
        if not callable(self.form_factor):
            raise ConfigurationError("form_factor must be callable")
        probe = np.geomspace(1e-6, 1e6, 25)
        vals = np.asarray(self.form_factor(probe), dtype=float)
        if np.any(vals < 0.0) or not np.all(np.isfinite(vals)):
            raise ConfigurationError(
                f"channel {self.label!r}: weight must be finite and >= 0"
            )
        if vals[-1] * probe[-1] ** 2 > 1e3 * np.max(vals):
            raise ConfigurationError(
                f"channel {self.label!r}: weight must decay at least like E^-2"
            )


class Detector:
    """Per-channel registration efficiencies in [0, 1].

    Efficiencies may be constants or callables of energy.  The ideal
    detector registers everything.
    """

    def __init__(self, efficiencies=None):
        self._eff = dict(efficiencies or {})
        for label, eff in self._eff.items():
            if callable(eff):
                probe = np.asarray(eff(np.geomspace(1e-3, 1e3, 17)), dtype=float)
                bad = np.any(probe < 0.0) or np.any(probe > 1.0)
            else:
                bad = not (0.0 <= float(eff) <= 1.0)
            if bad:
                raise ConfigurationError(
                    f"efficiency for channel {label!r} must lie in [0, 1]"
                )

    @classmethod
    def ideal(cls):
        return cls()

    def efficiency(self, label, energy):
        eff = self._eff.get(label, 1.0)
        if callable(eff):
            return np.asarray(eff(energy), dtype=float)
        return np.full_like(np.asarray(energy, dtype=float), float(eff))

    def labels(self):
        return tuple(self._eff)

    def to_dict(self):
        out = {}
        for label, eff in self._eff.items():
            if callable(eff):
                raise ConfigurationError(
                    "callable efficiencies are not serializable; tabulate first"
                )
            out[label] = float(eff)
        return out


@dataclass(frozen=True)
class DecayConfig:
    """Resonance, channels and detector, plus normalization state."""

    resonance: ResonancePole
    channels: tuple
    detector: Detector
    normalized: bool = False
    rescale: float = 1.0

    def __post_init__(self):
        if not self.channels:
            raise ConfigurationError("a decay needs at least one channel")
        labels = [c.label for c in self.channels]
        if len(set(labels)) != len(labels):
            raise ConfigurationError("duplicate channel labels")
        object.__setattr__(self, "channels", tuple(self.channels))

    def channel(self, label):
        for c in self.channels:
            if c.label == label:
                return c
        raise ChannelLookupError(label)


def _channel_integral(config, channel, weighted=False):
    """integral_0^inf [efficiency] w_eta bw dE by exp-sinh quadrature."""
    res = config.resonance

    def f(e):
        out = np.asarray(channel.form_factor(e), dtype=float)
        out = out * breit_wigner_density(res, e)
        if weighted:
            out = out * config.detector.efficiency(channel.label, e)
        return out

    value, _ = integrate_exp_sinh(f, tol=1e-12)
    return float(value)


def normalize(config):
    """Rescale all strengths by one common factor so partial widths sum
    to the resonance width.  Relative branching ratios are untouched."""
    total = sum(
        2.0 * math.pi * c.strength * _channel_integral(config, c)
        for c in config.channels
    )
    if total <= 0.0:
        raise NormalizationError("total coupling vanishes; cannot normalize")
    factor = config.resonance.width / total
    channels = tuple(replace(c, strength=c.strength * factor) for c in config.channels)
    return replace(config, channels=channels, normalized=True,
                   rescale=config.rescale * factor)


def partial_width(config, label):
    """Gamma_eta = 2 pi v2_eta integral w_eta bw dE (ideal weighting)."""
    c = config.channel(label)
    return 2.0 * math.pi * c.strength * _channel_integral(config, c)


def total_width_check(config):
    """Sum of partial widths; equals the resonance width when normalized."""
    return sum(partial_width(config, c.label) for c in config.channels)


def registered_fraction(config):
    """Detector-weighted share of the total width, in [0, 1]."""
    _require_normalized(config)
    g = config.resonance.width
    acc = 0.0
    for c in config.channels:
        acc += 2.0 * math.pi * c.strength * _channel_integral(config, c, weighted=True)
    return acc / g


def _require_normalized(config):
    if not config.normalized:
        raise StateError("normalize the configuration before computing rates")


def decay_probability(config, t):
    """P(t) = R (1 - e^{-Gamma t}) for t >= 0."""
    _require_normalized(config)
    if t < 0.0:
        raise ArrowOfTimeError(f"decay probability is defined for t >= 0, got {t}")
    g = config.resonance.width
    return registered_fraction(config) * (1.0 - math.exp(-g * t))


def decay_rate(config, t):
    """dP/dt = R Gamma e^{-Gamma t} for t >= 0."""
    _require_normalized(config)
    if t < 0.0:
        raise ArrowOfTimeError(f"decay rate is defined for t >= 0, got {t}")
    g = config.resonance.width
    return registered_fraction(config) * g * math.exp(-g * t)


def partial_rate(config, label, t):
    """Channel share of the rate at time t (detector weighted)."""
    _require_normalized(config)
    if t < 0.0:
        raise ArrowOfTimeError(f"partial rate is defined for t >= 0, got {t}")
    c = config.channel(label)
    g = config.resonance.width
    return (
        2.0 * math.pi * c.strength * _channel_integral(config, c, weighted=True)
        * math.exp(-g * t)
    )


def born_rate(config):
    """Born golden rule: bw replaced by evaluation at the peak."""
    _require_normalized(config)
    e_r = config.resonance.energy
    return sum(
        2.0 * math.pi * c.strength * float(np.asarray(c.form_factor(e_r), dtype=float))
        for c in config.channels
    )


def born_gap(config):
    """Relative gap |born - exact| / exact of the total width."""
    _require_normalized(config)
    exact = total_width_check(config)
    return abs(born_rate(config) - exact) / exact


def bw_delta_limit_check(energy, widths, test_fn):
    """Weak-limit errors |integral f bw dE - f(E_R)| for shrinking widths.

    widths must decrease strictly; the returned errors shrink linearly
    in the width (the Lorentzian is a nascent delta), with a constant
    set by the local curvature of f around E_R.
    """
    widths = [float(g) for g in widths]
    if any(b >= a for a, b in zip(widths, widths[1:])) or not widths:
        raise ConfigurationError("widths must be strictly decreasing")
    errors = []
    for g in widths:
        res = ResonancePole(energy=energy, width=g)

        def f(e):
            return np.asarray(test_fn(e), dtype=float) * breit_wigner_density(res, e)

        value, _ = integrate_exp_sinh(f, tol=1e-12)
        errors.append(abs(float(value) - float(test_fn(energy))))
    return errors
