"""Euler-Bernoulli cantilever under a band-limited white-noise point force.

Responses are obtained by modal summation over the analytic clamped-free
modes. For every input sample the peak (over stations along the beam) r.m.s.
acceleration and outer-fibre bending strain are returned.

Fixed modelling choices: rectangular section ``I = w t^3 / 12``, damping
ratio per mode, force spectral density equal to ``force_amplitude**2``, a
512-point log-spaced frequency grid over ``[0.1 w_1, 1.2 w_R]`` (``R`` =
number of modes) integrated with the trapezoidal rule, and stations at
``x = L k / n_stations`` for ``k = 0 .. n_stations - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from ..distributions import InputModel
from ..errors import ValidationError

VARIABLES = ("E", "rho", "L", "w", "t")
NOMINAL_INPUTS = (69e9, 2700.0, 0.45, 2e-2, 2e-3)
CASES = {
    "case1": (1 / 200, 1 / 80, 1 / 100, 1 / 60, 1 / 80),
    "case2": (1 / 5, 1 / 5, 1 / 30, 1 / 6, 1 / 8),
}
N_FREQ = 512
BAND = (0.1, 1.2)
SAMPLE_CHUNK = 256


@dataclass(frozen=True)
class BeamModel:
    E: float
    rho: float
    L: float
    w: float
    t: float
    n_modes: int = 3
    damping: float = 0.1
    excitation_fraction: float = 0.5
    n_stations: int = 21
    force_amplitude: float = 1.0

    def __post_init__(self):
        for name in VARIABLES + ("force_amplitude",):
            if not getattr(self, name) > 0:
                raise ValidationError(f"beam parameter {name} must be positive")
        if self.n_modes < 1:
            raise ValidationError("n_modes must be at least 1")
        if not 0 < self.damping < 1:
            raise ValidationError("damping must lie in (0, 1)")
        if not 0 < self.excitation_fraction <= 1:
            raise ValidationError("excitation_fraction must lie in (0, 1]")
        if self.n_stations < 2:
            raise ValidationError("n_stations must be at least 2")

    @property
    def inputs(self) -> np.ndarray:
        return np.array([self.E, self.rho, self.L, self.w, self.t])


@dataclass(frozen=True)
class BeamResponse:
    peak_rms_acceleration: float
    peak_rms_strain: float


@lru_cache(maxsize=None)
def _beta_l(n_modes: int) -> tuple[float, ...]:
    """Roots of ``1 + cos(x) cosh(x) = 0``, written as ``cos x + 1/cosh x``."""
    f = lambda x: np.cos(x) + 1.0 / np.cosh(x)
    roots = []
    for r in range(1, n_modes + 1):
        c = (r - 0.5) * np.pi
        roots.append(brentq(f, c - 0.4, c + 0.4, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return tuple(roots)


def mode_shapes(xi, n_modes: int):
    """Clamped-free mode shapes and their second derivatives at ``x = xi * L``.

    Shapes are scaled so that ``int_0^L phi^2 dx = L``. The second
    derivative is returned w.r.t. ``xi``; divide by ``L**2`` for ``d2/dx2``.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    bl = np.array(_beta_l(n_modes))
    z = np.outer(xi, bl)
    sig = (np.cosh(bl) + np.cos(bl)) / (np.sinh(bl) + np.sin(bl))
    phi = np.cosh(z) - np.cos(z) - sig * (np.sinh(z) - np.sin(z))
    curv = bl**2 * (np.cosh(z) + np.cos(z) - sig * (np.sinh(z) + np.sin(z)))
    return phi, curv


def _section(params):
    E, rho, L, w, t = (params[:, k] for k in range(5))
    area = w * t
    inertia = w * t**3 / 12.0
    return E, rho, L, t, area, inertia


def _omegas(params, n_modes):
    E, rho, L, _, area, inertia = _section(params)
    bl = np.array(_beta_l(n_modes))
    return bl[None, :] ** 2 * np.sqrt(E * inertia / (rho * area * L**4))[:, None]


def natural_frequencies(m: BeamModel) -> np.ndarray:
    """Circular natural frequencies ``(beta_r L)^2 sqrt(EI / (rho A L^4))``."""
    return _omegas(m.inputs[None, :], m.n_modes)[0]


def beam_frf(m: BeamModel, x_response, x_force, omega, quantity: str = "displacement"):
    """Point FRF between positions (in metres) by modal summation.

    ``quantity`` is ``displacement``, ``acceleration`` or ``strain``; strain
    is at the outer fibre, ``(t/2) d2w/dx2``.
    """
    omega = np.asarray(omega, dtype=float)
    phi_r, curv_r = mode_shapes([x_response / m.L], m.n_modes)
    phi_f, _ = mode_shapes([x_force / m.L], m.n_modes)
    wr = natural_frequencies(m)
    mass = m.rho * m.w * m.t * m.L
    den = mass * (wr**2 - omega[..., None] ** 2 + 2j * m.damping * wr * omega[..., None])
    if quantity == "strain":
        shape = 0.5 * m.t * curv_r[0] / m.L**2
    else:
        shape = phi_r[0]
    H = np.sum(shape * phi_f[0] / den, axis=-1)
    if quantity == "acceleration":
        H = -(omega**2) * H
    elif quantity not in ("displacement", "strain"):
        raise ValidationError(f"unknown FRF quantity {quantity!r}")
    return H


def _peak_rms(params, n_modes, damping, excitation_fraction, n_stations, force_amplitude):
    """Peak r.m.s. (acceleration, strain) for each row of ``params``."""
    xi = np.arange(n_stations) / n_stations
    phi_s, curv_s = mode_shapes(xi, n_modes)
    phi_f, _ = mode_shapes([excitation_fraction], n_modes)
    _, rho, L, t, area, _ = _section(params)
    wr = _omegas(params, n_modes)
    omega = wr[:, :1] * BAND[0] * (BAND[1] * wr[:, -1:] / (BAND[0] * wr[:, :1])) ** (
        np.arange(N_FREQ) / (N_FREQ - 1)
    )
    mass = rho * area * L
    den = mass[:, None, None] * (
        wr[:, :, None] ** 2 - omega[:, None, :] ** 2 + 2j * damping * wr[:, :, None] * omega[:, None, :]
    )
    inv = 1.0 / den
    disp = np.einsum("sr,nrk->nsk", phi_s * phi_f[0], inv)
    curv = np.einsum("sr,nrk->nsk", curv_s * phi_f[0], inv)
    acc = omega[:, None, :] ** 2 * np.abs(disp)
    strain = (0.5 * t / L**2)[:, None, None] * np.abs(curv)
    psd = force_amplitude**2
    acc_rms = np.sqrt(psd * trapezoid(acc**2, omega[:, None, :], axis=-1))
    strain_rms = np.sqrt(psd * trapezoid(strain**2, omega[:, None, :], axis=-1))
    return acc_rms.max(axis=1), strain_rms.max(axis=1)


def beam_response(m: BeamModel) -> BeamResponse:
    """Peak r.m.s. responses of one beam, before any ensemble normalization."""
    acc, strain = _peak_rms(
        m.inputs[None, :], m.n_modes, m.damping, m.excitation_fraction, m.n_stations, m.force_amplitude
    )
    return BeamResponse(float(acc[0]), float(strain[0]))


class BeamMap:
    """Output map ``(E, rho, L, w, t) -> (acc, strain)`` for input batches.

    Each output column is divided by its maximum over the batch, i.e. the
    ensemble being analysed.
    """

    def __init__(self, n_modes=3, damping=0.1, excitation_fraction=0.5, n_stations=21):
        BeamModel(*NOMINAL_INPUTS, n_modes=n_modes, damping=damping,
                  excitation_fraction=excitation_fraction, n_stations=n_stations)
        self.n_modes = n_modes
        self.damping = damping
        self.excitation_fraction = excitation_fraction
        self.n_stations = n_stations

    def raw(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != 5:
            raise ValidationError("beam inputs must have 5 columns (E, rho, L, w, t)")
        if np.any(~(X > 0)):
            raise ValidationError("sampled beam inputs must all be positive")
        out = np.empty((X.shape[0], 2))
        for lo in range(0, X.shape[0], SAMPLE_CHUNK):
            acc, strain = _peak_rms(X[lo : lo + SAMPLE_CHUNK], self.n_modes, self.damping,
                                    self.excitation_fraction, self.n_stations, 1.0)
            out[lo : lo + SAMPLE_CHUNK, 0] = acc
            out[lo : lo + SAMPLE_CHUNK, 1] = strain
        return out

    def __call__(self, X) -> np.ndarray:
        Y = self.raw(X)
        return Y / Y.max(axis=0)


def beam_input_model(case: str = "case1") -> InputModel:
    """Normal inputs with the mean values and coefficients of variation of a named case."""
    if case not in CASES:
        raise ValidationError(f"unknown beam case {case!r}; choose from {sorted(CASES)}")
    mu = np.array(NOMINAL_INPUTS)
    return InputModel.normal(VARIABLES, mu, mu * np.array(CASES[case]))
