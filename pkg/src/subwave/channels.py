"""Piecewise transmission and reflection wavefunctions and their currents.

Each channel wave is built region-wise from the scattering amplitudes: a
single incoming and a single outgoing wave joined at the barrier midpoint
x_c, continuous there in value and probability current.  The reflection
channel vanishes identically for x >= x_c; the transmission channel equals
the full scattering state there.

Derivatives come from the analytic region formulas, never finite
differences: the construction has a deliberate derivative jump at x_c, so
evaluation exactly at x_c is two-sided (choose `side`).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .potential import PhysicalConstants
from .stationary import RealBasisPair, ScatteringAmplitudes

TRANSMISSION = "tr"
REFLECTION = "ref"
FULL = "full"


def _region_masks(x, spec, side):
    """left / interior-left / interior-right / right masks; x_c two-sided."""
    left = x <= spec.a
    right = x > spec.b
    if side == "-":
        mid_l = (~left) & (x <= spec.x_c)
        mid_r = (~right) & (x > spec.x_c)
    else:
        mid_l = (~left) & (x < spec.x_c)
        mid_r = (~right) & (x >= spec.x_c)
    return left, mid_l, mid_r, right


def transmission_scaled(amps: ScatteringAmplitudes, basis: RealBasisPair, x, *,
                        reduced: bool = False, derivative: bool = False,
                        side: str = "+"):
    """Scaled transmission field:  returns (values, logs).

    reduced=True evaluates χ = ψ_tr / (a_out e^{ika}), which stays O(1)-scaled
    for arbitrarily opaque barriers (the transmission channel is proportional
    to a_out everywhere); reduced=False gives ψ_tr itself.
    """
    spec = basis.spec
    k = amps.k
    x = np.atleast_1d(np.asarray(x, float))
    vals = np.empty(x.shape, complex)
    logs = np.zeros(x.shape, float)
    left, mid_l, mid_r, right = _region_masks(x, spec, side)

    qc = amps.q_ratio.conjugate()
    if np.any(left):
        pw = np.exp(1j * k * (x[left] - spec.a))
        vals[left] = (1j * k * qc * pw) if derivative else (qc * pw)
    if np.any(right):
        pw = np.exp(1j * k * (x[right] - spec.b))
        vals[right] = (1j * k * pw) if derivative else pw
    kw = amps.kappa_w
    for mask, cF in ((mid_l, amps.P_hat * qc / kw),
                     (mid_r, -amps.P_hat.conjugate() / kw)):
        if not np.any(mask):
            continue
        v = basis.eval_scaled(x[mask])
        cG = amps.Q_hat.conjugate() / kw
        lF = amps.log_g_b + v.log_f
        lG = amps.log_f_b + v.log_g
        L = np.maximum(lF, lG)
        bf, bg = (v.df, v.dg) if derivative else (v.f, v.g)
        vals[mask] = cF * bf * np.exp(lF - L) + cG * bg * np.exp(lG - L)
        logs[mask] = L
    if not reduced:
        vals = vals * (amps.a_out_hat * amps.phase_a)
        logs = logs - amps.log_total
    return vals, logs


def reflection_scaled(amps: ScatteringAmplitudes, basis: RealBasisPair, x, *,
                      derivative: bool = False, side: str = "+"):
    """Scaled reflection field ψ_ref: returns (values, logs); 0 for x >= x_c.

    The interior coefficient is evaluated exactly as the defining formula
    κ_w^{-1}(P A_in_ref + P* b_out) e^{ika}, with only the common log scale of
    P factored out.
    """
    spec = basis.spec
    k = amps.k
    x = np.atleast_1d(np.asarray(x, float))
    vals = np.zeros(x.shape, complex)
    logs = np.zeros(x.shape, float)
    left, mid_l, _, _ = _region_masks(x, spec, side)

    if np.any(left):
        inc = amps.A_in_ref * np.exp(1j * k * x[left])
        out = amps.b_out * np.exp(1j * k * (2 * spec.a - x[left]))
        vals[left] = 1j * k * (inc - out) if derivative else inc + out
    if np.any(mid_l):
        v = basis.eval_scaled(x[mid_l])
        coef = ((amps.P_hat * amps.A_in_ref
                 + amps.P_hat.conjugate() * amps.b_out)
                * amps.phase_a / amps.kappa_w)
        vals[mid_l] = coef * (v.df if derivative else v.f)
        logs[mid_l] = amps.log_g_b + v.log_f
    return vals, logs


def _collapse(vals, logs):
    with np.errstate(over="ignore"):
        return vals * np.exp(logs)


def psi_tr(amps: ScatteringAmplitudes, basis: RealBasisPair, x):
    """Transmission channel wave ψ_tr(x; k)."""
    return _collapse(*transmission_scaled(amps, basis, x))


def psi_ref(amps: ScatteringAmplitudes, basis: RealBasisPair, x):
    """Reflection channel wave ψ_ref(x; k); identically 0 for x >= x_c."""
    return _collapse(*reflection_scaled(amps, basis, x))


def dpsi_tr(amps, basis, x, side: str = "+"):
    return _collapse(*transmission_scaled(amps, basis, x,
                                          derivative=True, side=side))


def dpsi_ref(amps, basis, x, side: str = "+"):
    return _collapse(*reflection_scaled(amps, basis, x,
                                        derivative=True, side=side))


def probability_current(psi, dpsi, constants: PhysicalConstants):
    """j = (hbar/m) Im(ψ* dψ/dx)."""
    return (constants.hbar / constants.m) * np.imag(np.conj(psi) * dpsi)


@dataclass(frozen=True)
class SubprocessWave:
    """One channel of the decomposition with value/derivative/current access."""

    channel: str  # "tr" | "ref" | "full"
    amps: ScatteringAmplitudes
    basis: RealBasisPair

    def value(self, x):
        from .stationary import full_wavefunction
        if self.channel == TRANSMISSION:
            return psi_tr(self.amps, self.basis, x)
        if self.channel == REFLECTION:
            return psi_ref(self.amps, self.basis, x)
        return full_wavefunction(self.amps, self.basis, x)

    def derivative(self, x, side: str = "+"):
        if self.channel == TRANSMISSION:
            return dpsi_tr(self.amps, self.basis, x, side=side)
        if self.channel == REFLECTION:
            return dpsi_ref(self.amps, self.basis, x, side=side)
        return (dpsi_tr(self.amps, self.basis, x, side=side)
                + dpsi_ref(self.amps, self.basis, x, side=side))

    def current(self, x, side: str = "+"):
        """Probability current from the analytic region derivatives."""
        return probability_current(self.value(x), self.derivative(x, side=side),
                                   self.basis.constants)


def current(wave: SubprocessWave, x, side: str = "+"):
    """Module-level alias for `wave.current(x, side)`."""
    return wave.current(x, side=side)


def wave_profile(amps, basis, x_grid) -> dict[str, np.ndarray]:
    """Channel profile columns on an x grid (CSV-ready)."""
    from .stationary import full_wavefunction
    x = np.asarray(x_grid, float)
    tr = psi_tr(amps, basis, x)
    ref = psi_ref(amps, basis, x)
    full = full_wavefunction(amps, basis, x)
    constants = basis.constants
    j_tr = probability_current(tr, dpsi_tr(amps, basis, x), constants)
    j_ref = probability_current(ref, dpsi_ref(amps, basis, x), constants)
    return {
        "x": x,
        "re_psi_tr": tr.real, "im_psi_tr": tr.imag,
        "re_psi_ref": ref.real, "im_psi_ref": ref.imag,
        "abs2_psi_full": np.abs(full) ** 2,
        "j_tr": j_tr, "j_ref": j_ref,
    }
