"""Subprocess and conventional dwell times.

τ_tr  = (1/I_tr)  ∫_a^b   |ψ_tr|²  dx,   I_tr  = T ħk/m
τ_ref = (1/I_ref) ∫_a^x_c |ψ_ref|² dx,   I_ref = R ħk/m
τ_conv = (m/ħk)   ∫_a^b   |Ψ_full|² dx

Quadrature is composite Simpson with region edges (a, segment boundaries,
x_c, b) pinned to panel boundaries.  Transmission integrals run on the
reduced field ψ_tr/a_out and in the log domain, so opaque scans where
τ_tr ~ exp(2κ₀d) stay exact far beyond double-precision overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .channels import reflection_scaled, transmission_scaled
from .errors import EnergyAboveBarrier, NumericallyOpaque
from .potential import (BarrierSpec, DoubleRectangular, PhysicalConstants,
                        Rectangular, Sampled)
from .quadrature import simpson_log_abs2, simpson_nodes
from .stationary import (amplitudes, full_wavefunction, outgoing_interior,
                         solve_basis)

DEFAULT_PANELS = 4096
OPAQUE_FLOOR = 1e-280       # T below this raises NumericallyOpaque
REFLECTION_FLOOR = 1e-24    # R below this is "exactly zero" at double precision
# Beyond this boundary amplification the (F, G) two-term field representation
# starts losing digits to cancellation near the support edges; switch to
# backward propagation of the outgoing-normalized interior solution plus the
# exact mirror symmetry of |ψ_tr| about x_c, and to the cancellation-free
# form of the ψ_ref interior coefficient.
_EXTREME_LOG = 18.0

_LN10 = math.log(10.0)


@dataclass(frozen=True)
class DwellReport:
    """Dwell times at fixed k; partition fields set for double barriers only."""

    k: float
    E: float
    T: float
    R: float
    tau_tr_dwell: float
    log10_tau_tr: float
    tau_ref_dwell: float | None
    tau_conventional: float
    I_tr: float
    I_ref: float
    I_inc: float
    tau1_tr: float | None = None
    tau_gap_tr: float | None = None
    tau2_tr: float | None = None
    tau1_ref: float | None = None
    tau_gap_ref: float | None = None


def _region_edges(spec: BarrierSpec) -> np.ndarray:
    """Sorted quadrature breakpoints: a, segment edges, x_c, b."""
    if isinstance(spec, Sampled):
        right = [spec.x_c, spec.b]
    else:
        right = [spec.x_c]
        for length, _ in spec.half_segments():
            if length > 0:
                right.append(right[-1] + length)
    right = np.asarray(right)
    left = (2.0 * spec.x_c - right[::-1])[:-1]
    return np.unique(np.concatenate((left, right)))


def _log_region_integrals(amps, basis, edges, channel, panels, branch="auto"):
    """log ∫ |field|² dx over each region; 'tr' uses the reduced field."""
    if branch == "auto":
        extreme = basis.boundary_amplification() > _EXTREME_LOG
    else:
        extreme = branch == "stable"
    xc = basis.spec.x_c
    tiny = 1e-12 * max(basis.spec.d, 1.0)
    n = len(edges) - 1
    logs = np.full(n, -np.inf)
    out_tab = outgoing_interior(basis) if (extreme and channel == "tr") else None
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        if out_tab is not None and hi <= xc + tiny:
            continue  # filled from the mirrored right-half region below
        x = simpson_nodes(lo, hi, panels)
        if channel == "tr":
            if out_tab is not None:
                vals, _, lsc = out_tab.eval_scaled(x)
            else:
                vals, lsc = transmission_scaled(amps, basis, x, reduced=True)
        elif channel == "ref":
            if extreme:
                vals, lsc = _reflection_scaled_stable(amps, basis, x)
            else:
                vals, lsc = reflection_scaled(amps, basis, x)
        else:
            vals = full_wavefunction(amps, basis, x)
            lsc = np.zeros_like(x)
        logs[i] = simpson_log_abs2(vals, lsc, lo, hi)
    if out_tab is not None:
        # |ψ_tr(x_c - ξ)| = |ψ_tr(x_c + ξ)| exactly for symmetric barriers,
        # and the region edges are symmetric about x_c by construction.
        for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
            if hi <= xc + tiny:
                logs[i] = logs[n - 1 - i]
    return logs


def _reflection_scaled_stable(amps, basis, x):
    """ψ_ref with the interior coefficient in cancellation-free form.

    Algebraically identical to κ_w^{-1}(P A_in_ref + P* b_out) e^{ika} F(x)
    but written as  -2ik Re(QP*) / (|Q|² P*) e^{ika} F(x), whose factors stay
    O(1)-scaled however opaque the barrier; used only on the extreme branch,
    the default path keeps the formula as printed.
    """
    spec = basis.spec
    k = amps.k
    x = np.atleast_1d(np.asarray(x, float))
    vals = np.zeros(x.shape, complex)
    logs = np.zeros(x.shape, float)
    left = x <= spec.a
    mid = (~left) & (x < spec.x_c)
    if np.any(left):
        inc = amps.A_in_ref * np.exp(1j * k * x[left])
        out = amps.b_out * np.exp(1j * k * (2 * spec.a - x[left]))
        vals[left] = inc + out
    if np.any(mid):
        bv = basis.eval_scaled(x[mid])
        c_hat = (-2j * k * (amps.Q_hat * amps.P_hat.conjugate()).real
                 / (abs(amps.Q_hat) ** 2 * amps.P_hat.conjugate()))
        vals[mid] = c_hat * amps.phase_a * bv.f
        logs[mid] = bv.log_f - amps.log_f_b
    return vals, logs


def dwell_numeric(spec: BarrierSpec, constants: PhysicalConstants, k: float, *,
                  panels: int = DEFAULT_PANELS,
                  opaque_floor: float = OPAQUE_FLOOR,
                  branch: str = "auto") -> DwellReport:
    """Dwell times by quadrature of the subprocess fields.

    branch: "auto" switches between the literal two-term field evaluation and
    its opaque-stable rearrangement at the accuracy crossover; "direct" or
    "stable" pin one route (numerical-validation hook, results agree in the
    overlap).
    """
    basis = solve_basis(spec, constants, k)
    amps = amplitudes(basis)
    if amps.T < opaque_floor:
        raise NumericallyOpaque(
            f"T = {amps.T:.3e} below floor {opaque_floor:.1e}")
    return _report_from_fields(spec, basis, amps, panels, branch)


def _report_from_fields(spec, basis, amps, panels, branch="auto") -> DwellReport:
    constants = basis.constants
    k = basis.k
    I_inc = constants.hbar * k / constants.m
    edges = _region_edges(spec)
    xc = spec.x_c

    log_tr_regions = _log_region_integrals(amps, basis, edges, "tr", panels,
                                            branch)
    log_tr = float(logsumexp(log_tr_regions))
    # reduced field: the T in I_tr cancels |a_out|² exactly
    log_tau_tr = log_tr - math.log(I_inc)
    tau_tr = math.exp(log_tau_tr) if log_tau_tr < 700 else math.inf

    left = edges <= xc + 1e-15 * max(spec.d, 1.0)
    edges_ref = edges[left]
    log_ref_regions = _log_region_integrals(amps, basis, edges_ref, "ref",
                                             panels, branch)
    if amps.R > REFLECTION_FLOOR:
        tau_ref = math.exp(float(logsumexp(log_ref_regions))
                           - math.log(amps.R) - math.log(I_inc))
    else:
        tau_ref = None  # reflection absent: τ_ref undefined

    log_conv_regions = _log_region_integrals(amps, basis, edges, "full",
                                              panels, branch)
    tau_conv = math.exp(float(logsumexp(log_conv_regions)) - math.log(I_inc))

    report = DwellReport(
        k=k, E=basis.E, T=amps.T, R=amps.R,
        tau_tr_dwell=tau_tr, log10_tau_tr=log_tau_tr / _LN10,
        tau_ref_dwell=tau_ref, tau_conventional=tau_conv,
        I_tr=amps.T * I_inc, I_ref=amps.R * I_inc, I_inc=I_inc)

    if isinstance(spec, DoubleRectangular) and spec.gap > 0:
        report = _attach_partition(report, spec, edges, amps,
                                   log_tr_regions, log_ref_regions, I_inc)
    return report


def _attach_partition(report, spec, edges, amps,
                      log_tr_regions, log_ref_regions, I_inc):
    """Split the dwell integrals over first barrier / gap / second barrier."""
    from dataclasses import replace

    def gather(logs, region_edges, lo, hi):
        sel = [i for i, (el, eh) in
               enumerate(zip(region_edges[:-1], region_edges[1:]))
               if el >= lo - 1e-12 and eh <= hi + 1e-12]
        return float(logsumexp(logs[sel]))

    a, b, xc = spec.a, spec.b, spec.x_c
    e1 = a + spec.d_bar          # end of first barrier
    e2 = b - spec.d_bar          # start of second barrier
    log_I = math.log(I_inc)
    tau1_tr = math.exp(gather(log_tr_regions, edges, a, e1) - log_I)
    tau_gap_tr = math.exp(gather(log_tr_regions, edges, e1, e2) - log_I)
    tau2_tr = math.exp(gather(log_tr_regions, edges, e2, b) - log_I)
    if report.tau_ref_dwell is not None:
        edges_ref = edges[edges <= xc + 1e-15 * max(spec.d, 1.0)]
        log_R = math.log(amps.R)
        tau1_ref = math.exp(gather(log_ref_regions, edges_ref, a, e1)
                            - log_R - log_I)
        tau_gap_ref = math.exp(gather(log_ref_regions, edges_ref, e1, xc)
                               - log_R - log_I)
    else:
        tau1_ref = tau_gap_ref = None
    return replace(report, tau1_tr=tau1_tr, tau_gap_tr=tau_gap_tr,
                   tau2_tr=tau2_tr, tau1_ref=tau1_ref, tau_gap_ref=tau_gap_ref)


def double_barrier_partition(spec: DoubleRectangular,
                             constants: PhysicalConstants, k: float, *,
                             panels: int = DEFAULT_PANELS,
                             opaque_floor: float = OPAQUE_FLOOR,
                             branch: str = "auto") -> DwellReport:
    """Dwell report with the additive barrier/gap/barrier split."""
    if not isinstance(spec, DoubleRectangular):
        raise TypeError("double_barrier_partition needs a DoubleRectangular spec")
    return dwell_numeric(spec, constants, k, panels=panels,
                         opaque_floor=opaque_floor, branch=branch)


# -- closed forms (rectangular barrier, E < V0) -------------------------------

@dataclass(frozen=True)
class RectangularDwellClosedForm:
    tau_tr: float
    tau_ref: float
    tau_conventional: float


def dwell_rect_closed(V0: float, d: float, constants: PhysicalConstants,
                      k: float) -> RectangularDwellClosedForm:
    """Sub-barrier closed forms for the rectangular barrier.

    τ_tr   = m/(2ħkκ³) · [(κ²-k²)κd + κ₀² sinh(κd)]
    τ_ref  = (mk/ħκ) · [sinh(κd) - κd] / [κ² + κ₀² sinh²(κd/2)]
    τ_conv = (mk/ħκ) · [2κd(κ²-k²) + κ₀² sinh(2κd)] / [4k²κ² + κ₀⁴ sinh²(κd)]
    """
    hbar, m = constants.hbar, constants.m
    E = constants.energy(k)
    if E >= V0:
        raise EnergyAboveBarrier(
            f"closed forms hold for E < V0 only (E={E}, V0={V0}); "
            "use dwell_numeric above the barrier")
    kappa = math.sqrt(2.0 * m * (V0 - E)) / hbar
    kappa0 = math.sqrt(2.0 * m * V0) / hbar
    kd = kappa * d
    tau_tr = (m / (2.0 * hbar * k * kappa ** 3)
              * ((kappa ** 2 - k ** 2) * kd + kappa0 ** 2 * math.sinh(kd)))
    tau_ref = (m * k / (hbar * kappa)
               * (math.sinh(kd) - kd)
               / (kappa ** 2 + kappa0 ** 2 * math.sinh(0.5 * kd) ** 2))
    tau_conv = (m * k / (hbar * kappa)
                * (2.0 * kd * (kappa ** 2 - k ** 2)
                   + kappa0 ** 2 * math.sinh(2.0 * kd))
                / (4.0 * k ** 2 * kappa ** 2
                   + kappa0 ** 4 * math.sinh(kd) ** 2))
    return RectangularDwellClosedForm(tau_tr, tau_ref, tau_conv)


def double_barrier_opaque_asymptotics(kappa0: float, d_bar: float, gap: float,
                                      constants: PhysicalConstants,
                                      k: float) -> dict[str, float]:
    """κ₀ → ∞ limits at fixed widths: barrier/gap transmission dwell times
    grow like exp(2κ₀ d_bar) while the reflection (and conventional) dwell
    time collapses to 2mk/ħκ₀³."""
    hbar, m = constants.hbar, constants.m
    grow = math.exp(2.0 * kappa0 * d_bar)
    tau1 = m / (4.0 * hbar * k * kappa0) * grow
    tau_gap = (m * kappa0 ** 2 / (8.0 * hbar * k ** 4)
               * (k * gap - math.sin(k * gap)) * grow)
    tau_ref = 2.0 * m * k / (hbar * kappa0 ** 3)
    return {"tau1_tr": tau1, "tau2_tr": tau1, "tau_gap_tr": tau_gap,
            "tau_tr": 2.0 * tau1 + tau_gap, "tau_ref": tau_ref,
            "tau_conventional": tau_ref}


# -- scans ---------------------------------------------------------------

def hartman_scan(family: str, constants: PhysicalConstants, E: float,
                 sweep, *, V0: float | None = None, d_bar: float | None = None,
                 gap: float | None = None, a: float = 0.0,
                 panels: int = DEFAULT_PANELS,
                 opaque_floor: float = OPAQUE_FLOOR) -> list[dict]:
    """Dwell-time table over a parameter sweep.

    family "single_d": rectangular barrier, sweep over width d (needs V0).
    family "double_gap": double barrier, sweep over gap (needs V0, d_bar).
    family "double_kappa0": double barrier, sweep over κ₀ (needs d_bar, gap).
    """
    k = constants.wavenumber(E)
    rows = []
    for value in np.asarray(sweep, float):
        if family == "single_d":
            spec = Rectangular(V0=V0, a=a, b=a + value)
            param = "d"
        elif family == "double_gap":
            spec = DoubleRectangular(V0=V0, d_bar=d_bar, gap=value, a=a)
            param = "gap"
        elif family == "double_kappa0":
            height = (constants.hbar * value) ** 2 / (2.0 * constants.m)
            spec = DoubleRectangular(V0=height, d_bar=d_bar, gap=gap, a=a)
            param = "kappa0"
        else:
            raise ValueError(f"unknown scan family {family!r}")
        rep = dwell_numeric(spec, constants, k, panels=panels,
                            opaque_floor=opaque_floor)
        rows.append({
            "param_name": param, "param_value": float(value),
            "E": rep.E, "k": rep.k,
            "tau_tr": rep.tau_tr_dwell, "tau_ref": rep.tau_ref_dwell,
            "tau_conventional": rep.tau_conventional,
            "tau1_tr": rep.tau1_tr, "tau_gap_tr": rep.tau_gap_tr,
            "tau2_tr": rep.tau2_tr, "log10_tau_tr": rep.log10_tau_tr,
        })
    return rows
