"""Stationary scattering state of a symmetric barrier.

The real basis pair (F odd, G even about the midpoint x_c) is integrated
outward from x_c with the normalization F(x_c)=0, F'(x_c)=1, G(x_c)=1,
G'(x_c)=0, so the Wronskian F'G - G'F is exactly 1.  Piecewise-constant
barriers propagate analytically segment by segment; sampled barriers use a
fixed-step RK4.  Solution values are stored as (mantissa, log-scale) pairs so
opaque barriers never overflow: outgoing amplitudes depend only on phase
ratios of the boundary functionals, which survive the log-scaling.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import (DegenerateBoundary, IntegrationUnstable,
                     NonpositiveWavenumber)
from .potential import BarrierSpec, PhysicalConstants, Sampled

RESCALE_LOG = 30.0          # pull out a scale factor once a solution passes e^30
DEFAULT_STEPS_PER_WIDTH = 4096
_WRONSKIAN_RTOL = 1e-8


def _cs(zeta):
    """Even/odd one-step solutions of u'' = w u as entire functions of ζ = w δ².

    u(δ)  = u0 C(ζ) + u0' δ S(ζ)
    u'(δ) = u0 w δ S(ζ) + u0' C(ζ)

    C = cosh√ζ and S = sinh√ζ/√ζ for ζ > 0, the trig pair for ζ < 0 and
    (1, 1) at ζ = 0, which is the linear branch u = u0 + u0' δ.
    """
    scalar = np.ndim(zeta) == 0
    zeta = np.atleast_1d(np.asarray(zeta, float))
    C = np.ones_like(zeta)
    S = np.ones_like(zeta)
    pos = zeta > 0
    neg = zeta < 0
    rt = np.sqrt(zeta[pos])
    C[pos] = np.cosh(rt)
    S[pos] = np.sinh(rt) / rt
    rt = np.sqrt(-zeta[neg])
    C[neg] = np.cos(rt)
    S[neg] = np.sin(rt) / rt
    if scalar:
        return float(C[0]), float(S[0])
    return C, S


@dataclass(frozen=True)
class _HalfTable:
    """Scaled samples of (F, G) at propagation nodes on [x_c, b]."""

    xs: np.ndarray           # node positions, xs[0] = x_c, xs[-1] = b
    f: np.ndarray            # scaled F at nodes
    df: np.ndarray
    lf: np.ndarray           # log scale of F at nodes
    g: np.ndarray
    dg: np.ndarray
    lg: np.ndarray
    w: np.ndarray | None     # per-interval  2m(V-E)/hbar²  (analytic kinds)
    analytic: bool


class BasisValues(NamedTuple):
    """Scaled basis samples:  F = f·exp(log_f),  G = g·exp(log_g)."""

    f: np.ndarray
    df: np.ndarray
    log_f: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    log_g: np.ndarray


def _rescale(u, du, log):
    mag = max(abs(u), abs(du))
    if mag > math.exp(RESCALE_LOG):
        u /= mag
        du /= mag
        log += math.log(mag)
    return u, du, log


def _propagate_segments(segments, E, constants):
    """Analytic per-segment propagation of (F, G) from x_c to b."""
    coef = 2.0 * constants.m / constants.hbar ** 2
    f, df, lf = 0.0, 1.0, 0.0
    g, dg, lg = 1.0, 0.0, 0.0
    xs = [0.0]
    fs, dfs, lfs = [f], [df], [lf]
    gs, dgs, lgs = [g], [dg], [lg]
    ws = []
    x0 = 0.0
    for length, V in segments:
        if length <= 0:
            continue
        w = coef * (V - E)
        nsub = max(1, math.ceil(math.sqrt(max(w, 0.0)) * length / RESCALE_LOG))
        delta = length / nsub
        C, S = _cs(w * delta * delta)
        wdS = w * delta * S
        dS = delta * S
        for i in range(nsub):
            f, df = f * C + df * dS, f * wdS + df * C
            g, dg = g * C + dg * dS, g * wdS + dg * C
            f, df, lf = _rescale(f, df, lf)
            g, dg, lg = _rescale(g, dg, lg)
            xs.append(x0 + length if i == nsub - 1 else x0 + (i + 1) * delta)
            fs.append(f); dfs.append(df); lfs.append(lf)
            gs.append(g); dgs.append(dg); lgs.append(lg)
            ws.append(w)
        x0 += length
    return _HalfTable(np.array(xs), np.array(fs), np.array(dfs), np.array(lfs),
                      np.array(gs), np.array(dgs), np.array(lgs),
                      np.array(ws), analytic=True)


def _half_breakpoints(spec: BarrierSpec) -> list[float]:
    """Positions (relative to x_c) where V may be non-smooth on [x_c, b]."""
    if isinstance(spec, Sampled):
        rel = spec.x - spec.x_c
        return [0.0] + [float(r) for r in rel if r > 1e-15 * spec.d]
    edges = [0.0]
    for length, _ in spec.half_segments():
        if length > 0:
            edges.append(edges[-1] + length)
    return edges


def _propagate_grid(spec, E, constants, steps_per_width):
    """Fixed-step RK4 of (F, G) from x_c to b, steps aligned to kinks of V."""
    coef = 2.0 * constants.m / constants.hbar ** 2
    xc = spec.x_c
    breaks = _half_breakpoints(spec)
    total = breaks[-1]
    n_half = max(2, steps_per_width // 2)

    f, df, lf = 0.0, 1.0, 0.0
    g, dg, lg = 1.0, 0.0, 0.0
    xs = [xc]
    fs, dfs, lfs = [f], [df], [lf]
    gs, dgs, lgs = [g], [dg], [lg]

    for lo, hi in zip(breaks[:-1], breaks[1:]):
        length = hi - lo
        n = max(1, math.ceil(n_half * length / total))
        h = length / n
        nodes = xc + lo + h * np.arange(n + 1)
        nodes[-1] = xc + hi
        w_nodes = coef * (np.asarray(spec.evaluate(nodes), float) - E)
        w_half = coef * (np.asarray(spec.evaluate(nodes[:-1] + 0.5 * h), float) - E)
        for i in range(n):
            w0, w1, w2 = w_nodes[i], w_half[i], w_nodes[i + 1]
            # one RK4 step for both solutions of u'' = w(x) u
            k1f, k1df = df, w0 * f
            k1g, k1dg = dg, w0 * g
            k2f, k2df = df + 0.5 * h * k1df, w1 * (f + 0.5 * h * k1f)
            k2g, k2dg = dg + 0.5 * h * k1dg, w1 * (g + 0.5 * h * k1g)
            k3f, k3df = df + 0.5 * h * k2df, w1 * (f + 0.5 * h * k2f)
            k3g, k3dg = dg + 0.5 * h * k2dg, w1 * (g + 0.5 * h * k2g)
            k4f, k4df = df + h * k3df, w2 * (f + h * k3f)
            k4g, k4dg = dg + h * k3dg, w2 * (g + h * k3g)
            f += h * (k1f + 2 * k2f + 2 * k3f + k4f) / 6.0
            df += h * (k1df + 2 * k2df + 2 * k3df + k4df) / 6.0
            g += h * (k1g + 2 * k2g + 2 * k3g + k4g) / 6.0
            dg += h * (k1dg + 2 * k2dg + 2 * k3dg + k4dg) / 6.0
            f, df, lf = _rescale(f, df, lf)
            g, dg, lg = _rescale(g, dg, lg)
            xs.append(float(nodes[i + 1]))
            fs.append(f); dfs.append(df); lfs.append(lf)
            gs.append(g); dgs.append(dg); lgs.append(lg)

    return _HalfTable(np.array(xs), np.array(fs), np.array(dfs), np.array(lfs),
                      np.array(gs), np.array(dgs), np.array(lgs),
                      None, analytic=False)


@dataclass(frozen=True)
class RealBasisPair:
    """Odd solution F and even solution G on [a, b] with their Wronskian."""

    spec: BarrierSpec
    constants: PhysicalConstants
    k: float
    E: float
    wronskian_kappa: float
    _table: _HalfTable

    # -- evaluation -------------------------------------------------------
    def eval_scaled(self, x) -> BasisValues:
        """Scaled (F, F', G, G') at positions x within [a, b]."""
        t = self._table
        spec = self.spec
        xc = spec.x_c
        x = np.atleast_1d(np.asarray(x, float))
        xi = x - xc
        sign = np.where(xi < 0, -1.0, 1.0)
        xx = xc + np.abs(xi)
        if np.any(xx > spec.b + 1e-9 * max(spec.d, 1.0)):
            raise ValueError("basis evaluation outside the barrier support")
        xx = np.minimum(xx, spec.b)
        j = np.clip(np.searchsorted(t.xs, xx, side="right") - 1,
                    0, len(t.xs) - 2)
        delta = xx - t.xs[j]
        if t.analytic:
            w = t.w[j]
            C, S = _cs(w * delta * delta)
            dS = delta * S
            fv = t.f[j] * C + t.df[j] * dS
            dfv = t.f[j] * w * dS + t.df[j] * C
            lfv = t.lf[j]
            gv = t.g[j] * C + t.dg[j] * dS
            dgv = t.g[j] * w * dS + t.dg[j] * C
            lgv = t.lg[j]
        else:
            fv, dfv, lfv = self._hermite(t.f, t.df, t.lf, j, delta)
            gv, dgv, lgv = self._hermite(t.g, t.dg, t.lg, j, delta)
        return BasisValues(sign * fv, dfv, lfv, gv, sign * dgv, lgv)

    def _hermite(self, u, du, lu, j, delta):
        t = self._table
        h = t.xs[j + 1] - t.xs[j]
        # bring the right node into the left node's scale (gap <= RESCALE_LOG)
        fac = np.exp(lu[j + 1] - lu[j])
        u0, du0 = u[j], du[j]
        u1, du1 = u[j + 1] * fac, du[j + 1] * fac
        s = delta / h
        s2, s3 = s * s, s * s * s
        val = (u0 * (2 * s3 - 3 * s2 + 1) + du0 * h * (s3 - 2 * s2 + s)
               + u1 * (-2 * s3 + 3 * s2) + du1 * h * (s3 - s2))
        der = (u0 * (6 * s2 - 6 * s) / h + du0 * (3 * s2 - 4 * s + 1)
               + u1 * (6 * s - 6 * s2) / h + du1 * (3 * s2 - 2 * s))
        return val, der, lu[j]

    def boundary_scaled(self) -> BasisValues:
        """Scaled basis data at x = b."""
        t = self._table
        one = np.array(1.0)
        return BasisValues(t.f[-1] * one, t.df[-1] * one, t.lf[-1] * one,
                           t.g[-1] * one, t.dg[-1] * one, t.lg[-1] * one)

    # plain (unscaled) accessors; may overflow for very opaque barriers
    def F(self, x):
        v = self.eval_scaled(x)
        return v.f * np.exp(v.log_f)

    def dF(self, x):
        v = self.eval_scaled(x)
        return v.df * np.exp(v.log_f)

    def G(self, x):
        v = self.eval_scaled(x)
        return v.g * np.exp(v.log_g)

    def dG(self, x):
        v = self.eval_scaled(x)
        return v.dg * np.exp(v.log_g)

    def wronskian_at(self, x):
        """F'G - G'F evaluated pointwise (diagnostic; constant in exact math)."""
        v = self.eval_scaled(x)
        return (v.df * v.g - v.dg * v.f) * np.exp(v.log_f + v.log_g)

    @property
    def nodes(self) -> np.ndarray:
        """Propagation nodes on [x_c, b]."""
        return self._table.xs

    def boundary_amplification(self) -> float:
        """log of the F·G magnitude product at x = b.

        Cancellation in two-term combinations of the basis amplifies roundoff
        by exp of this number; callers switch to stable rearrangements once it
        approaches -log(eps).
        """
        t = self._table
        return (math.log(max(abs(t.f[-1]), abs(t.df[-1]), 1.0))
                + math.log(max(abs(t.g[-1]), abs(t.dg[-1]), 1.0))
                + float(t.lf[-1] + t.lg[-1]))

    def rescaled(self, lam: float, mu: float) -> "RealBasisPair":
        """Basis pair (λF, μG); downstream amplitudes must not change."""
        if lam == 0 or mu == 0:
            raise ValueError("rescaling factors must be nonzero")
        t = self._table
        table = replace(t, f=t.f * lam, df=t.df * lam, g=t.g * mu, dg=t.dg * mu)
        return replace(self, wronskian_kappa=self.wronskian_kappa * lam * mu,
                       _table=table)


def solve_basis(spec: BarrierSpec, constants: PhysicalConstants, k: float, *,
                method: str = "auto",
                steps_per_width: int = DEFAULT_STEPS_PER_WIDTH) -> RealBasisPair:
    """Integrate the odd/even basis pair for wavenumber k > 0.

    method: "auto" picks analytic segment propagation for piecewise-constant
    kinds and RK4 for sampled ones; "rk4" forces the fixed-step integrator
    (used to cross-check the analytic route); "analytic" requires segments.
    """
    if not k > 0:
        raise NonpositiveWavenumber(f"wavenumber must be positive, got {k}")
    spec.validate()
    E = constants.energy(k)
    use_analytic = not isinstance(spec, Sampled) and method in ("auto", "analytic")
    if method == "analytic" and isinstance(spec, Sampled):
        raise ValueError("sampled barriers have no analytic segments")
    if use_analytic:
        table = _propagate_segments(spec.half_segments(), E, constants)
        xs = table.xs + spec.x_c
        table = replace(table, xs=xs)
    else:
        table = _propagate_grid(spec, E, constants, steps_per_width)
    basis = RealBasisPair(spec, constants, k, E, 1.0, table)

    bv = basis.boundary_scaled()
    if not np.all(np.isfinite([bv.f, bv.df, bv.g, bv.dg])):
        raise IntegrationUnstable("non-finite basis values at the barrier edge")
    # Wronskian conservation is only measurable where the difference F'G - G'F
    # is not dominated by cancellation noise: the two products amplify roundoff
    # by their magnitude, so check only when that amplification stays below
    # the drift tolerance.
    if basis.boundary_amplification() < 16.0:
        wr = float((bv.df * bv.g - bv.dg * bv.f) * np.exp(bv.log_f + bv.log_g))
        if abs(wr - 1.0) > _WRONSKIAN_RTOL:
            raise IntegrationUnstable(
                f"Wronskian drifted to {wr!r} (should stay at 1)")
    return basis


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Amplitude set of the full scattering state at fixed k.

    a_out/b_out are reconstructed from phase-stable combinations of the
    boundary functionals Q, P, algebraically identical to
    a_out = (Q/Q* - P/P*)/2,  b_out = -(Q/Q* + P/P*)/2
    but immune to the exponential growth of F and G inside opaque barriers
    (Q and P as plain complex numbers may overflow there; the scaled fields
    below never do).
    """

    k: float
    E: float
    Q: complex
    P: complex
    a_out: complex
    b_out: complex
    a_full: complex
    b_full: complex
    A_in_tr: complex
    A_in_ref: complex
    T: float
    R: float
    # scaled internals for opaque-safe downstream evaluation
    Q_hat: complex           # Q = Q_hat * exp(log_f_b)
    P_hat: complex           # P = P_hat * exp(log_g_b)
    log_f_b: float
    log_g_b: float
    a_out_hat: complex       # a_out = a_out_hat * exp(-log_f_b - log_g_b)
    q_ratio: complex         # Q/Q*, unit modulus
    p_ratio: complex         # P/P*, unit modulus
    phase_a: complex         # exp(i k a)
    kappa_w: float

    @property
    def log_total(self) -> float:
        return self.log_f_b + self.log_g_b


def amplitudes(basis: RealBasisPair) -> ScatteringAmplitudes:
    """Outgoing/interior/incoming-splitting amplitudes from the basis pair."""
    spec = basis.spec
    k = basis.k
    bv = basis.boundary_scaled()
    f, df, lf = complex(bv.f), complex(bv.df), float(bv.log_f)
    g, dg, lg = complex(bv.g), complex(bv.dg), float(bv.log_g)
    Qh = df + 1j * k * f
    Ph = dg + 1j * k * g
    if Qh == 0 or Ph == 0:
        raise DegenerateBoundary("boundary functional vanished; "
                                 "basis numerically degenerate")
    denom = Qh.conjugate() * Ph.conjugate()
    kw = basis.wronskian_kappa
    # Im(Q P*) = -k (F'G - G'F) exactly, hence:
    a_out_hat = -1j * k * kw / denom
    b_out = -complex((Qh * Ph.conjugate()).real) / denom
    log_total = lf + lg
    a_out = a_out_hat * math.exp(-log_total) if log_total < 700 else 0.0 * 1j
    T = abs(a_out_hat) ** 2 * math.exp(-2.0 * log_total)
    R = abs(b_out) ** 2
    A_in_ref = b_out.conjugate() * (b_out + a_out)
    A_in_tr = a_out * (a_out.conjugate() - b_out.conjugate())
    phase_a = cmath.exp(1j * k * spec.a)
    with np.errstate(over="ignore"):
        Q = Qh * math.exp(lf) if lf < 700 else Qh * math.inf
        P = Ph * math.exp(lg) if lg < 700 else Ph * math.inf
        a_full = -Ph.conjugate() * a_out_hat * phase_a * math.exp(-lf) / kw
        b_full = Qh.conjugate() * a_out_hat * phase_a * math.exp(-lg) / kw
    return ScatteringAmplitudes(
        k=k, E=basis.E, Q=Q, P=P, a_out=a_out, b_out=b_out,
        a_full=a_full, b_full=b_full, A_in_tr=A_in_tr, A_in_ref=A_in_ref,
        T=T, R=R, Q_hat=Qh, P_hat=Ph, log_f_b=lf, log_g_b=lg,
        a_out_hat=a_out_hat, q_ratio=Qh / Qh.conjugate(),
        p_ratio=Ph / Ph.conjugate(), phase_a=phase_a, kappa_w=kw)


def full_wavefunction(amps: ScatteringAmplitudes, basis: RealBasisPair, x):
    """Ψ_full(x; k): incident + reflected, interior, transmitted regions."""
    spec = basis.spec
    k = amps.k
    x = np.atleast_1d(np.asarray(x, float))
    out = np.empty(x.shape, complex)

    left = x <= spec.a
    right = x >= spec.b
    mid = ~(left | right)
    out[left] = (np.exp(1j * k * x[left])
                 + amps.b_out * np.exp(1j * k * (2 * spec.a - x[left])))
    out[right] = amps.a_out * np.exp(1j * k * (x[right] - spec.d))
    if np.any(mid):
        v = basis.eval_scaled(x[mid])
        kw = amps.kappa_w
        # exponents relative to log_total are <= 0: opaque-safe
        e_f = np.exp(amps.log_g_b + v.log_f - amps.log_total)
        e_g = np.exp(amps.log_f_b + v.log_g - amps.log_total)
        out[mid] = amps.phase_a * amps.a_out_hat / kw * (
            -amps.P_hat.conjugate() * v.f * e_f
            + amps.Q_hat.conjugate() * v.g * e_g)
    return out


def scattering_sweep(spec: BarrierSpec, constants: PhysicalConstants,
                     energies) -> list[ScatteringAmplitudes]:
    """Amplitudes over an energy sweep (rows are independent computations)."""
    return [amplitudes(solve_basis(spec, constants, constants.wavenumber(E)))
            for E in np.asarray(energies, float)]


# -- outgoing-normalized interior solution ------------------------------------
#
# χ(x) = Ψ_full(x)/(a_out e^{ika}) on [x_c, b] satisfies the same Schrödinger
# equation with the exactly known outgoing boundary data χ(b) = 1, χ'(b) = ik.
# Integrating it backward from b runs in the growing direction of the
# solution, so it stays accurate for arbitrarily opaque barriers where the
# (F, G) two-term representation loses all digits to cancellation near the
# edges.  |ψ_tr| is mirror symmetric about x_c, so right-half data suffices
# for every dwell integral.

@dataclass(frozen=True)
class OutgoingInterior:
    """Scaled samples of χ on [x_c, b]:  χ = u·exp(log_u)."""

    xs: np.ndarray
    u: np.ndarray            # complex mantissas at nodes
    du: np.ndarray
    lu: np.ndarray
    w: np.ndarray | None
    analytic: bool

    def eval_scaled(self, x):
        x = np.atleast_1d(np.asarray(x, float))
        j = np.clip(np.searchsorted(self.xs, x, side="right") - 1,
                    0, len(self.xs) - 2)
        if self.analytic:
            # anchor at the right node: χ grows leftward, so stepping with
            # delta <= 0 runs in the growing direction and stays stable
            delta = x - self.xs[j + 1]
            C, S = _cs(self.w[j] * delta * delta)
            dS = delta * S
            val = self.u[j + 1] * C + self.du[j + 1] * dS
            der = self.u[j + 1] * self.w[j] * dS + self.du[j + 1] * C
            return val, der, self.lu[j + 1]
        else:
            delta = x - self.xs[j]
            h = self.xs[j + 1] - self.xs[j]
            fac = np.exp(self.lu[j + 1] - self.lu[j])
            u0, du0 = self.u[j], self.du[j]
            u1, du1 = self.u[j + 1] * fac, self.du[j + 1] * fac
            s = delta / h
            s2, s3 = s * s, s ** 3
            val = (u0 * (2 * s3 - 3 * s2 + 1) + du0 * h * (s3 - 2 * s2 + s)
                   + u1 * (-2 * s3 + 3 * s2) + du1 * h * (s3 - s2))
            der = (u0 * (6 * s2 - 6 * s) / h + du0 * (3 * s2 - 4 * s + 1)
                   + u1 * (6 * s - 6 * s2) / h + du1 * (3 * s2 - 2 * s))
            return val, der, self.lu[j]


def _rescale_c(u, du, log):
    mag = max(abs(u), abs(du))
    if mag > math.exp(RESCALE_LOG):
        u /= mag
        du /= mag
        log += math.log(mag)
    return u, du, log


def outgoing_interior(basis: RealBasisPair) -> OutgoingInterior:
    """Backward-propagate χ from (1, ik) at x = b down to x_c."""
    spec = basis.spec
    k = basis.k
    E = basis.E
    constants = basis.constants
    coef = 2.0 * constants.m / constants.hbar ** 2
    u, du, lu = 1.0 + 0.0j, 1j * k, 0.0
    xs = [spec.b]
    us, dus, lus = [u], [du], [lu]

    if not isinstance(spec, Sampled):
        segs = list(spec.half_segments())[::-1]
        ws: list[float] = []
        x0 = spec.b
        for length, V in segs:
            if length <= 0:
                continue
            w = coef * (V - E)
            nsub = max(1, math.ceil(math.sqrt(max(w, 0.0)) * length / RESCALE_LOG))
            delta = -length / nsub
            C, S = _cs(w * delta * delta)
            dS = delta * S
            wdS = w * dS
            for i in range(nsub):
                u, du = u * C + du * dS, u * wdS + du * C
                u, du, lu = _rescale_c(u, du, lu)
                xs.append(x0 - length if i == nsub - 1 else x0 + (i + 1) * delta)
                us.append(u); dus.append(du); lus.append(lu)
                ws.append(w)
            x0 -= length
        order = np.argsort(xs)
        w_arr = np.array(ws)[::-1] if ws else np.empty(0)
        return OutgoingInterior(np.array(xs)[order], np.array(us)[order],
                                np.array(dus)[order], np.array(lus)[order],
                                w_arr, analytic=True)

    # sampled potential: RK4 leftward on the basis node grid
    nodes = basis.nodes[::-1]
    V_nodes = np.asarray(spec.evaluate(nodes), float)
    V_half = np.asarray(spec.evaluate(0.5 * (nodes[:-1] + nodes[1:])), float)
    for i in range(len(nodes) - 1):
        h = nodes[i + 1] - nodes[i]  # negative
        w0 = coef * (V_nodes[i] - E)
        w1 = coef * (V_half[i] - E)
        w2 = coef * (V_nodes[i + 1] - E)
        k1u, k1du = du, w0 * u
        k2u, k2du = du + 0.5 * h * k1du, w1 * (u + 0.5 * h * k1u)
        k3u, k3du = du + 0.5 * h * k2du, w1 * (u + 0.5 * h * k2u)
        k4u, k4du = du + h * k3du, w2 * (u + h * k3u)
        u += h * (k1u + 2 * k2u + 2 * k3u + k4u) / 6.0
        du += h * (k1du + 2 * k2du + 2 * k3du + k4du) / 6.0
        u, du, lu = _rescale_c(u, du, lu)
        xs.append(float(nodes[i + 1]))
        us.append(u); dus.append(du); lus.append(lu)
    order = np.argsort(xs)
    return OutgoingInterior(np.array(xs)[order], np.array(us)[order],
                            np.array(dus)[order], np.array(lus)[order],
                            None, analytic=False)
