"""Symmetric, finitely supported barrier potentials and their geometry.

All barriers vanish identically outside [a, b] and are mirror symmetric about
the midpoint x_c = (a+b)/2.  Specs are frozen dataclasses: immutable after
construction and safe to share between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import ClassVar

import numpy as np

from .errors import (AsymmetricPotential, EmptySupport, NonmonotonicGrid,
                     PotentialError)

ANALYTIC_SYMMETRY_TOL = 1e-12
SAMPLED_SYMMETRY_TOL = 1e-9


@dataclass(frozen=True)
class PhysicalConstants:
    """Unit system: hbar and particle mass (defaults hbar = m = 1)."""

    hbar: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.m > 0):
            raise ValueError("hbar and m must be positive")

    def wavenumber(self, energy: float) -> float:
        """k = sqrt(2 m E) / hbar for a particle of energy E > 0."""
        return math.sqrt(2.0 * self.m * energy) / self.hbar

    def energy(self, k: float) -> float:
        """E = (hbar k)^2 / 2m."""
        return (self.hbar * k) ** 2 / (2.0 * self.m)


class BarrierSpec:
    """Base class for symmetric finite-support barriers."""

    kind: ClassVar[str] = "abstract"

    # geometry -----------------------------------------------------------
    @property
    def a(self) -> float:
        raise NotImplementedError

    @property
    def b(self) -> float:
        raise NotImplementedError

    @property
    def d(self) -> float:
        """Total support width b - a."""
        return self.b - self.a

    @property
    def x_c(self) -> float:
        """Midpoint of the support; joining point of the subprocess waves."""
        return 0.5 * (self.a + self.b)

    # potential ----------------------------------------------------------
    def evaluate(self, x):
        """V(x); exactly 0 outside [a, b].  Accepts scalars or arrays."""
        raise NotImplementedError

    def validate(self, tol: float | None = None) -> None:
        """Raise a `PotentialError` subclass naming the violated invariant."""
        if not self.b > self.a:
            raise EmptySupport(f"support [{self.a}, {self.b}] is empty")

    def half_segments(self) -> list[tuple[float, float]]:
        """(length, height) pieces covering [x_c, b]; analytic kinds only."""
        raise NotImplementedError(f"{self.kind} barrier has no analytic segments")


@dataclass(frozen=True)
class Rectangular(BarrierSpec):
    V0: float
    a: float = 0.0
    b: float = 1.0

    kind: ClassVar[str] = "rectangular"

    def evaluate(self, x):
        x = np.asarray(x, float)
        out = np.where((x >= self.a) & (x <= self.b), self.V0, 0.0)
        return out if out.ndim else float(out)

    def half_segments(self):
        return [(0.5 * self.d, self.V0)]


@dataclass(frozen=True)
class DoubleRectangular(BarrierSpec):
    """Two identical rectangles of width d_bar separated by a field-free gap."""

    V0: float
    d_bar: float
    gap: float
    a: float = 0.0

    kind: ClassVar[str] = "double_rectangular"

    @property
    def b(self) -> float:
        return self.a + 2.0 * self.d_bar + self.gap

    def validate(self, tol: float | None = None) -> None:
        super().validate(tol)
        if self.d_bar <= 0:
            raise EmptySupport("barrier width d_bar must be positive")
        if self.gap < 0:
            raise EmptySupport("gap must be nonnegative")

    def evaluate(self, x):
        x = np.asarray(x, float)
        left = (x >= self.a) & (x <= self.a + self.d_bar)
        right = (x >= self.b - self.d_bar) & (x <= self.b)
        out = np.where(left | right, self.V0, 0.0)
        return out if out.ndim else float(out)

    def half_segments(self):
        return [(0.5 * self.gap, 0.0), (self.d_bar, self.V0)]


@dataclass(frozen=True)
class PiecewiseConstant(BarrierSpec):
    """Ordered (length, height) segments, mirror symmetric about x_c."""

    segments: tuple[tuple[float, float], ...]
    a: float = 0.0

    kind: ClassVar[str] = "piecewise_constant"

    def __init__(self, segments, a: float = 0.0):
        object.__setattr__(self, "segments",
                           tuple((float(l), float(v)) for l, v in segments))
        object.__setattr__(self, "a", float(a))

    @property
    def b(self) -> float:
        return self.a + sum(l for l, _ in self.segments)

    def _edges(self) -> np.ndarray:
        return self.a + np.concatenate(
            ([0.0], np.cumsum([l for l, _ in self.segments])))

    def validate(self, tol: float | None = None) -> None:
        super().validate(tol)
        tol = ANALYTIC_SYMMETRY_TOL if tol is None else tol
        if not self.segments:
            raise EmptySupport("no segments given")
        lengths = np.array([l for l, _ in self.segments])
        heights = np.array([v for _, v in self.segments])
        if np.any(lengths <= 0):
            raise EmptySupport("all segment lengths must be positive")
        scale = max(1.0, float(np.max(np.abs(heights))), float(np.max(lengths)))
        if (np.max(np.abs(lengths - lengths[::-1])) > tol * scale
                or np.max(np.abs(heights - heights[::-1])) > tol * scale):
            raise AsymmetricPotential(
                "segment list is not mirror symmetric about the midpoint")

    def evaluate(self, x):
        x = np.asarray(x, float)
        edges = self._edges()
        idx = np.clip(np.searchsorted(edges, x, side="right") - 1,
                      0, len(self.segments) - 1)
        heights = np.array([v for _, v in self.segments])
        out = np.where((x >= self.a) & (x <= self.b), heights[idx], 0.0)
        return out if out.ndim else float(out)

    def half_segments(self):
        xc = self.x_c
        edges = self._edges()
        pieces = []
        for i, (_, v) in enumerate(self.segments):
            lo, hi = edges[i], edges[i + 1]
            if hi <= xc:
                continue
            pieces.append((hi - max(lo, xc), v))
        return pieces


@dataclass(frozen=True)
class Sampled(BarrierSpec):
    """Potential given by (x, V) samples on a uniform grid; linear in between.

    The grid must have an even number of intervals so x_c lands on a node.
    """

    x: np.ndarray
    V: np.ndarray

    kind: ClassVar[str] = "sampled"

    def __init__(self, x, V):
        object.__setattr__(self, "x", np.asarray(x, float))
        object.__setattr__(self, "V", np.asarray(V, float))

    @property
    def a(self) -> float:
        return float(self.x[0])

    @property
    def b(self) -> float:
        return float(self.x[-1])

    def validate(self, tol: float | None = None) -> None:
        tol = SAMPLED_SYMMETRY_TOL if tol is None else tol
        if self.x.size < 3 or self.V.size != self.x.size:
            raise EmptySupport("need at least 3 matching (x, V) samples")
        super().validate(tol)
        dx = np.diff(self.x)
        if np.any(dx <= 0):
            raise NonmonotonicGrid("sample grid must be strictly increasing")
        if np.max(dx) - np.min(dx) > 1e-9 * np.max(dx):
            raise NonmonotonicGrid("sample grid must be uniform")
        if (self.x.size - 1) % 2:
            raise PotentialError(
                "sampled grid needs an even number of intervals so that "
                "the midpoint x_c is a grid node")
        scale = max(1.0, float(np.max(np.abs(self.V))))
        asym = np.max(np.abs(self.V - self.V[::-1]))
        if asym > tol * scale:
            raise AsymmetricPotential(
                f"sampled potential asymmetric about x_c: max |V(x_c-xi)-V(x_c+xi)| "
                f"= {asym:.3e} exceeds tol {tol:.1e}")

    def evaluate(self, x):
        x = np.asarray(x, float)
        out = np.interp(x, self.x, self.V)
        out = np.where((x >= self.a) & (x <= self.b), out, 0.0)
        return out if out.ndim else float(out)


def validate(spec: BarrierSpec, tol: float | None = None) -> None:
    """Module-level alias for `spec.validate(tol)`."""
    spec.validate(tol)


# -- file interfaces ----------------------------------------------------------

def load_sampled_csv(path) -> Sampled:
    """Two-column CSV (x, V); '#' comments and a header row are tolerated."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p for p in line.replace(",", " ").split() if p]
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except (ValueError, IndexError):
            if rows:
                raise PotentialError(f"malformed sample line: {line!r}")
            continue  # header row
    if not rows:
        raise EmptySupport(f"no samples found in {path}")
    data = np.array(rows)
    return Sampled(data[:, 0], data[:, 1])


def load_barrier_config(path) -> BarrierSpec:
    """Barrier description from key = value lines.

    Keys: kind (rectangular | double_rectangular | piecewise_constant | sampled)
    plus the geometry fields of that kind.  Piecewise segments are written
    ``segments = len:height, len:height, ...``; sampled grids point at a CSV
    via ``csv = relative/or/absolute path``.
    """
    path = Path(path)
    entries: dict[str, str] = {}
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PotentialError(f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        entries[key.strip().lower()] = value.strip()
    kind = entries.pop("kind", None)
    if kind is None:
        raise PotentialError("barrier config must set 'kind'")
    kind = kind.lower()
    try:
        if kind in ("rectangular", "rect"):
            spec = Rectangular(V0=float(entries["v0"]),
                               a=float(entries.get("a", 0.0)),
                               b=float(entries["b"]))
        elif kind in ("double_rectangular", "double"):
            spec = DoubleRectangular(V0=float(entries["v0"]),
                                     d_bar=float(entries["d_bar"]),
                                     gap=float(entries.get("gap", entries.get("l", "0"))),
                                     a=float(entries.get("a", 0.0)))
        elif kind in ("piecewise_constant", "piecewise"):
            segs = []
            for piece in entries["segments"].split(","):
                length, _, height = piece.partition(":")
                segs.append((float(length), float(height)))
            spec = PiecewiseConstant(segs, a=float(entries.get("a", 0.0)))
        elif kind == "sampled":
            csv = Path(entries["csv"])
            if not csv.is_absolute():
                csv = path.parent / csv
            spec = load_sampled_csv(csv)
        else:
            raise PotentialError(f"unknown barrier kind {kind!r}")
    except KeyError as exc:
        raise PotentialError(f"barrier config missing key {exc}") from None
    spec.validate()
    return spec
