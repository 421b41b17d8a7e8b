"""Exact plane and unit-disk geometry kernel.

Leftward half-line "teeth", rectangle witnesses, oriented boundary arcs of
the unit circle, harmonic-measure level arcs, and the slope angle of a disk
point relative to a boundary point.  All types are immutable values and all
operations are pure functions, so everything here is safe to share across
threads and processes.

Orientation convention: a :class:`BoundaryArc` is always traversed
CLOCKWISE from ``start`` to ``end``.  Sketch, with the arc drawn as the
upper piece of the circle and a level arc (level < 1/2) bulging away
from it into the lower half::

      start  _,--~~--._
           *'   arc    `*  end
           |        ray_,'|          level arc: runs from start to end,
           |      _,-'v   |          meets the circle at angle level*pi
           *._   '       _*
              `--..___,--'           ray: tangent to the level arc at
               level arc             end; along it the slope angle
                                     arg(1 - conj(end) z) is constant

Level arcs and tangent rays are derived under that convention; which side
of the chord a level arc bulges toward is fixed by requiring that the
harmonic measure of the arc equals the level on every arc point (checked
in the test suite against the disk-arc oracle), never by guessing a sign.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "BoundaryArc",
    "DiskMobius",
    "HalfLine",
    "HSegment",
    "LevelArc",
    "RectWitness",
    "TangentRay",
    "dist_to_halfline",
    "dist_to_hsegment",
    "level_set_arc",
    "mobius_to_zero",
    "nearest_point_on_halfline",
    "nearest_point_on_hsegment",
    "require_finite",
    "slope_of",
    "tangent_ray",
]

_UNIT_TOL = 1e-9
_TWO_PI = 2.0 * math.pi


def require_finite(z: complex) -> complex:
    """Reject points with NaN or infinite components."""
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"point has non-finite components: {z!r}")
    return z


def _require_unit(z: complex, what: str) -> complex:
    require_finite(z)
    r = abs(z)
    if abs(r - 1.0) > _UNIT_TOL:
        raise DomainError(f"{what} must lie on the unit circle, got |z| = {r}")
    return z / r


@dataclass(frozen=True)
class HalfLine:
    """Closed leftward horizontal ray ``{anchor + t : t <= 0}``."""

    anchor: complex

    def __post_init__(self) -> None:
        require_finite(self.anchor)


def dist_to_halfline(p: complex, h: HalfLine) -> float:
    """Euclidean distance from ``p`` to the closed ray; 0 iff ``p`` is on it."""
    dx = p.real - h.anchor.real
    dy = p.imag - h.anchor.imag
    if dx <= 0.0:
        return abs(dy)
    return math.hypot(dx, dy)


def nearest_point_on_halfline(p: complex, h: HalfLine) -> complex:
    """The unique closest ray point to ``p`` (the anchor when ``p`` is to its right)."""
    if p.real <= h.anchor.real:
        return complex(p.real, h.anchor.imag)
    return h.anchor


@dataclass(frozen=True)
class HSegment:
    """Horizontal segment from ``(x_lo, y)`` to ``(x_hi, y)``.

    Distances are measured to the closed segment; whether the endpoints
    belong to the represented point set depends on the caller (rectangle
    borders are open, surgery segments are half-open) and never affects a
    distance.
    """

    x_lo: float
    x_hi: float
    y: float

    def __post_init__(self) -> None:
        require_finite(complex(self.x_lo, self.y))
        require_finite(complex(self.x_hi, 0.0))
        if not self.x_lo < self.x_hi:
            raise DomainError(f"segment needs x_lo < x_hi, got [{self.x_lo}, {self.x_hi}]")


def dist_to_hsegment(p: complex, s: HSegment) -> float:
    x = min(max(p.real, s.x_lo), s.x_hi)
    return math.hypot(p.real - x, p.imag - s.y)


def nearest_point_on_hsegment(p: complex, s: HSegment) -> complex:
    return complex(min(max(p.real, s.x_lo), s.x_hi), s.y)


@dataclass(frozen=True)
class RectWitness:
    """Open axis-aligned rectangle used to witness a local strip.

    The point set is ``{x + iy : |x - Re center| < width/2,
    Im center - down < y < Im center + up}``.
    """

    center: complex
    up: float
    down: float
    width: float

    def __post_init__(self) -> None:
        require_finite(self.center)
        if not (self.up > 0.0 and self.down > 0.0 and self.width > 0.0):
            raise DomainError(
                f"rectangle needs positive up/down/width, got {self.up}, {self.down}, {self.width}"
            )

    @property
    def x_lo(self) -> float:
        return self.center.real - self.width / 2.0

    @property
    def x_hi(self) -> float:
        return self.center.real + self.width / 2.0

    @property
    def y_lo(self) -> float:
        return self.center.imag - self.down

    @property
    def y_hi(self) -> float:
        return self.center.imag + self.up

    def contains(self, p: complex) -> bool:
        """Strict membership in the open rectangle."""
        return (
            abs(p.real - self.center.real) < self.width / 2.0
            and self.y_lo < p.imag < self.y_hi
        )

    def horizontal_border(self) -> tuple[HSegment, HSegment]:
        """The top and bottom open border segments (endpoints excluded)."""
        top = HSegment(self.x_lo, self.x_hi, self.y_hi)
        bottom = HSegment(self.x_lo, self.x_hi, self.y_lo)
        return top, bottom


@dataclass(frozen=True)
class BoundaryArc:
    """Arc of the unit circle traversed clockwise from ``start`` to ``end``.

    Endpoints are renormalized to exact unit modulus on construction.
    """

    start: complex
    end: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", _require_unit(self.start, "arc start"))
        object.__setattr__(self, "end", _require_unit(self.end, "arc end"))
        if self.start == self.end:
            raise DomainError("arc endpoints must be distinct")

    @property
    def central_angle(self) -> float:
        """Angular length of the clockwise traversal, in (0, 2*pi)."""
        delta = (cmath.phase(self.start) - cmath.phase(self.end)) % _TWO_PI
        return delta if delta > 0.0 else _TWO_PI

    def complement(self) -> "BoundaryArc":
        """The complementary arc (clockwise from ``end`` to ``start``)."""
        return BoundaryArc(self.end, self.start)


def slope_of(boundary_point: complex, z: complex) -> float:
    """Slope angle ``arg(1 - conj(b) * z)`` of ``z`` relative to boundary point ``b``.

    Lies in ``[-pi/2, pi/2]`` on the accepted domain: the closed unit disk
    together with the half-plane slab where ``Re(1 - conj(b) z) >= 0`` (the
    end points of that range are only attained on the tangent line at
    ``b``).  Points beyond that tangent line are rejected rather than
    clamped, since they indicate an upstream bug.
    """
    b = _require_unit(boundary_point, "boundary point")
    require_finite(z)
    w = 1.0 - b.conjugate() * z
    if w == 0:
        raise DomainError("slope angle undefined at the boundary point itself")
    if w.real < -1e-12 * (1.0 + abs(z)):
        raise DomainError(
            f"slope_of needs z on the disk side of the tangent at {b}, got {z}"
        )
    return math.atan2(w.imag, max(w.real, 0.0))


@dataclass(frozen=True)
class DiskMobius:
    """Disk automorphism ``T(z) = (z - a) / (1 - conj(a) z)`` with ``T(a) = 0``."""

    a: complex

    def __post_init__(self) -> None:
        require_finite(self.a)
        if abs(self.a) >= 1.0:
            raise DomainError(f"Mobius base point must satisfy |a| < 1, got {abs(self.a)}")

    def __call__(self, z: complex) -> complex:
        return (z - self.a) / (1.0 - self.a.conjugate() * z)

    def inverse(self) -> "DiskMobius":
        return DiskMobius(-self.a)

    def apply_arc(self, arc: BoundaryArc) -> BoundaryArc:
        """Image arc; disk automorphisms preserve the circle and its orientation."""
        return BoundaryArc(self(arc.start), self(arc.end))


def mobius_to_zero(a: complex) -> DiskMobius:
    """The disk automorphism sending ``a`` to the origin."""
    return DiskMobius(a)


def _halfplane_chart(arc: BoundaryArc) -> tuple[complex, complex]:
    # S(w) = start*(w - p)/(w - conj(p)) maps the upper half-plane onto the
    # disk with S(0) = end, S(inf) = start; the positive real axis maps onto
    # the clockwise arc from start to end.  Requires p/conj(p) = end/start.
    half = ((cmath.phase(arc.end) - cmath.phase(arc.start)) % _TWO_PI) / 2.0
    return cmath.exp(1j * half), arc.start


def _chart_point(arc: BoundaryArc, w: complex) -> complex:
    p, s = _halfplane_chart(arc)
    return s * (w - p) / (w - p.conjugate())


def _circumcircle(a: complex, b: complex, c: complex) -> tuple[complex, float] | None:
    d = 2.0 * (
        a.real * (b.imag - c.imag)
        + b.real * (c.imag - a.imag)
        + c.real * (a.imag - b.imag)
    )
    span = max(abs(a - b), abs(b - c), abs(c - a))
    if abs(d) <= 1e-14 * span * span * span or span == 0.0:
        return None
    aa, bb, cc = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2
    ux = (aa * (b.imag - c.imag) + bb * (c.imag - a.imag) + cc * (a.imag - b.imag)) / d
    uy = (aa * (c.real - b.real) + bb * (a.real - c.real) + cc * (b.real - a.real)) / d
    center = complex(ux, uy)
    return center, abs(center - a)


@dataclass(frozen=True)
class LevelArc:
    """Locus of disk points where the arc's harmonic measure equals ``level``.

    A circular arc with the same endpoints as the boundary arc, meeting the
    unit circle at angle ``level * pi``.  ``point_at`` parametrizes it from
    ``start`` (s = 0) to ``end`` (s = 1) exactly, independent of the fitted
    center/radius descriptor; when the locus degenerates to the straight
    chord, ``is_straight`` is set and ``radius`` is infinite.
    """

    start: complex
    end: complex
    level: float
    is_straight: bool
    center: complex | None
    radius: float

    def point_at(self, s: float) -> complex:
        if not 0.0 <= s <= 1.0:
            raise DomainError(f"arc parameter must be in [0, 1], got {s}")
        if s == 0.0:
            return self.start
        if s == 1.0:
            return self.end
        arc = BoundaryArc(self.start, self.end)
        rho = math.tan((1.0 - s) * math.pi / 2.0)
        w = rho * cmath.exp(1j * math.pi * (1.0 - self.level))
        return _chart_point(arc, w)

    def tangent_at_end(self) -> complex:
        """Unit tangent of the level arc at ``end``, oriented into the disk."""
        if self.is_straight or self.center is None:
            t = self.start - self.end
            return t / abs(t)
        t = 1j * (self.end - self.center)
        t /= abs(t)
        probe = self.point_at(0.999) - self.end
        if (t.real * probe.real + t.imag * probe.imag) < 0.0:
            t = -t
        return t


def level_set_arc(level: float, arc: BoundaryArc) -> LevelArc:
    """The level arc of the harmonic measure of ``arc`` at height ``level``.

    Raises :class:`DomainError` unless ``0 < level < 1``.
    """
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level}")
    delta = arc.central_angle
    # The chord itself carries measure 1 - delta/(2*pi); at that level the
    # arc is straight and the circumcircle degenerates.
    straight_level = 1.0 - delta / _TWO_PI
    if abs(level - straight_level) <= 1e-12:
        return LevelArc(arc.start, arc.end, level, True, None, math.inf)
    mid = _chart_point(arc, cmath.exp(1j * math.pi * (1.0 - level)))
    fit = _circumcircle(arc.start, arc.end, mid)
    if fit is None:
        return LevelArc(arc.start, arc.end, level, True, None, math.inf)
    center, radius = fit
    return LevelArc(arc.start, arc.end, level, False, center, radius)


@dataclass(frozen=True)
class TangentRay:
    """Ray from ``base`` into the disk on which the slope angle is constant.

    Every point ``base + s * direction`` with ``0 < s < max_param`` lies in
    the open disk and satisfies ``slope_of(base, .) == pi * (1/2 - level)``
    exactly; the ray is tangent at ``base`` to the level arc of the same
    level.
    """

    base: complex
    level: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", _require_unit(self.base, "ray base"))
        if not 0.0 < self.level < 1.0:
            raise DomainError(f"level must lie in (0, 1), got {self.level}")

    @property
    def angle(self) -> float:
        """The constant slope value ``pi * (1/2 - level)``."""
        return math.pi * (0.5 - self.level)

    @property
    def direction(self) -> complex:
        return -self.base * cmath.exp(1j * self.angle)

    @property
    def max_param(self) -> float:
        """Parameter at which the ray meets the unit circle again."""
        return 2.0 * math.cos(self.angle)

    def point_at(self, s: float) -> complex:
        if not 0.0 <= s <= self.max_param:
            raise DomainError(f"ray parameter must be in [0, {self.max_param}], got {s}")
        return self.base + s * self.direction


def tangent_ray(level: float, arc: BoundaryArc) -> TangentRay:
    """Ray from ``arc.end`` tangent to the level arc there."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level}")
    return TangentRay(arc.end, level)
