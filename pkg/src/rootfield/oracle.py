"""Independent ground-truth machinery.

Nothing in here shares code with the series engine: polynomial roots come
from Aberth-Ehrlich simultaneous iteration, transcendental roots from a
deterministic Newton grid scan, and root counts from the argument
principle over a rectangle.  Acceptance tests compare engine output
against these.

All oracles are deterministic -- fixed starting circle, fixed grids, no
randomness -- so failures reproduce without seeds.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import ConvergenceError, DomainError

__all__ = [
    "Rectangle",
    "ComparisonReport",
    "polyval",
    "polyder",
    "poly_from_roots",
    "aberth_roots",
    "grid_newton_scan",
    "argument_principle_count",
    "compare_root_sets",
]


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise DomainError("rectangle needs re_min < re_max and im_min < im_max")

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (
            self.re_min - pad <= z.real <= self.re_max + pad
            and self.im_min - pad <= z.imag <= self.im_max + pad
        )

    def corners(self) -> list[complex]:
        """Counterclockwise corners starting at (re_min, im_min)."""
        return [
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        ]


@dataclass
class ComparisonReport:
    """Minimal-distance bijection between an engine root set and an oracle set."""

    matched: list[tuple[complex, complex, float]] = field(default_factory=list)
    engine_only: list[complex] = field(default_factory=list)
    oracle_only: list[complex] = field(default_factory=list)
    tol: float = 0.0

    @property
    def max_distance(self) -> float:
        return max((d for _, _, d in self.matched), default=0.0)

    @property
    def clean(self) -> bool:
        return not self.engine_only and not self.oracle_only


# -- polynomial helpers (ascending coefficients: coeffs[j] multiplies x^j) --


def polyval(coeffs, z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def polyder(coeffs) -> list[complex]:
    return [j * c for j, c in enumerate(coeffs)][1:] or [0j]


def poly_from_roots(roots) -> list[complex]:
    coeffs = [1.0 + 0j]
    for r in roots:
        coeffs = [0j] + coeffs
        for j in range(len(coeffs) - 1):
            coeffs[j] -= r * coeffs[j + 1]
        # multiply (x - r): new[j] = old[j-1] - r old[j]
    return coeffs


def aberth_roots(coeffs, max_sweeps: int = 500, tol: float = 1e-12) -> list[complex]:
    """All roots of sum coeffs[j] x^j by Aberth-Ehrlich iteration.

    Starting points sit on a perturbed circle of the Cauchy radius (fixed
    configuration, no randomness).  Each returned z satisfies
    |p(z)| <= tol * max|coeffs| * max(1, |z|)^deg.
    """
    coeffs = [complex(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        raise DomainError("aberth_roots needs degree >= 1 with nonzero leading coefficient")
    lead = coeffs[-1]
    norm = max(abs(c) for c in coeffs)
    dcoeffs = polyder(coeffs)

    # Factor out roots at the origin exactly.
    nzero = 0
    while coeffs[nzero] == 0:
        nzero += 1
    reduced = coeffs[nzero:]
    rdeg = len(reduced) - 1
    roots = [0j] * nzero
    if rdeg == 0:
        return roots

    radius = 1.0 + max(abs(c / lead) for c in reduced[:-1])
    zs = [
        0.8 * radius * cmath.exp(2j * math.pi * (j + 0.25) / rdeg + 0.42j)
        for j in range(rdeg)
    ]
    rd = polyder(reduced)

    def done(z: complex) -> bool:
        return abs(polyval(coeffs, z)) <= tol * norm * max(1.0, abs(z)) ** deg

    for _ in range(max_sweeps):
        converged = True
        for i in range(rdeg):
            zi = zs[i]
            pv = polyval(reduced, zi)
            dv = polyval(rd, zi)
            if dv == 0:
                zs[i] = zi + 1e-8 * (1 + radius)
                converged = False
                continue
            newton = pv / dv
            s = 0j
            for j in range(rdeg):
                if j != i:
                    dz = zi - zs[j]
                    if dz == 0:
                        dz = 1e-12 * (1 + radius)
                    s += 1.0 / dz
            denom = 1.0 - newton * s
            step = newton if denom == 0 else newton / denom
            zs[i] = zi - step
            if abs(step) > 1e-14 * max(1.0, abs(zi)):
                converged = False
        if converged and all(done(z) for z in zs):
            break
    else:
        if not all(done(z) for z in zs):
            raise ConvergenceError(f"aberth_roots: no convergence in {max_sweeps} sweeps")
    return roots + zs


def _eval_pair(target):
    """Normalize a target into (f, df) callables.

    Accepts an Equation-like object (eval / eval_derivative), an (f, df)
    pair, or a bare callable (derivative by central difference).
    """
    if hasattr(target, "eval") and hasattr(target, "eval_derivative"):
        return target.eval, target.eval_derivative
    if isinstance(target, tuple) and len(target) == 2:
        return target
    f = target

    def df(z: complex, _f=f) -> complex:
        h = 1e-7 * max(1.0, abs(z))
        return (_f(z + h) - _f(z - h)) / (2.0 * h)

    return f, df


def grid_newton_scan(
    target,
    region: Rectangle,
    nx: int = 32,
    ny: int = 32,
    tol: float = 1e-11,
    max_iter: int = 60,
) -> list[complex]:
    """Newton from every node of a fixed nx-by-ny grid over the region.

    Converged results inside the region are deduplicated at 1e-7 scale and
    returned sorted by (real, imag); nodes that fail to converge are simply
    dropped, so an empty list is a valid outcome.
    """
    if nx < 4 or ny < 4:
        raise DomainError("grid_newton_scan needs at least a 4x4 grid")
    f, df = _eval_pair(target)
    found: list[complex] = []
    for iy in range(ny):
        im = region.im_min + (region.im_max - region.im_min) * iy / (ny - 1)
        for ix in range(nx):
            re = region.re_min + (region.re_max - region.re_min) * ix / (nx - 1)
            z = complex(re, im)
            ok = False
            try:
                for _ in range(max_iter):
                    fv = f(z)
                    if abs(fv) <= tol * max(1.0, abs(z)):
                        ok = True
                        break
                    dv = df(z)
                    if dv == 0 or not math.isfinite(abs(dv)):
                        break
                    z = z - fv / dv
                    if not math.isfinite(abs(z)) or abs(z) > 1e8:
                        break
            except (DomainError, ValueError, ZeroDivisionError, OverflowError):
                continue
            if not ok or not region.contains(z, pad=1e-9 * max(1.0, abs(z))):
                continue
            for kept in found:
                if abs(kept - z) <= 1e-7 * max(1.0, abs(kept), abs(z)):
                    break
            else:
                found.append(z)
    found.sort(key=lambda w: (w.real, w.imag))
    return found


def argument_principle_count(target, region: Rectangle, samples_per_edge: int = 512) -> int:
    """Zeros (with multiplicity) inside the rectangle via boundary winding.

    Errors out when the boundary passes too close to a root (minimum |f| on
    the boundary collapses relative to its geometric mean) or when adjacent
    phase samples jump by nearly pi, which means the sampling is too coarse
    to continue the phase reliably.
    """
    if samples_per_edge < 4:
        raise DomainError("argument_principle_count needs samples_per_edge >= 4")
    f, _ = _eval_pair(target)
    corners = region.corners()
    pts: list[complex] = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        for i in range(samples_per_edge):
            pts.append(a + (b - a) * i / samples_per_edge)
    values = [complex(f(z)) for z in pts]
    mags = [abs(v) for v in values]
    if min(mags) == 0.0:
        raise DomainError("argument principle: boundary passes through a zero")
    geo = math.exp(sum(math.log(m) for m in mags) / len(mags))
    if min(mags) < 1e-7 * geo:
        raise DomainError("argument principle: root too close to the boundary")
    total = 0.0
    for i in range(len(values)):
        ratio = values[(i + 1) % len(values)] / values[i]
        d = cmath.phase(ratio)
        if abs(d) > 3.0:
            raise ConvergenceError(
                "argument principle: phase jump >= pi between samples; increase samples_per_edge"
            )
        total += d
    count = total / (2.0 * math.pi)
    n = round(count)
    if abs(count - n) > 0.01:
        raise ConvergenceError(f"argument principle: non-integer winding {count}")
    return n


def compare_root_sets(engine_roots, oracle_roots, tol: float = 1e-8) -> ComparisonReport:
    """Greedy minimal-distance bijection between two root sets.

    Accepts RootField-like objects (``values()``), records, or raw complex
    lists.  Pairs farther apart than tol stay unmatched and land in
    engine_only / oracle_only; the matching is order-independent.
    """
    if hasattr(engine_roots, "values"):
        engine = list(engine_roots.values())
    else:
        engine = [getattr(r, "z", r) for r in engine_roots]
    oracle = [complex(z) for z in oracle_roots]
    pairs = sorted(
        ((abs(e - o), i, j) for i, e in enumerate(engine) for j, o in enumerate(oracle)),
        key=lambda t: (t[0], t[1], t[2]),
    )
    used_e: set[int] = set()
    used_o: set[int] = set()
    report = ComparisonReport(tol=tol)
    for d, i, j in pairs:
        if d > tol:
            break
        if i in used_e or j in used_o:
            continue
        used_e.add(i)
        used_o.add(j)
        report.matched.append((engine[i], oracle[j], d))
    report.engine_only = [e for i, e in enumerate(engine) if i not in used_e]
    report.oracle_only = [o for j, o in enumerate(oracle) if j not in used_o]
    return report
