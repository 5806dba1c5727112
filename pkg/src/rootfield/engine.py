"""Generalized-roots engine.

An :class:`Equation` is a weighted sum of catalog term functions plus a
constant:  sigma(z) = sum_i m_i * p_i(z) + t.  For every term k with
m_k != 0 the equation can be inverted through that term: map w = p_k(z),
expand around the center w0 = -t/m_k, and sum the Lagrange series

    z = p_k^{-1}(w0, branch)
        + sum_j (-1)^j / j! * d^{j-1}/dw^{j-1} [ d/dw p_k^{-1}(w, branch)
                                                 * phi(w, branch)^j ] at w0,

where phi(w) = sum_{i != k} (m_i/m_k) * p_i(p_k^{-1}(w, branch)).  The
derivative tower is read off jet products: (j-1)! times coefficient j-1.
Each multivalued inverse contributes a family of branches (category q,
winding s); the union of all per-branch roots, Newton-refined and
deduplicated, is the returned :class:`RootField`.

Branches whose series diverge are not fatal: the partial sum is kept as a
Newton seed and the resulting record is flagged unconverged.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

from . import specialfn
from .errors import BasinEscapeError, ConvergenceError, DomainError, SeriesDivergenceError
from .jets import Jet

__all__ = [
    "TermFunction",
    "Equation",
    "BranchSpec",
    "Jet",
    "RootRecord",
    "RootField",
    "ConvergenceReport",
    "inverse_branch",
    "phi",
    "lagrange_root",
    "lagrange_series",
    "convergence_check",
    "enumerate_branches",
    "newton_refine",
    "solve_all",
    "solve_term",
]

TWO_PI_I = 2j * math.pi

POWER = "power"
EXP = "exp"
LOG = "log"
SIN = "sin"
COS = "cos"
SELFPOWER = "selfpower"
EXPSCALED = "expscaled"
ZEXPSCALED = "zexpscaled"

_KINDS = (POWER, EXP, LOG, SIN, COS, SELFPOWER, EXPSCALED, ZEXPSCALED)


def _as_int_exponent(r: complex) -> int | None:
    r = complex(r)
    if r.imag != 0.0:
        return None
    n = round(r.real)
    if abs(r.real - n) < 1e-12:
        return n
    return None


@dataclass(frozen=True)
class TermFunction:
    """One catalog term p(z) together with its inverse-branch family.

    kind is one of power/exp/log/sin/cos/selfpower/expscaled/zexpscaled;
    ``r`` is the exponent for power terms, ``tau`` the rate for the scaled
    exponentials (expscaled: e^(tau z), zexpscaled: z e^(tau z) -- the
    latter covers quasi-polynomial characteristic terms and inverts through
    Lambert W).
    """

    kind: str
    r: complex = 0j
    tau: complex = 0j

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown term kind {self.kind!r}")
        if self.kind == POWER and complex(self.r) == 0:
            raise DomainError("power term with exponent 0 is a constant; fold it into t")
        if self.kind in (EXPSCALED, ZEXPSCALED) and complex(self.tau) == 0:
            raise DomainError(f"{self.kind} requires tau != 0")
        object.__setattr__(self, "r", complex(self.r))
        object.__setattr__(self, "tau", complex(self.tau))

    # -- constructors ---------------------------------------------------

    @classmethod
    def power(cls, r: complex) -> "TermFunction":
        return cls(POWER, r=r)

    @classmethod
    def exp(cls) -> "TermFunction":
        return cls(EXP)

    @classmethod
    def log(cls) -> "TermFunction":
        return cls(LOG)

    @classmethod
    def sin(cls) -> "TermFunction":
        return cls(SIN)

    @classmethod
    def cos(cls) -> "TermFunction":
        return cls(COS)

    @classmethod
    def selfpower(cls) -> "TermFunction":
        return cls(SELFPOWER)

    @classmethod
    def expscaled(cls, tau: complex) -> "TermFunction":
        return cls(EXPSCALED, tau=tau)

    @classmethod
    def zexpscaled(cls, tau: complex) -> "TermFunction":
        return cls(ZEXPSCALED, tau=tau)

    @property
    def u_q(self) -> int:
        """Number of inverse categories (2 for the trigonometric terms)."""
        return 2 if self.kind in (SIN, COS) else 1

    # -- pointwise evaluation --------------------------------------------

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        k = self.kind
        if k == POWER:
            n = _as_int_exponent(self.r)
            if n is not None:
                if z == 0 and n < 0:
                    raise DomainError("power term with negative exponent at z = 0")
                return z ** n
            if z == 0:
                raise DomainError("non-integer power term at z = 0")
            return cmath.exp(self.r * cmath.log(specialfn.principal(z)))
        if k == EXP:
            return cmath.exp(z)
        if k == LOG:
            if z == 0:
                raise DomainError("log term at z = 0")
            return cmath.log(specialfn.principal(z))
        if k == SIN:
            return cmath.sin(z)
        if k == COS:
            return cmath.cos(z)
        if k == SELFPOWER:
            if z == 0:
                raise DomainError("z^z term at z = 0")
            return cmath.exp(z * cmath.log(specialfn.principal(z)))
        if k == EXPSCALED:
            return cmath.exp(self.tau * z)
        # zexpscaled
        return z * cmath.exp(self.tau * z)

    def deriv(self, z: complex) -> complex:
        z = complex(z)
        k = self.kind
        if k == POWER:
            n = _as_int_exponent(self.r)
            if n is not None:
                if z == 0 and n < 1:
                    raise DomainError("power derivative undefined at z = 0")
                return n * z ** (n - 1)
            if z == 0:
                raise DomainError("non-integer power derivative at z = 0")
            return self.r * cmath.exp((self.r - 1) * cmath.log(specialfn.principal(z)))
        if k == EXP:
            return cmath.exp(z)
        if k == LOG:
            if z == 0:
                raise DomainError("log derivative at z = 0")
            return 1.0 / z
        if k == SIN:
            return cmath.cos(z)
        if k == COS:
            return -cmath.sin(z)
        if k == SELFPOWER:
            if z == 0:
                raise DomainError("z^z derivative at z = 0")
            lz = cmath.log(specialfn.principal(z))
            return cmath.exp(z * lz) * (lz + 1.0)
        if k == EXPSCALED:
            return self.tau * cmath.exp(self.tau * z)
        return (1.0 + self.tau * z) * cmath.exp(self.tau * z)

    def apply_jet(self, g: Jet) -> Jet:
        """p(g) for a jet g (forward composition used to build phi)."""
        k = self.kind
        if k == POWER:
            return g.power(self.r)
        if k == EXP:
            return g.exp()
        if k == LOG:
            return g.log()
        if k == SIN:
            return g.sin()
        if k == COS:
            return g.cos()
        if k == SELFPOWER:
            return (g.log() * g).exp()
        if k == EXPSCALED:
            return (g * self.tau).exp()
        return g * (g * self.tau).exp()

    def inverse_jet(self, w0: complex, q: int, s: int, order: int) -> Jet:
        """Jet of the branch (q, s) of p^{-1} around w0."""
        self._check_category(q)
        w0 = specialfn.principal(w0)
        w = Jet.variable(w0, order)
        k = self.kind
        if k == POWER:
            if w0 == 0:
                raise DomainError("power inverse expansion at w = 0")
            return (w.log() * (1.0 / self.r)).exp() * cmath.exp(TWO_PI_I * s / self.r)
        if k == EXP:
            return w.log(winding=s)
        if k == LOG:
            return w.exp()
        if k == SIN:
            asin = (1.0 - w * w).power(-0.5).antiderivative(cmath.asin(w0))
            if q == 1:
                return asin + specialfn.TWO_PI * s
            return (math.pi + specialfn.TWO_PI * s) - asin
        if k == COS:
            acos = (-((1.0 - w * w).power(-0.5))).antiderivative(cmath.acos(w0))
            if q == 1:
                return acos + specialfn.TWO_PI * s
            return (specialfn.TWO_PI * s) - acos
        if k == SELFPOWER:
            return w.log().lambertw(branch=s).exp()
        if k == EXPSCALED:
            return w.log(winding=s) * (1.0 / self.tau)
        return (w * self.tau).lambertw(branch=s) * (1.0 / self.tau)

    def inverse_point(self, w: complex, q: int, s: int) -> complex:
        """The branch (q, s) of p^{-1} at a single point."""
        self._check_category(q)
        w = complex(w)
        k = self.kind
        if k == POWER:
            return specialfn.root_branch(w, self.r, s)
        if k == EXP:
            return specialfn.log_branch(w, s)
        if k == LOG:
            return cmath.exp(w)
        if k == SIN:
            return specialfn.arcsin_branch(w, q, s)
        if k == COS:
            return specialfn.arccos_branch(w, q, s)
        if k == SELFPOWER:
            u = specialfn.log_branch(w, 0)
            wl = specialfn.lambert_w(s, u)
            return cmath.exp(wl)
        if k == EXPSCALED:
            return specialfn.log_branch(w, s) / self.tau
        return specialfn.lambert_w(s, self.tau * w) / self.tau

    def _check_category(self, q: int) -> None:
        if not 1 <= q <= self.u_q:
            raise DomainError(f"category {q} invalid for {self.kind} (u_q={self.u_q})")


@dataclass(frozen=True)
class Equation:
    """sigma(z) = sum_i m_i * p_i(z) + t with at least one m_i != 0."""

    terms: tuple[tuple[complex, TermFunction], ...]
    t: complex = 0j

    def __post_init__(self):
        terms = tuple((complex(m), p) for m, p in self.terms)
        if len(terms) < 1:
            raise DomainError("equation needs at least one term")
        if all(m == 0 for m, _ in terms):
            raise DomainError("at least one coefficient m_i must be nonzero")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "t", complex(self.t))

    @property
    def n(self) -> int:
        return len(self.terms)

    def eval(self, z: complex) -> complex:
        z = complex(z)
        acc = self.t
        for m, p in self.terms:
            if m != 0:
                acc += m * p(z)
        return acc

    def eval_derivative(self, z: complex) -> complex:
        z = complex(z)
        acc = 0j
        for m, p in self.terms:
            if m != 0:
                acc += m * p.deriv(z)
        return acc

    def residual(self, z: complex) -> float:
        try:
            return abs(self.eval(z))
        except (OverflowError, DomainError):
            return math.inf

    def term(self, k: int) -> tuple[complex, TermFunction]:
        """Term by 1-based index k."""
        if not 1 <= k <= self.n:
            raise DomainError(f"term index {k} out of range 1..{self.n}")
        return self.terms[k - 1]

    def is_real(self) -> bool:
        """True when every coefficient, exponent and the constant are real."""
        if self.t.imag != 0:
            return False
        for m, p in self.terms:
            if m.imag != 0 or p.r.imag != 0 or p.tau.imag != 0:
                return False
        return True


@dataclass(frozen=True, order=True)
class BranchSpec:
    """One Lagrange expansion: term index k (1-based), category q, winding s."""

    k: int
    q: int = 1
    s: int = 0


@dataclass(frozen=True)
class RootRecord:
    """A computed root with provenance and recomputed residual."""

    z: complex
    branch: BranchSpec | None
    residual: float
    series_terms: int = 0
    refined: bool = False
    converged: bool = True
    branches: tuple[BranchSpec, ...] = ()

    def __post_init__(self):
        if not self.branches and self.branch is not None:
            object.__setattr__(self, "branches", (self.branch,))


class RootField:
    """Deduplicated union of root records across branches.

    Two roots within dedup_tol * max(1, |z|) of each other are merged; the
    representative with the smaller residual wins and the merged record
    keeps every producing branch.
    """

    def __init__(self, dedup_tol: float = 1e-8):
        self.dedup_tol = float(dedup_tol)
        self.roots: list[RootRecord] = []
        self.diagnostics: list[str] = []

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def values(self) -> list[complex]:
        return [r.z for r in self.roots]

    def add(self, rec: RootRecord) -> None:
        for i, kept in enumerate(self.roots):
            scale = max(1.0, abs(kept.z), abs(rec.z))
            if abs(kept.z - rec.z) <= self.dedup_tol * scale:
                branches = kept.branches + tuple(
                    b for b in rec.branches if b not in kept.branches
                )
                best = rec if rec.residual < kept.residual else kept
                self.roots[i] = replace(best, branches=branches)
                return
        self.roots.append(rec)

    def extend(self, recs) -> None:
        for rec in recs:
            self.add(rec)


@dataclass(frozen=True)
class ConvergenceReport:
    """Worst margin of the contour inequality; advisory only."""

    ok: bool
    margin: float
    skipped: int = 0


def inverse_branch(p: TermFunction, w: complex, b: BranchSpec) -> complex:
    """Point inversion of term p on the branch given by (b.q, b.s)."""
    return p.inverse_point(w, b.q, b.s)


def phi(eq: Equation, b: BranchSpec):
    """Evaluator of phi(w) = sum_{i != k} (m_i/m_k) p_i(p_k^{-1}(w)) on jets.

    The returned callable takes the jet of p_k^{-1} around the expansion
    center (so branch bookkeeping stays with the caller) and produces the
    phi jet.
    """
    m_k, _ = eq.term(b.k)
    if m_k == 0:
        raise DomainError(f"term {b.k} has zero coefficient")
    others = [(m, p) for i, (m, p) in enumerate(eq.terms, start=1) if i != b.k and m != 0]

    def apply(g: Jet) -> Jet:
        acc = Jet.constant(0.0, g.center, g.order)
        for m, p in others:
            acc = acc + p.apply_jet(g) * (m / m_k)
        return acc

    return apply


def lagrange_series(
    inv_jet: Jet,
    phi_jet: Jet,
    J: int,
    *,
    damping: complex = 1.0,
    tail_tol: float = 1e-10,
    overflow: float = 1e100,
) -> tuple[complex, int, bool]:
    """Sum the inversion series given the inverse jet and the phi jet.

    Returns (value, terms_used, converged).  ``damping`` scales phi (the
    m* = m/e^(s+1) device for the anomalous regions).  Raises
    SeriesDivergenceError carrying the partial sum when a term passes the
    overflow threshold.
    """
    if inv_jet.order < J:
        raise ValueError(f"inverse jet order {inv_jet.order} < J={J}")
    gp = inv_jet.derivative().coeffs
    phi_jet = phi_jet * damping
    acc = inv_jet.value()
    power = phi_jet
    last_term = 0.0
    best = acc  # partial sum at the smallest term: optimal truncation
    best_term = math.inf
    for j in range(1, J + 1):
        pc = power.coeffs
        c = 0j
        for l in range(j):
            c += gp[l] * pc[j - 1 - l]
        term = (-c / j) if (j % 2) else (c / j)
        if abs(term) > overflow or not (
            math.isfinite(term.real) and math.isfinite(term.imag)
        ):
            raise SeriesDivergenceError(
                f"series term {j} exceeded overflow threshold", partial=best, terms=j - 1
            )
        acc += term
        last_term = abs(term)
        if last_term < best_term:
            best_term = last_term
            best = acc
        if j < J:
            power = power * phi_jet
    converged = last_term < tail_tol * max(1.0, abs(acc))
    return (acc if converged else best), J, converged


def lagrange_root(eq: Equation, b: BranchSpec, J: int = 30, tail_tol: float = 1e-10) -> RootRecord:
    """Series root for one branch: expansion around w0 = -t/m_k.

    The record's ``converged`` flag reports the tail test
    |term_J| < tail_tol * max(1, |z|); an unconverged record is still a
    useful Newton seed.
    """
    if J < 1:
        raise DomainError("J must be >= 1")
    m_k, p_k = eq.term(b.k)
    if m_k == 0:
        raise DomainError(f"term {b.k} has zero coefficient")
    w0 = specialfn.principal(-eq.t / m_k)
    inv = p_k.inverse_jet(w0, b.q, b.s, J)
    phi_jet = phi(eq, b)(inv)
    try:
        z, terms, converged = lagrange_series(inv, phi_jet, J, tail_tol=tail_tol)
    except SeriesDivergenceError as err:
        err.partial = err.partial if err.partial is not None else inv.value()
        raise
    return RootRecord(
        z=z,
        branch=b,
        residual=eq.residual(z),
        series_terms=terms,
        refined=False,
        converged=converged,
    )


def convergence_check(
    eq: Equation, k: int, samples: int = 64, radius: float = 1.0
) -> ConvergenceReport:
    """Sample the contour inequality |(1/m_k) sum_{i!=k} m_i p_i(z)| < |z - c|.

    c = -t/m_k, |z - c| = radius.  Samples that hit a term singularity are
    skipped and counted.  The margin is min over samples of (radius - LHS);
    the check is advisory: a negative margin flags likely divergence, it
    does not forbid attempting the series.
    """
    if samples < 16:
        raise DomainError("convergence_check needs samples >= 16")
    m_k, _ = eq.term(k)
    if m_k == 0:
        raise DomainError(f"term {k} has zero coefficient")
    center = specialfn.principal(-eq.t / m_k)
    others = [(m, p) for i, (m, p) in enumerate(eq.terms, start=1) if i != k and m != 0]
    margin = math.inf
    skipped = 0
    for i in range(samples):
        z = center + radius * cmath.exp(TWO_PI_I * i / samples)
        try:
            lhs = abs(sum(m * p(z) for m, p in others) / m_k)
        except DomainError:
            skipped += 1
            continue
        margin = min(margin, radius - lhs)
    if skipped == samples:
        return ConvergenceReport(ok=False, margin=-math.inf, skipped=skipped)
    return ConvergenceReport(ok=margin > 0.0, margin=margin, skipped=skipped)


def enumerate_branches(eq: Equation, k: int, s_min: int, s_max: int) -> list[BranchSpec]:
    """All (q, s) branches for term k with windings in [s_min, s_max].

    An integer-exponent power term has exactly |r| distinct inverse
    branches, so its windings are always the full set 0..|r|-1 regardless
    of the requested range; the inverse of a log term is single-valued, so
    its winding is pinned to 0.
    """
    if s_min > s_max:
        raise DomainError("s_min must be <= s_max")
    _, p = eq.term(k)
    windings = range(s_min, s_max + 1)
    if p.kind == POWER:
        n = _as_int_exponent(p.r)
        if n is not None:
            windings = range(0, abs(n))
    elif p.kind == LOG:
        windings = range(0, 1)
    return [BranchSpec(k=k, q=q, s=s) for q in range(1, p.u_q + 1) for s in windings]


def newton_refine(
    eq: Equation,
    z0: complex,
    tol: float = 1e-12,
    max_iter: int = 60,
    branch: BranchSpec | None = None,
) -> RootRecord:
    """Newton iteration on sigma from z0 until |sigma(z)| <= tol * max(1, |z|).

    Rejects results that travel more than 0.5 * max(1, |z0|) from the seed
    (basin escape) and reports derivative underflow instead of dividing by
    ~0.  A z0 that already satisfies the tolerance comes back unchanged.
    """
    z0 = complex(z0)
    z = z0
    guard = 0.5 * max(1.0, abs(z0))
    try:
        f = eq.eval(z)
        if abs(f) <= tol * max(1.0, abs(z)):
            return RootRecord(z=z, branch=branch, residual=abs(f), refined=True)
        for _ in range(max_iter):
            d = eq.eval_derivative(z)
            if abs(d) < 1e-280:
                raise ConvergenceError(f"derivative underflow near z={z}")
            z = z - f / d
            if abs(z - z0) > guard:
                raise BasinEscapeError(
                    f"newton moved {abs(z - z0):.3g} from seed {z0} (guard {guard:.3g})"
                )
            f = eq.eval(z)
            if abs(f) <= tol * max(1.0, abs(z)):
                return RootRecord(z=z, branch=branch, residual=abs(f), refined=True)
    except OverflowError as err:
        raise ConvergenceError(f"overflow during refinement from z0={z0}") from err
    raise ConvergenceError(f"newton did not reach tol={tol} from z0={z0}")


def solve_term(
    eq: Equation,
    k: int,
    s_range: tuple[int, int],
    J: int = 30,
    tol: float = 1e-9,
    diagnostics: list[str] | None = None,
) -> list[RootRecord]:
    """Run every branch of term k: series, Newton rescue, residual filter."""
    diags = diagnostics if diagnostics is not None else []
    out: list[RootRecord] = []
    m_k, _ = eq.term(k)
    if m_k == 0:
        return out
    for b in enumerate_branches(eq, k, *s_range):
        seed = None
        series_terms = 0
        converged = False
        try:
            rec = lagrange_root(eq, b, J)
            seed, series_terms, converged = rec.z, rec.series_terms, rec.converged
        except SeriesDivergenceError as err:
            diags.append(f"branch {b}: series diverged after {err.terms} terms")
            seed = err.partial
        except (DomainError, ConvergenceError, OverflowError) as err:
            diags.append(f"branch {b}: {err}")
            continue
        if seed is None or not (
            math.isfinite(complex(seed).real) and math.isfinite(complex(seed).imag)
        ):
            diags.append(f"branch {b}: unusable seed")
            continue
        final = None
        try:
            ref = newton_refine(eq, seed, tol=tol, branch=b)
            final = replace(ref, series_terms=series_terms, converged=converged)
        except (ConvergenceError, DomainError) as err:
            diags.append(f"branch {b}: refinement failed: {err}")
            residual = eq.residual(seed)
            if residual <= tol * max(1.0, abs(seed)):
                final = RootRecord(
                    z=seed,
                    branch=b,
                    residual=residual,
                    series_terms=series_terms,
                    refined=False,
                    converged=converged,
                )
        if final is not None:
            out.append(final)
    return out


def solve_all(
    eq: Equation,
    s_range: tuple[int, int] = (-2, 2),
    J: int = 30,
    tol: float = 1e-9,
    dedup_tol: float = 1e-8,
    radius: float = 1.0,
) -> RootField:
    """Union of per-branch series roots over every invertible term.

    Terms are attempted smallest |m_k| first (the better-conditioned
    expansions), every branch failure is recorded in the field's
    diagnostics, and all kept roots satisfy the residual contract
    |sigma(z)| <= tol * max(1, |z|).  Records are sorted by (k, q, s)
    before deduplication so the output is schedule-independent.
    """
    field = RootField(dedup_tol=dedup_tol)
    ks = sorted(
        (k for k in range(1, eq.n + 1) if eq.terms[k - 1][0] != 0),
        key=lambda k: (abs(eq.terms[k - 1][0]), k),
    )
    records: list[RootRecord] = []
    for k in ks:
        try:
            report = convergence_check(eq, k, radius=radius)
            if not report.ok:
                field.diagnostics.append(
                    f"term {k}: contour margin {report.margin:.3g} (advisory)"
                )
        except (DomainError, ConvergenceError, OverflowError) as err:
            field.diagnostics.append(f"term {k}: convergence check failed: {err}")
        records.extend(solve_term(eq, k, s_range, J, tol, field.diagnostics))
    records.sort(key=lambda r: (r.branch.k, r.branch.q, r.branch.s))
    field.extend(records)
    return field
