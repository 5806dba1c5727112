"""Closed-form and hypergeometric trinomial solvers.

Two families:

* x^r2 + m1 x^r1 + t = 0.  The series engine's derivative tower collapses
  to a Gamma-ratio closed form per term (``closed_term``), which drives the
  per-winding subfield solvers ``roots_L2`` (invert the r2 term, windings
  s = 0..r2-1) and ``roots_L1`` (roles swapped).  The closed form is also
  the cross-check that pins the jet engine: term j of the generic series
  must equal closed_term(j) to ~1e-11.

* x^n - x + t = 0.  ``xn_series_root`` sums the single-series solution for
  the root continuous from each (n-1)-th root of unity, and
  ``xn_hypergeometric_root`` resums the same series as n-1 generalized
  hypergeometric functions by splitting the term index modulo n-1.
  ``quintic_bring_jerrard`` is the n = 5 case assembled explicitly: the
  root near 0 is t * 4F3(1/5,2/5,3/5,4/5; 1/2,3/4,5/4; 3125 t^4/256) and
  the four roots near the fourth roots of unity mix the 4F3 triple with a
  residue-class 5F4 tail.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from . import specialfn
from .engine import BranchSpec, Equation, RootRecord, TermFunction, lagrange_root, newton_refine
from .errors import BasinEscapeError, ConvergenceError, DomainError, PoleError

__all__ = [
    "TrinomialSpec",
    "closed_term",
    "roots_L1",
    "roots_L2",
    "xn_series_root",
    "xn_hypergeometric_root",
    "quintic_bring_jerrard",
]

_OVERFLOW = 1e100


@dataclass(frozen=True)
class TrinomialSpec:
    """x^r2 + m1 * x^r1 + t = 0 with nondegenerate exponents and constants."""

    r1: complex
    r2: complex
    m1: complex
    t: complex

    def __post_init__(self):
        r1, r2 = complex(self.r1), complex(self.r2)
        if r1 == r2 or r1 == 0 or r2 == 0:
            raise DomainError("trinomial needs distinct nonzero exponents")
        if complex(self.m1) == 0 or complex(self.t) == 0:
            raise DomainError(
                "degenerate trinomial (m1 = 0 or t = 0): solve the binomial directly"
            )
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "m1", complex(self.m1))
        object.__setattr__(self, "t", complex(self.t))

    def equation(self) -> Equation:
        return Equation(
            terms=((1.0, TermFunction.power(self.r2)), (self.m1, TermFunction.power(self.r1))),
            t=self.t,
        )


def _int_or_none(r: complex) -> int | None:
    if r.imag != 0:
        return None
    n = round(r.real)
    return n if abs(r.real - n) < 1e-12 else None


def closed_term(j: int, s: int, spec: TrinomialSpec, which: str = "L2") -> complex:
    """Gamma-ratio closed form of the j-th derivative tower entry.

    which = "L2": invert the r2 term (expansion center w -> -t):
        e^(2 pi i s/r2) (m1 e^(2 pi i s r1/r2))^j w^((1+j r1-j r2)/r2)
        * Gamma((1+j r1)/r2) / (r2 Gamma((1+j r1+r2-j r2)/r2))
    which = "L1": same with r1 <-> r2, m1 -> 1/m1, center w -> -t/m1.

    Gamma poles are taken as limits via gamma_ratio: a denominator pole
    makes the term vanish, simultaneous poles give the finite limit.
    Principal branches of the fractional powers of the center, matching the
    jet engine's convention.
    """
    if j < 1:
        raise DomainError("closed_term needs j >= 1")
    if which == "L2":
        ra, rb, coef, w0 = spec.r1, spec.r2, spec.m1, -spec.t
    elif which == "L1":
        ra, rb, coef, w0 = spec.r2, spec.r1, 1.0 / spec.m1, -spec.t / spec.m1
    else:
        raise DomainError("which must be 'L1' or 'L2'")
    w0 = specialfn.principal(w0)
    # rb is the inverted exponent, ra the companion exponent.
    phase = cmath.exp(2j * math.pi * s / rb)
    base = coef * cmath.exp(2j * math.pi * s * ra / rb)
    expo = (1.0 + j * ra - j * rb) / rb
    ratio = specialfn.gamma_ratio((1.0 + j * ra) / rb, (1.0 + j * ra) / rb + 1.0 - j)
    if ratio == 0:
        return 0j
    return phase * base ** j * cmath.exp(expo * cmath.log(w0)) * ratio / rb


def _series_subfield(spec: TrinomialSpec, which: str, windings, J: int, diagnostics=None):
    """Closed-form series per winding, Newton-rescued, deduplicated."""
    diags = diagnostics if diagnostics is not None else []
    eq = spec.equation()
    if which == "L2":
        rb, w0, k_idx = spec.r2, specialfn.principal(-spec.t), 1
    else:
        rb, w0, k_idx = spec.r1, specialfn.principal(-spec.t / spec.m1), 2
    records: list[RootRecord] = []
    for s in windings:
        z = specialfn.root_branch(w0, rb, s)
        converged = False
        terms = 0
        fact = 1.0
        last = math.inf
        best = z  # smallest-term truncation for the divergent branches
        best_term = math.inf
        for j in range(1, J + 1):
            fact *= j
            try:
                term = (-1.0) ** j / fact * closed_term(j, s, spec, which)
            except PoleError:
                diags.append(f"{which} s={s}: diverging gamma ratio at term {j}")
                break
            if abs(term) > _OVERFLOW or not (
                math.isfinite(term.real) and math.isfinite(term.imag)
            ):
                diags.append(f"{which} s={s}: series overflow at term {j}")
                break
            z += term
            terms = j
            last = abs(term)
            if last < best_term:
                best_term = last
                best = z
        converged = last < 1e-10 * max(1.0, abs(z))
        if not converged:
            z = best
        rec = None
        try:
            ref = newton_refine(eq, z, tol=1e-10, branch=BranchSpec(k=k_idx, q=1, s=s))
            rec = replace(ref, series_terms=terms, converged=converged)
        except (ConvergenceError, DomainError, OverflowError) as err:
            diags.append(f"{which} s={s}: refinement failed: {err}")
            residual = eq.residual(z)
            if residual <= 1e-10 * max(1.0, abs(z)):
                rec = RootRecord(
                    z=z,
                    branch=BranchSpec(k=k_idx, q=1, s=s),
                    residual=residual,
                    series_terms=terms,
                    converged=converged,
                )
        if rec is not None:
            records.append(rec)
    # Dedup within the subfield; coincident branches mean a multiple root.
    out: list[RootRecord] = []
    for rec in records:
        for i, kept in enumerate(out):
            if abs(kept.z - rec.z) <= 1e-8 * max(1.0, abs(kept.z), abs(rec.z)):
                merged = kept.branches + rec.branches
                best = rec if rec.residual < kept.residual else kept
                out[i] = replace(best, branches=merged)
                diags.append(
                    f"{which}: windings {[b.s for b in merged]} coincide at {best.z:.12g}"
                    " (multiple root)"
                )
                break
        else:
            out.append(rec)
    return out


def roots_L2(spec: TrinomialSpec, J: int = 40, windings=None, diagnostics=None):
    """Subfield from inverting the r2 term, one series root per winding s2.

    Integer r2 > 0 enumerates the full set s2 = 0..r2-1; otherwise the
    caller must supply the windings.
    """
    if windings is None:
        n = _int_or_none(spec.r2)
        if n is None or n <= 0:
            raise DomainError("non-integer r2: supply windings explicitly")
        windings = range(n)
    return _series_subfield(spec, "L2", windings, J, diagnostics)


def roots_L1(spec: TrinomialSpec, J: int = 40, windings=None, diagnostics=None):
    """Subfield from inverting the r1 term (roles of r1/r2 swapped)."""
    if windings is None:
        n = _int_or_none(spec.r1)
        if n is None or n <= 0:
            raise DomainError("non-integer r1: supply windings explicitly")
        windings = range(n)
    return _series_subfield(spec, "L1", windings, J, diagnostics)


# -- x^n - x + t -------------------------------------------------------


def _xn_gamma_factor(n: int, q: int) -> float:
    """Gamma(nq/(n-1)+1) / (Gamma(q/(n-1)+1) Gamma(q+2)), by log-gamma."""
    nm1 = n - 1
    return math.exp(
        math.lgamma(n * q / nm1 + 1.0) - math.lgamma(q / nm1 + 1.0) - math.lgamma(q + 2.0)
    )


def xn_series_root(n: int, t: complex, k: int = 0, J: int = 200) -> complex:
    """Root of x^n - x + t continuous from the unity root e^(-2 pi i k/(n-1)).

    x_k = u^-1 - t/(n-1) * sum_q (t u)^q Gamma(nq/(n-1)+1)
                                   / (Gamma(q/(n-1)+1) Gamma(q+2)),
    with u = e^(2 pi i k/(n-1)).  Converges for
    |t| < (n-1) / n^(n/(n-1)); beyond that the terms grow and the partial
    sum is flagged by raising ConvergenceError.
    """
    if n < 2:
        raise DomainError("xn_series_root needs n >= 2")
    if abs(k) > n // 2:
        raise DomainError(f"|k| must be <= floor(n/2) = {n // 2}")
    t = complex(t)
    u = cmath.exp(2j * math.pi * k / (n - 1))
    if t == 0:
        return 1.0 / u
    acc = 0j
    arg = t * u
    powv = 1.0 + 0j
    last = math.inf
    for q in range(J + 1):
        term = powv * _xn_gamma_factor(n, q)
        new = abs(term)
        if new > _OVERFLOW:
            raise ConvergenceError(f"xn series diverged at term {q} (|t| beyond radius)")
        acc += term
        powv *= arg
        if q > 4 and new < 1e-16 * max(1.0, abs(acc)):
            break
        last = new
    if last > 1e-12 * max(1.0, abs(acc)) and abs(arg) >= 1.0:
        raise ConvergenceError("xn series did not converge (|t| beyond radius)")
    return 1.0 / u - t / (n - 1) * acc


def _xn_residue_class(n: int, r: int):
    """pfq parameter lists for the residue-r slice of the x^n - x + t series."""
    nm1 = n - 1
    uppers = [r / nm1 + i / n for i in range(1, n)]
    lowers = [(r + 1 + i) / nm1 for i in range(1, n)]
    unit = next((i for i, b in enumerate(lowers) if abs(b - 1.0) < 1e-12), None)
    if unit is not None:
        lowers.pop(unit)
    else:
        uppers.append(1.0)
    return uppers, lowers


def xn_hypergeometric_root(n: int, t: complex, k: int = 0, tol: float = 1e-15) -> complex:
    """Same root as xn_series_root, resummed hypergeometrically.

    The series index is split modulo n-1; each residue class r is a
    generalized hypergeometric function of Z = n^n t^(n-1) / (n-1)^(n-1):

    x = u^-1 - t/(n-1) * sum_{r=0}^{n-2} (t u)^r c0(r) F_r(Z),

    c0(r) = Gamma(nr/(n-1)+1) / (Gamma(r/(n-1)+1) (r+1)!).
    """
    if n < 2:
        raise DomainError("xn_hypergeometric_root needs n >= 2")
    t = complex(t)
    u = cmath.exp(2j * math.pi * k / (n - 1))
    if t == 0:
        return 1.0 / u
    nm1 = n - 1
    z_arg = t ** nm1 * n ** n / nm1 ** nm1
    if abs(z_arg) >= 1.0:
        raise ConvergenceError(f"hypergeometric argument |Z|={abs(z_arg):.3g} >= 1")
    acc = 0j
    for r in range(nm1):
        uppers, lowers = _xn_residue_class(n, r)
        f = specialfn.pfq(uppers, lowers, z_arg, tol=tol)
        acc += (t * u) ** r * _xn_gamma_factor(n, r) * f
    return 1.0 / u - t / nm1 * acc


_QUINTIC_F2 = ([0.2, 0.4, 0.6, 0.8], [0.5, 0.75, 1.25])


def quintic_bring_jerrard(t: complex, tol: float = 1e-15) -> list[complex]:
    """All five roots of x^5 - x + t via 4F3/5F4 hypergeometric assembly.

    Requires |3125 t^4 / 256| < 1.  Returned order: the root continuous
    from 0, then the roots continuous from 1, -1, i, -i.  Each root is
    residual-checked against x^5 - x + t to 1e-9 before being returned.
    """
    t = complex(t)
    z_arg = 3125.0 * t ** 4 / 256.0
    if abs(z_arg) >= 1.0:
        raise DomainError(f"quintic argument |3125 t^4/256| = {abs(z_arg):.3g} >= 1")
    roots = [t * specialfn.pfq(*_QUINTIC_F2, z_arg, tol=tol)]
    for k in (0, 2, 3, 1):  # leading values 1, -1, i, -i
        roots.append(xn_hypergeometric_root(5, t, k=k, tol=tol))
    for x in roots:
        res = abs(x ** 5 - x + t)
        if res > 1e-9 * max(1.0, abs(x)):
            raise ConvergenceError(f"quintic root {x} residual {res:.3g} exceeds 1e-9")
    return roots
