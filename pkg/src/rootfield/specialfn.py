"""Complex special functions and branch-resolved elementary inverses.

Everything here is a pure function of its arguments.  The solvers lean on
four groups:

* Gamma machinery: ``gamma``, ``log_gamma``, ``gamma_ratio``, ``digamma``.
  Gamma uses the Lanczos approximation (g=7, 9 coefficients) with the
  reflection formula for Re z < 1/2; the ratio is evaluated pole-safely so
  closed-form series terms that hit Gamma poles come out as their finite
  limits instead of NaN.
* ``pfq``: generalized hypergeometric series by forward term-ratio
  recurrence (never per-term Gamma quotients, which overflow first).
* ``lambert_w``: branch-indexed product log by Halley iteration from
  region-aware seeds; serves as the residual oracle for the z*e^z solvers.
* Branch-indexed elementary inverses (``log_branch``, ``root_branch``,
  ``arcsin_branch``, ``arccos_branch``): principal values plus explicit
  winding terms, exactly the bookkeeping the series engine enumerates.
"""

from __future__ import annotations

import cmath
import math

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "gamma",
    "log_gamma",
    "gamma_ratio",
    "digamma",
    "pfq",
    "pfq_terms",
    "lambert_w",
    "log_branch",
    "root_branch",
    "arcsin_branch",
    "arccos_branch",
    "EULER_GAMMA",
]

EULER_GAMMA = 0.5772156649015328606

TWO_PI = 2.0 * math.pi


def principal(z: complex) -> complex:
    """Normalize a real-axis value to the upper side of the branch cuts.

    IEEE signed zeros make -0.0j inputs land on the lower side of the
    log/asin/acos cuts; every principal-branch evaluation in this package
    resolves imag == +/-0.0 to +0.0 so branch choices are deterministic.
    """
    z = complex(z)
    if z.imag == 0.0:
        return complex(z.real, 0.0)
    return z

# Lanczos coefficients, g = 7.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_LOG_SQRT_TWO_PI = 0.91893853320467274178


def _nonpos_int(z: complex, tol: float = 1e-12) -> int | None:
    """Return n >= 0 such that z is (numerically) the pole at -n, else None."""
    z = complex(z)
    if abs(z.imag) > tol:
        return None
    n = round(z.real)
    if n > 0 or abs(z.real - n) > tol:
        return None
    return -n


def gamma(z: complex) -> complex:
    """Complex Gamma function.

    Raises PoleError at the nonpositive integers.  Relative accuracy is
    ~1e-14 over the solver's working range (|z| <= 50 away from poles).
    """
    z = complex(z)
    if _nonpos_int(z, tol=0.0) is not None:
        raise PoleError(f"gamma pole at z={z}")
    if z.real < 0.5:
        # Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        s = cmath.sin(cmath.pi * z)
        if s == 0:
            raise PoleError(f"gamma pole at z={z}")
        return cmath.pi / (s * gamma(1.0 - z))
    zz = z - 1.0
    x = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        x += c / (zz + i)
    t = zz + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (zz + 0.5) * cmath.exp(-t) * x


def log_gamma(z: complex) -> complex:
    """log Gamma(z) via the same Lanczos kernel.

    The branch of the result is whatever the kernel produces; callers that
    exponentiate differences (gamma_ratio) are insensitive to 2*pi*i jumps.
    """
    z = complex(z)
    if _nonpos_int(z, tol=0.0) is not None:
        raise PoleError(f"log_gamma pole at z={z}")
    if z.real < 0.5:
        s = cmath.sin(cmath.pi * z)
        if s == 0:
            raise PoleError(f"log_gamma pole at z={z}")
        return cmath.log(cmath.pi) - cmath.log(s) - log_gamma(1.0 - z)
    zz = z - 1.0
    x = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        x += c / (zz + i)
    t = zz + _LANCZOS_G + 0.5
    return _LOG_SQRT_TWO_PI + (zz + 0.5) * cmath.log(t) - t + cmath.log(x)


def gamma_ratio(a: complex, b: complex, tol: float = 1e-9) -> complex:
    """Gamma(a)/Gamma(b) with the poles taken as limits.

    * both a and b at nonpositive integers -na, -nb: the limit
      (-1)^(na+nb) * nb! / na!  (both arguments perturbed by the same
      epsilon, which is how the trinomial closed forms reach this case);
    * only b at a pole: exactly 0;
    * only a at a pole: the ratio diverges -> PoleError.

    Away from poles the ratio goes through log-gamma differences so large
    arguments cannot overflow prematurely.
    """
    a = complex(a)
    b = complex(b)
    na = _nonpos_int(a, tol)
    nb = _nonpos_int(b, tol)
    if na is not None and nb is not None:
        sign = -1.0 if (na + nb) % 2 else 1.0
        return complex(sign * math.exp(math.lgamma(nb + 1) - math.lgamma(na + 1)))
    if nb is not None:
        return 0.0 + 0.0j
    if na is not None:
        raise PoleError(f"gamma_ratio diverges: numerator pole at {a}")
    return cmath.exp(log_gamma(a) - log_gamma(b))


# Bernoulli numbers B_2 .. B_14 for the digamma asymptotic tail.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)


def digamma(x: float) -> float:
    """Digamma for real x > 0 (recurrence up to x >= 10, then asymptotics)."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    p = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        tail += b / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - tail


def pfq_terms(
    a: list[complex],
    b: list[complex],
    z: complex,
    tol: float = 1e-15,
    max_terms: int = 1_000_000,
) -> tuple[complex, int]:
    """Sum pFq(a; b; z), returning (value, number of terms used).

    Stops once |term| < tol * |partial sum| holds for 3 consecutive terms.
    Raises DomainError for lower parameters at nonpositive integers (unless
    the series terminates first through an upper parameter) and
    ConvergenceError when the series cannot converge (p > q+1, or p = q+1
    with |z| >= 1 and growing terms) or the term budget runs out.
    """
    a = [complex(v) for v in a]
    b = [complex(v) for v in b]
    z = complex(z)

    # Termination through an upper parameter makes the series a polynomial.
    cutoff = None
    for v in a:
        n = _nonpos_int(v)
        if n is not None:
            cutoff = n if cutoff is None else min(cutoff, n)
    for v in b:
        n = _nonpos_int(v)
        if n is not None and (cutoff is None or n < cutoff):
            raise DomainError(f"pfq lower parameter {v} is a nonpositive integer")

    if z == 0:
        return 1.0 + 0.0j, 1
    p, q = len(a), len(b)
    if cutoff is None:
        if p > q + 1:
            raise ConvergenceError(f"pfq with p={p} > q+1={q + 1} diverges for z != 0")
        if p == q + 1 and abs(z) >= 1.0:
            raise ConvergenceError(f"pfq with p=q+1 requires |z| < 1, got |z|={abs(z)}")

    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    small_streak = 0
    growth_streak = 0
    k = 0
    while k < max_terms:
        if cutoff is not None and k >= cutoff:
            return total, k + 1
        num = 1.0 + 0.0j
        for v in a:
            num *= v + k
        den = 1.0 + 0.0j
        for v in b:
            den *= v + k
        den *= k + 1
        new_term = term * num / den * z
        if abs(new_term) > abs(term) and abs(term) > 1.0:
            growth_streak += 1
            if growth_streak >= 5:
                raise ConvergenceError("pfq terms are growing; series diverges")
        else:
            growth_streak = 0
        term = new_term
        total += term
        k += 1
        if abs(term) < tol * abs(total):
            small_streak += 1
            if small_streak >= 3:
                return total, k + 1
        else:
            small_streak = 0
    raise ConvergenceError(f"pfq did not converge within {max_terms} terms")


def pfq(a: list[complex], b: list[complex], z: complex, tol: float = 1e-15) -> complex:
    """Generalized hypergeometric pFq(a; b; z); see pfq_terms."""
    value, _ = pfq_terms(a, b, z, tol)
    return value


def _lambert_seed(k: int, t: complex) -> complex:
    """Branch-aware starting point for the Halley iteration."""
    if k == 0:
        if abs(t) < 0.25:
            # Series around 0: W = t - t^2 + (3/2) t^3 - ...
            return t * (1.0 - t + 1.5 * t * t)
        if abs(t + 1.0 / math.e) < 0.25:
            p = cmath.sqrt(2.0 * (math.e * t + 1.0))
            return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
        lt = cmath.log(t)
        return lt - cmath.log(lt) if abs(lt) > 1.0 else lt
    if k == -1 and t.imag == 0.0 and -1.0 / math.e < t.real < 0.0:
        # Real branch: W_-1 maps (-1/e, 0) onto (-inf, -1].
        lt = math.log(-t.real)
        if abs(t + 1.0 / math.e) < 0.12:
            p = -cmath.sqrt(2.0 * (math.e * t + 1.0))
            return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
        return lt - math.log(-lt)
    lt = cmath.log(t) + 2.0j * math.pi * k
    return lt - cmath.log(lt)


def lambert_w(k: int, t: complex, tol: float = 1e-13, max_iter: int = 100) -> complex:
    """Branch k of the product log: w with w*e^w = t.

    Halley iteration from a region-aware seed; the returned value satisfies
    |w e^w - t| <= tol * max(1, |t|).
    """
    t = principal(t)
    if t == 0:
        if k == 0:
            return 0.0 + 0.0j
        raise DomainError("lambert_w branch k != 0 undefined at t = 0")
    w = complex(_lambert_seed(int(k), t))
    target = tol * max(1.0, abs(t))
    for _ in range(max_iter):
        ew = cmath.exp(w)
        f = w * ew - t
        if abs(f) <= target:
            return w
        wp1 = w + 1.0
        if wp1 == 0:
            w += 1e-8
            continue
        # Halley: w <- w - f / (e^w (w+1) - (w+2) f / (2 w + 2))
        w = w - f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
    if abs(w * cmath.exp(w) - t) <= target:
        return w
    raise ConvergenceError(f"lambert_w({k}, {t}) did not converge in {max_iter} iterations")


def log_branch(z: complex, s: int) -> complex:
    """Principal log plus winding: Log z + 2*pi*i*s."""
    z = principal(z)
    if z == 0:
        raise DomainError("log_branch undefined at z = 0")
    return cmath.log(z) + TWO_PI * 1j * s


def root_branch(z: complex, r: complex, s: int) -> complex:
    """Branch s of the r-th root: z^(1/r) * e^(2*pi*i*s/r), principal power."""
    z = principal(z)
    r = complex(r)
    if z == 0:
        raise DomainError("root_branch undefined at z = 0")
    if r == 0:
        raise DomainError("root_branch undefined for r = 0")
    return cmath.exp(cmath.log(z) / r) * cmath.exp(TWO_PI * 1j * s / r)


def arcsin_branch(z: complex, q: int, s: int) -> complex:
    """Inverse-sine category q with winding s.

    q = 1: +Arcsin(z) + 2*pi*s;  q = 2: pi - Arcsin(z) + 2*pi*s.
    """
    z = principal(z)
    if q == 1:
        return cmath.asin(z) + TWO_PI * s
    if q == 2:
        return math.pi - cmath.asin(z) + TWO_PI * s
    raise DomainError(f"arcsin_branch category must be 1 or 2, got {q}")


def arccos_branch(z: complex, q: int, s: int) -> complex:
    """Inverse-cosine category q with winding s.

    q = 1: +Arccos(z) + 2*pi*s;  q = 2: -Arccos(z) + 2*pi*s.
    """
    z = principal(z)
    if q == 1:
        return cmath.acos(z) + TWO_PI * s
    if q == 2:
        return -cmath.acos(z) + TWO_PI * s
    raise DomainError(f"arccos_branch category must be 1 or 2, got {q}")
