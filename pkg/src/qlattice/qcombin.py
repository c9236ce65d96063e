"""Exact q-combinatorics: Gaussian binomials, full-order prime search, bound reports.

Everything that feeds an integer decision is computed with exact integer
arithmetic. The two advisory growth functions (``g_of``, ``h_of``) are the only
floating-point values in the module and are never used to branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Union

from .errors import DomainError, ResourceLimitError, UnsupportedParametersError

DEFAULT_FACTOR_CEILING = 10 ** 7

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=None)
def qbinom(n: int, k: int, q: int) -> int:
    """Gaussian binomial [n k]_q: the number of k-dim subspaces of GF(q)^n.

    Integer recurrence [n k]_q = [n-1 k-1]_q + q^k [n-1 k]_q. k outside [0, n]
    gives 0; the memo table is keyed by (n, k, q) and shared process-wide
    (lru_cache insertion is internally locked).
    """
    if n < 0:
        raise DomainError(f"qbinom: n must be >= 0, got {n}")
    if q < 2:
        raise DomainError(f"qbinom: q must be >= 2, got {q}")
    if k < 0 or k > n:
        return 0
    if k == 0 or k == n:
        return 1
    return qbinom(n - 1, k - 1, q) + q ** k * qbinom(n - 1, k, q)


def qbinom_product(n: int, k: int, q: int) -> int:
    """Same value via the product formula, with exact divisibility asserted.

    Kept as an independent route for cross-checks.
    """
    if n < 0 or q < 2:
        raise DomainError("qbinom_product: need n >= 0 and q >= 2")
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    if num % den:
        raise ArithmeticError("q-binomial product did not divide exactly")
    return num // den


def alt_sum(n: int, q: int) -> int:
    """Signed lattice sum  sum_d [n d]_q (-1)^d q^(d(d-1)/2).

    Equals 1 for n = 0 and 0 for every n >= 1; evaluated literally so tests can
    confirm the cancellation rather than assume it.
    """
    if n < 0 or q < 2:
        raise DomainError("alt_sum: need n >= 0 and q >= 2")
    return sum(qbinom(n, d, q) * (-1) ** d * q ** (d * (d - 1) // 2) for d in range(n + 1))


def capital_N(n: int, s: int, r: int, q: int) -> int:
    """Window sum [n s]_q + [n s-1]_q + ... + [n s-r+1]_q (r terms).

    Out-of-range indices contribute 0 under the qbinom zero convention.
    """
    if r < 1:
        raise DomainError(f"capital_N: r must be >= 1, got {r}")
    if n < 0 or q < 2:
        raise DomainError("capital_N: need n >= 0 and q >= 2")
    return sum(qbinom(n, s - i, q) for i in range(r))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (fixed witness set, exact below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes() -> Iterator[int]:
    """Incremental sieve: the infinite ascending stream of primes."""
    yield 2
    composites: dict[int, int] = {}
    n = 3
    while True:
        step = composites.pop(n, 0)
        if step:
            nxt = n + step
            while nxt in composites:
                nxt += step
            composites[nxt] = step
        else:
            yield n
            composites[n * n] = 2 * n
        n += 2


def trial_factor(m: int, ceiling: Optional[int] = None) -> tuple[list[int], int]:
    """Trial-divide m: (ascending distinct prime factors found, remaining cofactor).

    Division stops at min(ceiling, isqrt of the shrinking remainder); the
    cofactor is 1 when the factorization completed.
    """
    if m < 1:
        raise DomainError(f"trial_factor: m must be >= 1, got {m}")
    found: list[int] = []
    rem = m
    d = 2
    while d * d <= rem and (ceiling is None or d <= ceiling):
        if rem % d == 0:
            found.append(d)
            while rem % d == 0:
                rem //= d
        d += 1 if d == 2 else 2
    if rem > 1 and d * d > rem:
        # scan covered the whole sqrt range, so the remainder is prime
        found.append(rem)
        rem = 1
    return found, rem


def multiplicative_order(q: int, p: int) -> int:
    """Least i >= 1 with q^i = 1 mod p, for p prime not dividing q."""
    if p < 2 or not is_prime(p):
        raise DomainError(f"multiplicative_order: p must be prime, got {p}")
    if q % p == 0:
        raise DomainError(f"multiplicative_order: {p} divides q = {q}")
    phi = p - 1
    factors, _ = trial_factor(phi)
    order = phi
    for f in factors:
        while order % f == 0 and pow(q, order // f, p) == 1:
            order //= f
    return order


@dataclass(frozen=True)
class ZsigmondyException:
    """Marker for the two (q, b) pairs with no full-order prime divisor.

    ``clause`` identifies which exclusion fired: "q_plus_one_power_of_two"
    (b = 2 with q+1 a power of two) or "q_2_b_6" (q = 2, b = 6).
    """

    q: int
    b: int
    clause: str

    def message(self) -> str:
        if self.clause == "q_plus_one_power_of_two":
            return f"q+1 = {self.q + 1} is a power of two and b = 2: no full-order prime"
        return "q = 2, b = 6: no full-order prime"


def zsigmondy_exception(q: int, b: int) -> Optional[ZsigmondyException]:
    """The exception marker for (q, b), or None when a full-order prime exists."""
    if q < 2 or b < 2:
        raise DomainError(f"zsigmondy_exception: need q >= 2 and b >= 2, got ({q}, {b})")
    if b == 2 and (q + 1) & q == 0:
        return ZsigmondyException(q, b, "q_plus_one_power_of_two")
    if q == 2 and b == 6:
        return ZsigmondyException(q, b, "q_2_b_6")
    return None


def zsigmondy_prime(
    q: int, b: int, ceiling: int = DEFAULT_FACTOR_CEILING
) -> Union[int, ZsigmondyException]:
    """Smallest prime p dividing q^b - 1 whose multiplicative order at q is b.

    The two excluded (q, b) shapes return a ZsigmondyException marker instead
    of a prime; that marker is an answer, not an error. Factoring is trial
    division up to ``ceiling`` plus a deterministic primality check on the
    cofactor; an unfactorable composite cofactor raises ResourceLimitError
    carrying the partial factorization.
    """
    exc = zsigmondy_exception(q, b)
    if exc is not None:
        return exc
    m = q ** b - 1
    found, rem = trial_factor(m, ceiling)
    if rem > 1:
        if is_prime(rem):
            found.append(rem)
        else:
            raise ResourceLimitError(
                f"cofactor {rem} of {q}^{b}-1 is composite and exceeds the "
                f"trial-division ceiling {ceiling}",
                partial={"factored": found, "cofactor": rem},
            )
    for p in found:
        if multiplicative_order(q, p) == b:
            if pow(q, b, p) != 1:  # re-verify before reporting
                raise ArithmeticError("order verification failed")
            return p
    raise ArithmeticError(f"no full-order prime divisor of {q}^{b}-1 found")


def require_zsigmondy_prime(q: int, b: int, ceiling: int = DEFAULT_FACTOR_CEILING) -> int:
    """zsigmondy_prime, with the exception marker promoted to an error."""
    result = zsigmondy_prime(q, b, ceiling)
    if isinstance(result, ZsigmondyException):
        raise UnsupportedParametersError(
            f"(q, b) = ({q}, {b}) is excluded: {result.message()}", clause=result.clause
        )
    return result


def primorial_prime_set(t: int, n: int) -> list[int]:
    """Successive primes strictly above t until their product strictly exceeds n.

    Greedy-minimal: dropping the last member makes the product <= n.
    """
    if t < 1 or n < 1:
        raise DomainError(f"primorial_prime_set: need t >= 1 and n >= 1, got ({t}, {n})")
    out: list[int] = []
    prod = 1
    for p in primes():
        if p <= t:
            continue
        if prod > n:
            break
        out.append(p)
        prod *= p
    return out


def g_of(t: int, n: int) -> float:
    """Advisory growth term 2(2t + ln n)/ln(2t + ln n). Never branch on this."""
    if t < 2 or n < 1:
        raise DomainError(f"g_of: need t >= 2 and n >= 1, got ({t}, {n})")
    x = 2 * t + math.log(n)
    return 2 * x / math.log(x)


def h_of(t: int, n: int) -> float:
    """Advisory min(g_of(t, n), ln n / ln t). Never branch on this."""
    if t < 2 or n < 1:
        raise DomainError(f"h_of: need t >= 2 and n >= 1, got ({t}, {n})")
    return min(g_of(t, n), math.log(n) / math.log(t))


def ceil_log(b: int, n: int) -> int:
    """Smallest k >= 0 with b^k >= n, by pure integer comparison."""
    if b < 2 or n < 1:
        raise DomainError(f"ceil_log: need b >= 2 and n >= 1, got ({b}, {n})")
    k, v = 0, 1
    while v < n:
        v *= b
        k += 1
    return k


def prime_power(q: int) -> Optional[tuple[int, int]]:
    """(p, e) with q = p^e for p prime, or None when q is not a prime power."""
    if q < 2:
        return None
    found, _ = trial_factor(q)
    if len(found) != 1:
        return None
    p = found[0]
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


_THEOREM_IDS = ("theorem_main", "frac_general", "frac_singleton", "frankl_graham")


@dataclass(frozen=True)
class BoundReport:
    """Outcome of a bound evaluation.

    ``bound`` is an exact nonnegative integer; real-valued intermediates live in
    ``auxiliaries`` as decimal strings. ``branch`` is one of a small fixed label
    set per theorem_id, so sweep scripts can group case splits.
    """

    theorem_id: str
    inputs_echo: dict
    branch: str
    bound: int
    auxiliaries: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.theorem_id not in _THEOREM_IDS:
            raise DomainError(f"unknown theorem_id {self.theorem_id!r}")
        if self.bound < 0:
            raise DomainError("bound must be nonnegative")

    def to_json_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "inputs": self.inputs_echo,
            "branch": self.branch,
            "bound": self.bound,
            "auxiliaries": self.auxiliaries,
        }
