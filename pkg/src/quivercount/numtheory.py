"""Small number-theoretic helpers: divisors, Mobius function, binomials."""

from __future__ import annotations


def divisors(n: int) -> list[int]:
    """Positive divisors of n >= 1 in increasing order."""
    if n < 1:
        raise ValueError("divisors defined for n >= 1")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def mobius(n: int) -> int:
    """The number-theoretic Mobius function (not the slope function)."""
    if n < 1:
        raise ValueError("mobius defined for n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def integer_binomial(n: int, k: int) -> int:
    """Generalized binomial C(n, k) for any integer n and k >= 0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    num = 1
    den = 1
    for j in range(k):
        num *= n - j
        den *= j + 1
    assert num % den == 0
    return num // den
