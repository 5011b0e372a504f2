"""Legendre/Jacobi symbols and Lucas sequences."""
from __future__ import annotations

from dataclasses import dataclass, field

from .exact_arith import ParameterError, check_odd_prime


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    check_odd_prime(p)
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, via quadratic reciprocity."""
    if not isinstance(n, int) or n < 1 or n % 2 == 0:
        raise ParameterError(f"Jacobi symbol needs odd positive n, got {n!r}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class LucasParams:
    A: int
    B: int
    delta: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", self.A * self.A - 4 * self.B)

    @classmethod
    def for_m(cls, m: int) -> "LucasParams":
        """The family u_n(m - 2, 1), whose discriminant is m(m - 4)."""
        return cls(m - 2, 1)


def lucas_u(n: int, params: LucasParams) -> int:
    """u_n(A, B) by fast doubling on the pair (u_k, u_{k+1})."""
    if n < 0:
        raise ParameterError("lucas_u needs n >= 0")
    A, B = params.A, params.B
    u, w = 0, 1  # u_k, u_{k+1}
    for bit in bin(n)[2:]:
        u, w = u * (2 * w - A * u), w * w - B * u * u
        if bit == "1":
            u, w = w, A * w - B * u
    return u


def lucas_u_iter(n: int, params: LucasParams) -> int:
    """u_n by the defining two-term recurrence."""
    u, w = 0, 1
    for _ in range(n):
        u, w = w, params.A * w - params.B * u
    return u


def lucas_entry(p: int, params: LucasParams) -> int:
    """u_{p - (delta/p)}, the term p is known to divide when p does not divide B."""
    return lucas_u(p - legendre(params.delta, p), params)
