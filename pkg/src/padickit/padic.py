"""Capped-relative-precision arithmetic in Z_p and Q_p.

A scalar is unit * p^val with the unit known modulo p^prec for some
prec <= N (the cap).  Every operation returns the precision it can
actually certify, so a long chain of logs and divisions never reports
digits it does not know.  All units are single Python ints reduced mod
p^prec; at desk scale (p^N well below 5^40) nothing fancier is needed.

Exact zero is represented with val = +inf.  A result all of whose known
digits cancel (e.g. x - x) keeps a finite val equal to its absolute
precision and prec = 0: it means "0 modulo p^val, nothing more known".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, PrecisionError

INF = float("inf")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def vp(x: int, p: int) -> int | float:
    """p-adic valuation of a rational integer (INF for 0)."""
    if x == 0:
        return INF
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicParams:
    """An odd prime p and a relative-precision cap N >= 2."""

    p: int
    N: int

    def __post_init__(self):
        if not _is_prime(self.p) or self.p < 3:
            raise DomainError(f"p = {self.p} is not an odd prime")
        if self.N < 2:
            raise DomainError(f"precision cap N = {self.N} must be >= 2")

    def pw(self, k: int) -> int:
        return _ppow(self.p, k)


@lru_cache(maxsize=None)
def _ppow(p: int, k: int) -> int:
    return p**k


class PadicScalar:
    """unit * p^val, unit known mod p^prec (0 < prec <= N), unit % p != 0.

    prec == 0 encodes an unresolved zero: the value is O(p^val).
    """

    __slots__ = ("params", "val", "unit", "prec")

    def __init__(self, params: PadicParams, val, unit: int, prec):
        if val is INF:
            unit, prec = 0, INF
        elif prec == 0:
            unit = 0
        else:
            prec = min(prec, params.N)
            unit %= params.pw(prec)
            if unit % params.p == 0:
                raise ValueError("unit part must be a p-adic unit")
        self.params = params
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- constructors -------------------------------------------------

    @classmethod
    def from_int(cls, params: PadicParams, x: int) -> "PadicScalar":
        if x == 0:
            return cls.zero(params)
        v = vp(x, params.p)
        return cls(params, v, x // params.pw(v), params.N)

    @classmethod
    def from_rational(cls, params: PadicParams, num: int, den: int) -> "PadicScalar":
        if den == 0:
            raise ZeroDivisionError("rational with zero denominator")
        return cls.from_int(params, num) / cls.from_int(params, den)

    @classmethod
    def zero(cls, params: PadicParams) -> "PadicScalar":
        return cls(params, INF, 0, INF)

    @classmethod
    def one(cls, params: PadicParams) -> "PadicScalar":
        return cls(params, 0, 1, params.N)

    # -- predicates ---------------------------------------------------

    def is_exact_zero(self) -> bool:
        return self.val is INF

    def is_zero(self) -> bool:
        """True when no nonzero digit is known (exact zero or dead ball)."""
        return self.val is INF or self.prec == 0

    def is_unit(self) -> bool:
        return self.val == 0 and self.prec > 0

    # -- precision helpers --------------------------------------------

    @property
    def abs_prec(self):
        """Known-correct absolute precision: value is pinned mod p^abs_prec."""
        if self.val is INF:
            return INF
        return self.val + self.prec

    def lift(self) -> int:
        """Canonical integer representative (requires val >= 0)."""
        if self.is_exact_zero():
            return 0
        if self.val < 0:
            raise DomainError("no integer lift: negative valuation")
        return (self.unit * self.params.pw(self.val)) % self.params.pw(
            min(self.params.N, self.abs_prec)
        )

    def residue(self) -> int:
        """Image in F_p (requires val >= 0)."""
        if self.is_exact_zero():
            return 0
        if self.val < 0:
            raise DomainError("negative valuation has no residue")
        if self.val > 0:
            return 0
        return self.unit % self.params.p

    def agrees_with(self, other: "PadicScalar", digits=None) -> bool:
        """Equality modulo p^digits (default: all jointly certified digits)."""
        d = self - other
        if d.is_exact_zero():
            return True
        if digits is None:
            digits = min(self.abs_prec, other.abs_prec)
            if digits is INF:
                return False
        return d.val >= digits

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            return other
        if isinstance(other, int):
            return PadicScalar.from_int(self.params, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        P = self.params
        a = min(self.abs_prec, other.abs_prec)
        v = min(self.val, other.val)
        if a is INF:
            a = v + P.N
        a = min(a, v + P.N)
        if a <= v:
            return PadicScalar(P, v, 0, 0)
        m = P.pw(a - v)
        raw = (self.unit * P.pw(self.val - v) + other.unit * P.pw(other.val - v)) % m
        if raw == 0:
            return PadicScalar(P, a, 0, 0)
        w = vp(raw, P.p)
        return PadicScalar(P, v + w, raw // P.pw(w), a - v - w)

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact_zero():
            return self
        return PadicScalar(self.params, self.val, -self.unit if self.prec else 0, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        P = self.params
        if self.is_exact_zero() or other.is_exact_zero():
            return PadicScalar.zero(P)
        prec = min(self.prec, other.prec)
        if prec == 0:
            return PadicScalar(P, self.val + other.val, 0, 0)
        return PadicScalar(P, self.val + other.val, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        P = self.params
        if other.is_exact_zero():
            raise ZeroDivisionError("division by exact zero")
        if other.prec == 0:
            raise PrecisionError("division by a value indistinguishable from zero")
        if self.is_exact_zero():
            return self
        prec = min(self.prec, other.prec)
        if prec == 0:
            return PadicScalar(P, self.val - other.val, 0, 0)
        inv = pow(other.unit, -1, P.pw(prec))
        return PadicScalar(P, self.val - other.val, self.unit * inv, prec)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        P = self.params
        if k == 0:
            return PadicScalar.one(P)
        if self.is_exact_zero():
            if k < 0:
                raise ZeroDivisionError("division by exact zero")
            return self
        if self.prec == 0:
            if k < 0:
                raise PrecisionError("inverting a value indistinguishable from zero")
            return PadicScalar(P, self.val * k, 0, 0)
        u = self.unit if k > 0 else pow(self.unit, -1, P.pw(self.prec))
        return PadicScalar(P, self.val * k, pow(u, abs(k), P.pw(self.prec)), self.prec)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self.params == other.params
            and self.val == other.val
            and self.prec == other.prec
            and self.unit == other.unit
        )

    def __hash__(self):
        return hash((self.params, self.val, self.unit, self.prec))

    def __repr__(self):
        if self.is_exact_zero():
            return f"O(p^inf; p={self.params.p})"
        if self.prec == 0:
            return f"O({self.params.p}^{self.val})"
        return f"{self.unit}*{self.params.p}^{self.val} (+O(p^{self.abs_prec}))"


# ---------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------


def teichmueller(a: int, params: PadicParams) -> PadicScalar:
    """The (p-1)-st root of unity congruent to a mod p.

    Computed by iterating x -> x^p mod p^N, which gains at least one
    digit per step from any x = a mod p.
    """
    p, N = params.p, params.N
    if a % p == 0:
        raise DomainError("Teichmueller lift needs a unit residue")
    m = params.pw(N)
    x = a % m
    for _ in range(N + 1):
        y = pow(x, p, m)
        if y == x:
            break
        x = y
    return PadicScalar(params, 0, x, N)


def plog(u: PadicScalar) -> PadicScalar:
    """p-adic logarithm of a principal unit (val 0, u = 1 mod p).

    Direct series: v(u-1) >= 1 > 1/(p-1) for odd p, so no power
    boosting is required at the scalar level.  The result is certified
    to the absolute precision of the input.
    """
    P = u.params
    p, N = P.p, P.N
    if u.is_exact_zero() or u.prec == 0 or u.val != 0:
        raise DomainError("plog needs a unit")
    if u.unit % p != 1:
        raise DomainError("plog needs a principal unit (u = 1 mod p)")
    if u.unit == 1:
        return PadicScalar.zero(P)
    x = u + (-1)
    aprec = min(N, x.abs_prec if x.prec else x.val)
    if x.is_zero():
        # u = 1 + O(p^k): log lands in the same ball
        return PadicScalar(P, aprec, 0, 0)
    # guard digits absorb the divisions by k
    kmax = 1
    while kmax * x.val - _vp_int(kmax, p) < aprec:
        kmax += 1
    guard = max(_vp_int(k, p) for k in range(1, kmax + 1))
    m = P.pw(aprec + guard)
    xl = (x.unit * P.pw(x.val)) % m
    acc = 0
    term = 1
    for k in range(1, kmax + 1):
        term = (term * xl) % m
        kv = _vp_int(k, p)
        kk = k // P.pw(kv)
        # term / k is exact: v(x^k) >= k > v_p(k)
        t = (term // P.pw(kv)) * pow(kk, -1, m)
        acc = (acc - t if k % 2 == 0 else acc + t) % m
    acc %= P.pw(aprec)
    if acc == 0:
        return PadicScalar(P, aprec, 0, 0)
    w = vp(acc, p)
    return PadicScalar(P, w, acc // P.pw(w), aprec - w)


def _vp_int(k: int, p: int) -> int:
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


def kappa_power(t, params: PadicParams) -> PadicScalar:
    """(1+p)^t for a p-adic integer exponent t.

    Integer t uses modular exponentiation directly.  A PadicScalar t
    uses the binomial limit: (1+p)^(p^(N-1)) = 1 mod p^N, so only
    t mod p^(N-1) matters.
    """
    p, N = params.p, params.N
    m = params.pw(N)
    if isinstance(t, int):
        e = t
    elif isinstance(t, PadicScalar):
        if t.is_exact_zero():
            e = 0
        else:
            if t.val < 0:
                raise DomainError("kappa_power needs an integral exponent")
            e = t.lift() % params.pw(N - 1)
    else:
        raise DomainError(f"unsupported exponent type {type(t)!r}")
    if e >= 0:
        u = pow(1 + p, e, m)
    else:
        u = pow(pow(1 + p, -1, m), -e, m)
    return PadicScalar(params, 0, u, N)
