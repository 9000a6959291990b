"""The Iwasawa algebra O[[T]] truncated at (p^N, T^D).

T stands for gamma_0 - 1 with kappa(gamma_0) = 1 + p.  Series support
Weierstrass preparation with certified (mu, lambda), evaluation at
finite-order characters (through a tower ring) and at kappa^t, the
involution induced by gamma -> gamma^(-1), the twist induced by
gamma -> kappa(gamma)^(-1) gamma, trivial-zero bookkeeping, and an
up-to-units comparison of characteristic ideals.
"""

from __future__ import annotations

from .errors import DomainError, PrecisionError
from .padic import PadicParams, PadicScalar, kappa_power, vp
from .tower import TowerElement, TowerRing

DEFAULT_DEGREE_CAP = 24


class IwasawaSeries:
    __slots__ = ("params", "D", "coeffs")

    def __init__(self, params: PadicParams, D: int, coeffs):
        if D < 1:
            raise DomainError("degree cap must be positive")
        m = params.pw(params.N)
        cs = [c % m for c in coeffs]
        if len(cs) > D:
            raise DomainError("more coefficients than the degree cap")
        self.params = params
        self.D = D
        self.coeffs = cs + [0] * (D - len(cs))

    @classmethod
    def zero(cls, params, D=DEFAULT_DEGREE_CAP):
        return cls(params, D, [])

    @classmethod
    def one(cls, params, D=DEFAULT_DEGREE_CAP):
        return cls(params, D, [1])

    @classmethod
    def variable(cls, params, D=DEFAULT_DEGREE_CAP):
        return cls(params, D, [0, 1])

    def is_zero(self):
        return not any(self.coeffs)

    def _check(self, other):
        if self.params != other.params or self.D != other.D:
            raise DomainError("series with mismatched parameters")

    def __add__(self, other):
        if isinstance(other, int):
            out = list(self.coeffs)
            out[0] += other
            return IwasawaSeries(self.params, self.D, out)
        self._check(other)
        return IwasawaSeries(
            self.params, self.D, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    __radd__ = __add__

    def __neg__(self):
        return IwasawaSeries(self.params, self.D, [-a for a in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IwasawaSeries(self.params, self.D, [a * other for a in self.coeffs])
        if isinstance(other, PadicScalar):
            if other.is_exact_zero():
                return IwasawaSeries.zero(self.params, self.D)
            if other.val < 0:
                raise DomainError("scalar multiplier must be integral")
            return self * other.lift()
        self._check(other)
        m = self.params.pw(self.params.N)
        out = [0] * self.D
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs[: self.D - i]):
                    if b:
                        out[i + j] = (out[i + j] + a * b) % m
        return IwasawaSeries(self.params, self.D, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, IwasawaSeries)
            and self.params == other.params
            and self.D == other.D
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.params, self.D, tuple(self.coeffs)))

    def inverse_unit(self):
        """Inverse of a series whose constant term is a unit."""
        p, N = self.params.p, self.params.N
        if self.coeffs[0] % p == 0:
            raise DomainError("series is not a unit")
        m = self.params.pw(N)
        x = IwasawaSeries(self.params, self.D, [pow(self.coeffs[0], -1, m)])
        known = 1
        while known < self.D:
            x = x * (2 - self * x)
            known *= 2
        assert (self * x).coeffs == IwasawaSeries.one(self.params, self.D).coeffs
        return x

    def compose(self, s: "IwasawaSeries") -> "IwasawaSeries":
        """f(s(T)) mod (p^N, T^D); s must have constant term of positive
        valuation for the result to be meaningful."""
        self._check(s)
        if s.coeffs[0] % self.params.p != 0:
            raise DomainError("substitution needs a topologically nilpotent series")
        out = IwasawaSeries(self.params, self.D, [self.coeffs[-1]])
        for a in reversed(self.coeffs[:-1]):
            out = out * s + a
        return out

    def to_dict(self):
        return {
            "p": self.params.p,
            "N": self.params.N,
            "D": self.D,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, doc):
        params = PadicParams(int(doc["p"]), int(doc["N"]))
        return cls(params, int(doc["D"]), [int(c) for c in doc["coeffs"]])

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        return f"IwasawaSeries(p={self.params.p}, N={self.params.N}, D={self.D}; [{head}, ...])"


# ---------------------------------------------------------------------
# Weierstrass preparation
# ---------------------------------------------------------------------


def weierstrass_prep(f: IwasawaSeries):
    """f = p^mu * P * U with P distinguished of degree lam and U a unit.

    Returns (mu, lam, P, U): P as a coefficient list of length lam + 1
    certified mod p^(N - mu), U an IwasawaSeries mod p^(N - mu).
    Raises PrecisionError when f vanishes mod p^N or when no unit
    coefficient appears below the degree cap.
    """
    p, N = f.params.p, f.params.N
    if f.is_zero():
        raise PrecisionError("insufficient precision: series is 0 mod p^N")
    mu = min(vp(c, p) for c in f.coeffs if c)
    mu = min(mu, N)
    Nr = N - mu
    if Nr <= 0:
        raise PrecisionError("insufficient precision: series is 0 mod p^N")
    m = f.params.pw(Nr)
    f1 = [(c // p**mu) % m for c in f.coeffs]
    lam = next((i for i, c in enumerate(f1) if c % p), None)
    if lam is None:
        raise PrecisionError("degree cap exceeded: no unit coefficient below T^D")
    D = f.D
    # initial factorization: P = T^lam, U = sum_{i>=lam} a_i T^(i-lam)
    P = [0] * lam + [1]
    U = f1[lam:] + [0] * lam
    U0 = [c % p for c in U]
    invU0 = _fp_series_inv(U0, p)
    for k in range(1, Nr):
        pk = p**k
        PU = _series_mul(P, U, D, m)
        E = [((a - b) % m) // pk % p for a, b in zip(f1, PU)]
        if not any(E):
            continue
        EinvU = _fp_series_mul(E, invU0, D, p)
        dP = EinvU[:lam]
        rem = [
            (e - s) % p
            for e, s in zip(E, _fp_series_mul(U0, dP + [0] * (D - lam), D, p))
        ]
        assert not any(rem[:lam]), "Weierstrass division step failed"
        dU = rem[lam:] + [0] * lam
        for i, c in enumerate(dP):
            P[i] = (P[i] + pk * c) % m
        for i, c in enumerate(dU):
            U[i] = (U[i] + pk * c) % m
    assert _series_mul(P, U, D, m) == f1, "Weierstrass reconstruction failed"
    return mu, lam, P, IwasawaSeries(f.params, D, U)


def _series_mul(a, b, D, m):
    out = [0] * D
    for i, x in enumerate(a[:D]):
        if x:
            for j, y in enumerate(b[: D - i]):
                if y:
                    out[i + j] = (out[i + j] + x * y) % m
    return out


def _fp_series_mul(a, b, D, p):
    return _series_mul(a, b, D, p)


def _fp_series_inv(a, p):
    D = len(a)
    if a[0] % p == 0:
        raise DomainError("series not invertible mod p")
    inv0 = pow(a[0], -1, p)
    out = [inv0] + [0] * (D - 1)
    for i in range(1, D):
        s = sum(a[j] * out[i - j] for j in range(1, min(i, len(a) - 1) + 1))
        out[i] = (-inv0 * s) % p
    return out


# ---------------------------------------------------------------------
# evaluations
# ---------------------------------------------------------------------


def eval_at_kappa_power(f: IwasawaSeries, t) -> PadicScalar:
    """f(kappa(t) - 1): the value of f at the character kappa^t.

    For the paper-style L-value convention, s and t are related by
    t = 1 - s.  The certified precision accounts for the T^D tail."""
    params = f.params
    x = kappa_power(t, params) - 1
    acc = PadicScalar.zero(params)
    for a in reversed(f.coeffs):
        acc = acc * x + PadicScalar.from_int(params, a)
    if x.is_exact_zero() or x.is_zero():
        return acc
    tail = f.D * x.val
    if acc.is_exact_zero() or acc.prec == 0:
        return acc if acc.is_exact_zero() else PadicScalar(params, min(acc.val, tail), 0, 0)
    if acc.val >= tail:
        return PadicScalar(params, tail, 0, 0)
    return PadicScalar(params, acc.val, acc.unit, min(acc.prec, tail - acc.val))


def eval_at_char(f: IwasawaSeries, n: int, tower: TowerRing, k: int = 1) -> TowerElement:
    """f(zeta - 1) for the order-p^n character with phi(gamma_0) = zeta_{p^n}^k.

    The tower must sit at level n; zeta_{p^n} is realized as z^p there.
    Uses the shifted series g(S) = f(S - 1), which turns the evaluation
    into a sum of z-monomials."""
    params = f.params
    if tower.params != params:
        raise DomainError("tower and series parameters disagree")
    if tower.n != n:
        raise DomainError("tower level does not match the character order")
    p = params.p
    if n > 0 and k % p == 0:
        raise DomainError("character index k must be prime to p")
    g = _shift_by_one(f)
    m = tower.mod
    out = [[0] * tower.b for _ in range(tower.phi)]
    step = (p * k) % tower.pn1  # zeta_{p^n}^k = z^(p k)
    for j, c in enumerate(g):
        if c:
            for idx, s in tower.zexp[(step * j) % tower.pn1]:
                out[idx][0] = (out[idx][0] + s * c) % m
    if n == 0:
        pi_prec = tower.eN
    else:
        pi_prec = min(tower.eN, f.D * p)  # v_pi(zeta_{p^n} - 1) = p
    return TowerElement(tower, out, pi_prec)


def _shift_by_one(f: IwasawaSeries):
    """Coefficients of g(S) = f(S - 1) mod p^N."""
    m = f.params.pw(f.params.N)
    D = f.D
    g = [0] * D
    # iterate binomials C(i, j) (-1)^(i-j)
    for i, a in enumerate(f.coeffs):
        if not a:
            continue
        binom = 1
        for j in range(i + 1):
            term = a * binom * (1 if (i - j) % 2 == 0 else -1)
            g[j] = (g[j] + term) % m
            binom = binom * (i - j) // (j + 1)
    return g


# ---------------------------------------------------------------------
# algebra automorphisms
# ---------------------------------------------------------------------


def involution(f: IwasawaSeries) -> IwasawaSeries:
    """T -> (1+T)^(-1) - 1, induced by gamma -> gamma^(-1)."""
    s = _inv_one_plus_T_minus_one(f.params, f.D)
    return f.compose(s)


def _inv_one_plus_T_minus_one(params, D):
    # (1+T)^(-1) - 1 = -T + T^2 - T^3 + ...
    return IwasawaSeries(params, D, [0] + [(-1) ** k for k in range(1, D)])


def kappa_twist(f: IwasawaSeries) -> IwasawaSeries:
    """T -> (1+T)/(1+p) - 1, induced by gamma -> kappa(gamma)^(-1) gamma."""
    params = f.params
    m = params.pw(params.N)
    inv1p = pow(1 + params.p, -1, m)
    s = IwasawaSeries(params, f.D, [inv1p - 1, inv1p])
    return f.compose(s)


def functional_equation_transform(f: IwasawaSeries) -> IwasawaSeries:
    """The unique g with kappa^s(g) = kappa^(1-s)(f) for all s."""
    return kappa_twist(involution(f))


# ---------------------------------------------------------------------
# trivial zeros and ideal comparison
# ---------------------------------------------------------------------


def trivial_zero_check(f: IwasawaSeries, t: int) -> bool:
    """Do the first t coefficients vanish mod p^N?"""
    if t < 0:
        raise DomainError("order t must be nonnegative")
    if t >= f.D:
        raise DomainError("order t reaches the degree cap")
    return not any(f.coeffs[:t])


def divide_out(f: IwasawaSeries, t: int):
    """(g, g(0)) with f = T^t g; requires the divisibility to hold."""
    if not trivial_zero_check(f, t):
        raise DomainError("T^t does not divide the series at this precision")
    g = IwasawaSeries(f.params, f.D, f.coeffs[t:])
    g0 = PadicScalar.from_int(f.params, g.coeffs[0])
    return g, g0


def associates_check(f: IwasawaSeries, g: IwasawaSeries, slack: int = 1):
    """Compare the ideals (f) and (g) up to precision.

    Returns (verdict, detail) with verdict one of "equal-ideal",
    "differ", "undecidable-at-precision".  Weierstrass data certified
    mod p^(N - mu - slack) decides; agreement inside the certified zone
    with disagreement in the last slack digits is undecidable."""
    f._check(g)
    N = f.params.N
    fz, gz = f.is_zero(), g.is_zero()
    if fz and gz:
        return "undecidable-at-precision", "both series vanish at working precision"
    if fz or gz:
        z, nz = (f, g) if fz else (g, f)
        mu = min(vp(c, f.params.p) for c in nz.coeffs if c)
        if mu < N:
            return "differ", "one side vanishes at precision, the other has mu < N"
        return "undecidable-at-precision", "nonzero side has mu at the precision cap"
    mu1, lam1, P1, _ = weierstrass_prep(f)
    mu2, lam2, P2, _ = weierstrass_prep(g)
    if (mu1, lam1) != (mu2, lam2):
        return "differ", f"invariants differ: (mu, lambda) = ({mu1}, {lam1}) vs ({mu2}, {lam2})"
    mu = mu1
    zone = N - mu - slack
    if zone <= 0:
        return "undecidable-at-precision", "no certified digits left after mu and slack"
    mz = f.params.pw(zone)
    mfull = f.params.pw(N - mu)
    if any((a - b) % mz for a, b in zip(P1, P2)):
        return "differ", "distinguished polynomials differ inside the certified zone"
    if all((a - b) % mfull == 0 for a, b in zip(P1, P2)):
        return "equal-ideal", f"(mu, lambda) = ({mu}, {lam1}), P equal mod p^{N - mu}"
    return (
        "undecidable-at-precision",
        "distinguished polynomials agree in the zone but differ in the slack digits",
    )
