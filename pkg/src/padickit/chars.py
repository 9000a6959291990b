"""Finite Galois-group and character arithmetic.

Groups arrive as explicit Cayley tables (fixtures carry them; nothing
is computed from polynomials).  Character values are exact elements of
Q(zeta_m) with gcd(m, p) = 1, represented in the power basis reduced
mod the m-th cyclotomic polynomial, so inner products and
multiplicities are exact integers, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .padic import PadicParams, PadicScalar, teichmueller
from .tower import TowerRing, cyclotomic_polynomial


def euler_phi(n: int) -> int:
    out = n
    d = 2
    while d * d <= n:
        if n % d == 0:
            out -= out // d
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out -= out // n
    return out


# ---------------------------------------------------------------------
# exact cyclotomic numbers
# ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def _phi_m(m: int):
    return tuple(Fraction(c) for c in cyclotomic_polynomial(m))


class Cyc:
    """An element of Q(zeta_m) in the power basis mod Phi_m."""

    __slots__ = ("m", "co")

    def __init__(self, m: int, co):
        deg = euler_phi(m)
        cs = [Fraction(c) for c in co]
        if len(cs) >= deg + 1:
            cs = _reduce_mod_phi(cs, m)
        self.m = m
        self.co = tuple((cs + [Fraction(0)] * deg)[:deg])

    @classmethod
    def rational(cls, m: int, q) -> "Cyc":
        return cls(m, [Fraction(q)])

    @classmethod
    def root(cls, m: int, k: int = 1) -> "Cyc":
        """zeta_m^k"""
        deg = euler_phi(m)
        k %= m
        co = [Fraction(0)] * (k + 1)
        co[k] = Fraction(1)
        if k < deg:
            return cls(m, co)
        return cls(m, co)

    def lift_order(self, m2: int) -> "Cyc":
        """The same number inside Q(zeta_m2), m | m2."""
        if m2 % self.m:
            raise DomainError("root orders are incompatible")
        r = m2 // self.m
        out = Cyc.rational(m2, 0)
        for i, c in enumerate(self.co):
            if c:
                out = out + Cyc(m2, [0] * (i * r) + [c])
        return out

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(self.m, other)
        if self.m == other.m:
            return self, other
        m2 = _lcm(self.m, other.m)
        return self.lift_order(m2), other.lift_order(m2)

    def __add__(self, other):
        a, b = self._pair(other)
        return Cyc(a.m, [x + y for x, y in zip(a.co, b.co)])

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.m, [-c for c in self.co])

    def __sub__(self, other):
        a, b = self._pair(other)
        return Cyc(a.m, [x - y for x, y in zip(a.co, b.co)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        prod = [Fraction(0)] * (2 * len(a.co) - 1)
        for i, x in enumerate(a.co):
            if x:
                for j, y in enumerate(b.co):
                    if y:
                        prod[i + j] += x * y
        return Cyc(a.m, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyc(self.m, [c / q for c in self.co])
        raise DomainError("division only by rationals")

    def __eq__(self, other):
        a, b = self._pair(other)
        return a.co == b.co

    def __hash__(self):
        return hash((self.m, self.co))

    def is_zero(self):
        return not any(self.co)

    def galois_power(self, k: int) -> "Cyc":
        """Substitute zeta_m -> zeta_m^k (requires gcd(k, m) = 1)."""
        if _gcd(k % self.m if self.m > 1 else 1, self.m) != 1:
            raise DomainError("Galois substitution needs an exponent prime to m")
        out = [Fraction(0)] * self.m
        for i, c in enumerate(self.co):
            out[(i * k) % self.m] += c
        return Cyc(self.m, out)

    def conj(self) -> "Cyc":
        """Complex conjugation zeta -> zeta^(-1)."""
        if self.m == 1:
            return self
        return self.galois_power(self.m - 1)

    def rational_value(self):
        """The Fraction it equals, or None."""
        if any(self.co[1:]):
            return None
        return self.co[0]

    def norm_abs_squared(self) -> "Cyc":
        return self * self.conj()

    def multiplicative_order(self):
        """Order as a root of unity, or None if not one."""
        one = Cyc.rational(self.m, 1)
        x = self
        for k in range(1, 2 * self.m + 1):
            if x == one:
                return k
            x = x * self
        return None

    def embed(self, params: PadicParams) -> PadicScalar:
        """p-adic image sending zeta_m to the canonical Teichmueller root
        (requires m | p - 1 and a p-integral denominator)."""
        p = params.p
        if (p - 1) % self.m:
            raise DomainError(f"zeta_{self.m} does not embed in Z_{p} via mu_(p-1)")
        root = _canonical_scalar_root(params, self.m)
        acc = PadicScalar.zero(params)
        for i, c in enumerate(self.co):
            if c:
                if c.denominator % p == 0:
                    raise DomainError("denominator not prime to p")
                term = PadicScalar.from_rational(params, c.numerator, c.denominator)
                acc = acc + term * root**i
        return acc

    def embed_tower(self, ring: TowerRing):
        """Image in a tower ring (requires m | f; uses zeta_f powers,
        falling back to the scalar Teichmueller root when m | p - 1)."""
        p = ring.params.p
        if (p - 1) % self.m == 0:
            from .tower import embed_scalar

            return embed_scalar(self.embed(ring.params), ring)
        if ring.f % self.m:
            raise DomainError(f"zeta_{self.m} is absent from this tower ring")
        root = ring.y_pow(ring.f // self.m)
        acc = ring.zero()
        for i, c in enumerate(self.co):
            if c:
                if c.denominator % p == 0:
                    raise DomainError("denominator not prime to p")
                num = c.numerator * pow(c.denominator, -1, ring.mod)
                acc = acc + root**i * num
        return acc

    def __repr__(self):
        if self.rational_value() is not None:
            return f"Cyc({self.rational_value()})"
        return f"Cyc(m={self.m}, {list(self.co)})"


def _reduce_mod_phi(cs, m):
    phim = list(_phi_m(m))
    deg = len(phim) - 1
    cs = list(cs)
    for d in range(len(cs) - 1, deg - 1, -1):
        c = cs[d]
        if c:
            for i in range(deg + 1):
                cs[d - deg + i] -= c * phim[i]
    return cs[:deg]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _lcm(a, b):
    return a * b // _gcd(a, b)


@lru_cache(maxsize=None)
def _canonical_scalar_root(params: PadicParams, m: int) -> PadicScalar:
    """Teichmueller lift of the canonical primitive m-th root mod p."""
    p = params.p
    g = _smallest_primitive_root(p)
    return teichmueller(g, params) ** ((p - 1) // m)


@lru_cache(maxsize=None)
def _smallest_primitive_root(p: int) -> int:
    for g in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    raise AssertionError("no primitive root found")


# ---------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------


class GroupTable:
    """A finite group as a Cayley table, with conjugacy data and the
    designated subgroups the Selmer theory needs."""

    def __init__(self, mul, classes=None, decomposition=None, conjugation=None, name=""):
        n = len(mul)
        self.order = n
        self.mul = [list(row) for row in mul]
        self.name = name
        self._validate_group()
        self.classes = [sorted(c) for c in (classes or self._compute_classes())]
        self._validate_classes()
        self.class_of = {}
        for ci, cls in enumerate(self.classes):
            for g in cls:
                self.class_of[g] = ci
        self.decomposition = tuple(sorted(decomposition)) if decomposition else None
        if self.decomposition:
            self._validate_closed(self.decomposition, "decomposition subgroup")
        self.conjugation = conjugation
        if conjugation is not None:
            if self.mul[conjugation][conjugation] != self.identity:
                raise DomainError("conjugation element must have order dividing 2")
        self.embed = None  # set for subgroup tables

    def _validate_group(self):
        n = self.order
        rng = range(n)
        for row in self.mul:
            if len(row) != n or any(x not in rng for x in row):
                raise DomainError("malformed Cayley table")
        ident = None
        for e in rng:
            if all(self.mul[e][g] == g and self.mul[g][e] == g for g in rng):
                ident = e
                break
        if ident is None:
            raise DomainError("no identity element")
        self.identity = ident
        self.inv = [None] * n
        for g in rng:
            for h in rng:
                if self.mul[g][h] == ident and self.mul[h][g] == ident:
                    self.inv[g] = h
            if self.inv[g] is None:
                raise DomainError(f"element {g} has no inverse")
        for a in rng:
            for b in rng:
                for c in rng:
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                        raise DomainError("Cayley table is not associative")

    def _compute_classes(self):
        seen = set()
        classes = []
        for g in range(self.order):
            if g in seen:
                continue
            orbit = {self.mul[self.mul[h][g]][self.inv[h]] for h in range(self.order)}
            classes.append(sorted(orbit))
            seen |= orbit
        return classes

    def _validate_classes(self):
        all_elts = sorted(g for c in self.classes for g in c)
        if all_elts != list(range(self.order)):
            raise DomainError("classes do not partition the group")
        for cls in self.classes:
            s = set(cls)
            for g in cls:
                for h in range(self.order):
                    if self.mul[self.mul[h][g]][self.inv[h]] not in s:
                        raise DomainError("classes not closed under conjugation")

    def _validate_closed(self, elts, what):
        s = set(elts)
        if self.identity not in s:
            raise DomainError(f"{what} misses the identity")
        for a in elts:
            for b in elts:
                if self.mul[a][b] not in s:
                    raise DomainError(f"{what} not closed under multiplication")

    def subgroup(self, elts) -> "GroupTable":
        elts = sorted(set(elts))
        self._validate_closed(elts, "subgroup")
        pos = {g: i for i, g in enumerate(elts)}
        mul = [[pos[self.mul[a][b]] for b in elts] for a in elts]
        sub = GroupTable(mul, name=f"{self.name}-sub")
        sub.embed = list(elts)
        return sub

    def centralizer_order(self, g: int) -> int:
        return sum(1 for h in range(self.order) if self.mul[h][g] == self.mul[g][h])

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul[x][g]
            k += 1
        return k

    def __repr__(self):
        return f"GroupTable({self.name or 'order ' + str(self.order)})"


class ClassFunction:
    """values[i] is the value on classes[i], an exact cyclotomic number."""

    def __init__(self, group: GroupTable, values, name="", m=1):
        if len(values) != len(group.classes):
            raise DomainError("one value per conjugacy class required")
        self.group = group
        self.m = m
        self.values = [v if isinstance(v, Cyc) else Cyc.rational(m, v) for v in values]
        self.name = name

    @classmethod
    def trivial(cls, group):
        return cls(group, [1] * len(group.classes), name="1")

    def value(self, g: int) -> Cyc:
        return self.values[self.group.class_of[g]]

    @property
    def dimension(self) -> int:
        d = self.value(self.group.identity).rational_value()
        if d is None or d.denominator != 1 or d < 0:
            raise DomainError("value at identity is not a nonnegative integer")
        return int(d)

    def is_trivial(self) -> bool:
        return all(v == Cyc.rational(1, 1) for v in self.values)

    def restrict(self, sub: GroupTable) -> "ClassFunction":
        if sub.embed is None:
            raise DomainError("restriction target must be a subgroup table")
        vals = []
        for cls in sub.classes:
            g_big = sub.embed[cls[0]]
            vals.append(self.value(g_big))
        return ClassFunction(sub, vals, name=f"{self.name}|H", m=self.m)

    def inner(self, other: "ClassFunction") -> Fraction:
        """<self, other> = (1/|G|) sum self(g) conj(other(g)); must be rational."""
        if other.group is not self.group:
            raise DomainError("inner product needs class functions on one group")
        acc = Cyc.rational(1, 0)
        for cls in self.group.classes:
            term = self.values[self.group.class_of[cls[0]]] * other.values[
                self.group.class_of[cls[0]]
            ].conj()
            acc = acc + term * len(cls)
        r = acc.rational_value()
        if r is None:
            raise DomainError("inner product is not rational: malformed character data")
        return r / self.group.order

    def __repr__(self):
        return f"ClassFunction({self.name or 'unnamed'} on {self.group!r})"


# ---------------------------------------------------------------------
# local character data
# ---------------------------------------------------------------------


@dataclass
class LocalCharacterData:
    """epsilon = omega^a * beta with beta unramified of order b."""

    p: int
    a: int
    b: int
    beta_frob: Cyc | None = None

    def __post_init__(self):
        if not (0 <= self.a < self.p - 1):
            raise DomainError("Teichmueller exponent a out of range")
        if self.b < 1:
            raise DomainError("unramified order b must be >= 1")
        if self.beta_frob is not None:
            if self.beta_frob.multiplicative_order() != self.b:
                raise DomainError("beta value has the wrong multiplicative order")

    @property
    def f(self) -> int:
        return self.p**self.b - 1

    def is_ramified(self) -> bool:
        return self.a != 0


# ---------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------


def multiplicity(chi: ClassFunction, sub: GroupTable, theta: ClassFunction) -> int:
    """<chi|_H, theta> over the subgroup H, verified a nonnegative integer."""
    if theta.group is not sub:
        raise DomainError("theta must live on the designated subgroup")
    if theta.dimension != 1:
        raise DomainError("theta must be one-dimensional")
    r = chi.restrict(sub).inner(theta)
    if r.denominator != 1 or r < 0:
        raise DomainError(f"non-integral multiplicity {r}: malformed character data")
    return int(r)


def d_plus(chi: ClassFunction) -> int:
    """(chi(1) + chi(c)) / 2 for the designated complex conjugation c."""
    g = chi.group
    if g.conjugation is None:
        raise DomainError("no complex-conjugation element designated")
    s = chi.value(g.identity) + chi.value(g.conjugation)
    r = s.rational_value()
    if r is None or r % 2 != 0:
        raise DomainError("inconsistent conjugation class: d+ not integral")
    return int(r / 2)


def d_minus(chi: ClassFunction) -> int:
    return chi.dimension - d_plus(chi)


def unit_rank(chi: ClassFunction) -> int:
    """Multiplicity of chi in the unit representation: 0 for trivial chi,
    d+(chi) otherwise."""
    if chi.is_trivial():
        return 0
    return d_plus(chi)


def h1_corank_prediction(chi: ClassFunction) -> int:
    """Lambda-corank of the global H^1 over the cyclotomic line."""
    if chi.is_trivial():
        return 1
    return d_minus(chi)


def hypothesis_A_check(group: GroupTable, chi: ClassFunction, eps_p: ClassFunction, p: int):
    """The three-part admissibility check; failures are reported, not raised."""
    report = {"p": p, "conditions": {}, "reasons": []}
    ok_degree = group.order % p != 0
    report["conditions"]["p_does_not_divide_group_order"] = ok_degree
    if not ok_degree:
        report["reasons"].append(f"p = {p} divides |group| = {group.order}")
    try:
        dp = d_plus(chi)
    except DomainError as exc:
        report["conditions"]["d_plus_is_one"] = False
        report["reasons"].append(str(exc))
        dp = None
    else:
        report["conditions"]["d_plus_is_one"] = dp == 1
        if dp != 1:
            report["reasons"].append(f"d+ = {dp}, expected 1")
    if group.decomposition is None:
        raise DomainError("no decomposition subgroup designated")
    sub = eps_p.group
    mult = multiplicity(chi, sub, eps_p)
    report["conditions"]["epsilon_multiplicity_one"] = mult == 1
    if mult != 1:
        report["reasons"].append(f"epsilon occurs with multiplicity {mult}, expected 1")
    report["holds"] = all(report["conditions"].values())
    return report


def trivial_zero_multiplicity(
    chi: ClassFunction, eps_p: ClassFunction, sub: GroupTable
) -> int:
    """Multiplicity t of the trivial character of the decomposition group
    in chi minus its epsilon-line."""
    m0 = multiplicity(chi, sub, ClassFunction.trivial(sub))
    t = m0 - (1 if eps_p.is_trivial() else 0)
    if t < 0:
        raise DomainError("negative trivial-zero multiplicity: inconsistent inputs")
    return t


def epsilon_factorization(
    inertia_value: Cyc, frob_value: Cyc, primitive_root: int, p: int
) -> LocalCharacterData:
    """Split epsilon into omega^a (tame) times beta (unramified).

    The tame identification sends the inertia generator to the canonical
    primitive (p-1)-st root raised to dlog of the supplied primitive
    root; a is the solution of omega(g)^a = epsilon(inertia generator).
    """
    t_ord = inertia_value.multiplicative_order()
    if t_ord is None or (p - 1) % t_ord:
        raise DomainError("inertia value is not a root of unity of order dividing p - 1")
    b = frob_value.multiplicative_order()
    if b is None:
        raise DomainError("Frobenius value is not a root of unity")
    m = _lcm(inertia_value.m, p - 1)
    omega_g = Cyc.root(m, m // (p - 1))  # the designated omega(g)
    target = inertia_value.lift_order(m) if inertia_value.m != m else inertia_value
    a = None
    x = Cyc.rational(m, 1)
    for cand in range(p - 1):
        if x == target:
            a = cand
            break
        x = x * omega_g
    if a is None:
        raise DomainError("inertia value is not a power of the designated tame root")
    return LocalCharacterData(p=p, a=a, b=b, beta_frob=frob_value)


def reconstruct_epsilon(data: LocalCharacterData, primitive_root: int):
    """Inverse of epsilon_factorization: values on (inertia gen, Frobenius)."""
    m = _lcm(data.beta_frob.m if data.beta_frob else 1, data.p - 1)
    omega_g = Cyc.root(m, m // (data.p - 1))
    inertia_value = Cyc.rational(m, 1)
    for _ in range(data.a):
        inertia_value = inertia_value * omega_g
    frob_value = data.beta_frob if data.beta_frob is not None else Cyc.rational(1, 1)
    return inertia_value, frob_value
