"""Rings of integers of Q_p(mu_f, mu_{p^(n+1)}) mod p^N with Galois action.

The ring is (Z/p^N)[y, z] / (h(y), Phi_{p^(n+1)}(z)) where h is a
Hensel-lifted irreducible degree-b factor of the f-th cyclotomic
polynomial mod p, f = p^b - 1, and the designated root y reduces to a
normal-basis generator of F_{p^b} over F_p.  z is a primitive
p^(n+1)-st root of unity and the ramified uniformizer is z - 1.

Elements are stored as a length-phi list of length-b coefficient rows
(coefficient of y^i z^j at c[j][i]).  Products go through Kronecker
substitution: both factors are packed into single big integers with
byte-aligned slots wide enough that one integer multiply performs the
whole 2-D convolution without carries.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .errors import DomainError, PrecisionError
from .padic import PadicParams, PadicScalar, vp

# ---------------------------------------------------------------------
# integer / F_p polynomial helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod_z(a, b):
    """Exact-leading division over Z (b monic)."""
    a = list(a)
    q = [0] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        _poly_trim(a)
        if len(a) < len(b):
            break
        c = a[-1]
        d = len(a) - len(b)
        q[d] = c
        for i, x in enumerate(b):
            a[i + d] -= c * x
    _poly_trim(a)
    return q, a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients of Phi_n over Z, constant term first."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, r = _poly_divmod_z(poly, list(cyclotomic_polynomial(d)))
            assert not r
    return tuple(_poly_trim(poly))


def _fp_divmod(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    _poly_trim(a)
    _poly_trim(b)
    if not b:
        raise ZeroDivisionError
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = (a[-1] * inv_lead) % p
        d = len(a) - len(b)
        q[d] = c
        for i, x in enumerate(b):
            a[i + d] = (a[i + d] - c * x) % p
        _poly_trim(a)
    return q, a


def _fp_xgcd(a, b, p):
    """(g, u, v) with u*a + v*b = g over F_p[x]."""
    r0, r1 = [x % p for x in a], [x % p for x in b]
    s0, s1 = [1], [0]
    t0, t1 = [0], [1]
    _poly_trim(r0), _poly_trim(r1)
    while r1:
        q, r = _fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim([(x - y) % p for x, y in _zip_pad(s0, _poly_mul(q, s1), p)])
        t0, t1 = t1, _poly_trim([(x - y) % p for x, y in _zip_pad(t0, _poly_mul(q, t1), p)])
    return r0, s0, t0


def _zip_pad(a, b, p):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) % p, (b[i] if i < len(b) else 0) % p) for i in range(n)]


# ---------------------------------------------------------------------
# the tower ring
# ---------------------------------------------------------------------


class GaloisLabel(NamedTuple):
    """(Frobenius exponent mod b, unit c mod p^(n+1)); composition is
    componentwise."""

    j: int
    c: int


class TowerRing:
    def __init__(self, params: PadicParams, b: int, n: int, h: list):
        self.params = params
        self.b = b
        self.n = n
        self.f = params.p ** b - 1
        self.h = h  # monic, length b+1, coefficients mod p^N
        p, N = params.p, params.N
        self.pn1 = p ** (n + 1)
        self.phi = self.pn1 - self.pn1 // p  # z-dimension = ramification degree
        self.e = self.phi
        self.dim = b * self.phi
        self.eN = self.e * N
        self.mod = params.pw(N)
        # Kronecker packing geometry
        bound = self.dim * (self.mod - 1) ** 2
        self.slot = (bound.bit_length() + 7) // 8  # bytes per coefficient slot
        self.ystride = 2 * b - 1
        # z^e reduction table for e in [0, 2*phi-2]: sparse (index, sign) lists
        pn = self.pn1 // p
        zred = [[(e, 1)] for e in range(self.phi)]
        for e in range(self.phi, 2 * self.phi - 1):
            out = {}
            for k in range(p - 1):
                for idx, s in zred[e - self.phi + k * pn]:
                    out[idx] = out.get(idx, 0) - s
            zred.append([(i, s) for i, s in out.items() if s])
        self.zred = zred
        # z^e for e in [0, p^(n+1)): one reduction step suffices
        self.zexp = [zred[e] if e < len(zred) else None for e in range(self.pn1)]
        assert all(v is not None for v in self.zexp)
        self._frob_pows = None
        self._dlog = None

    # -- unramified subring helpers (y-polys: length-b lists mod p^N) --

    def ur_mul(self, a, b_):
        m, h, b = self.mod, self.h, self.b
        out = [0] * (2 * b - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b_):
                    out[i + j] += x * y
        for d in range(2 * b - 2, b - 1, -1):
            c = out[d] % m
            if c:
                out[d] = 0
                for i in range(b):
                    out[d - b + i] -= c * h[i]
        return [x % m for x in out[:b]]

    def ur_pow(self, a, e: int):
        r = [1] + [0] * (self.b - 1)
        a = list(a)
        while e:
            if e & 1:
                r = self.ur_mul(r, a)
            a = self.ur_mul(a, a)
            e >>= 1
        return r

    def ur_inv(self, a):
        """Inverse of a unit in (Z/p^N)[y]/(h) by Hensel from F_p[y]."""
        p, m = self.params.p, self.mod
        g, u, _ = _fp_xgcd(a, list(self.h), p)
        if len(g) != 1 or g[0] % p == 0:
            raise DomainError("not a unit in the unramified subring")
        x = [(c * pow(g[0], -1, p)) % p for c in u]
        x = (x + [0] * self.b)[: self.b]
        prec = 1
        while prec < self.params.N:
            ax = self.ur_mul(a, x)
            ax[0] = (ax[0] - 2) % m
            x = [(-c) % m for c in self.ur_mul(x, ax)]
            prec *= 2
        return x

    @property
    def frob_pows(self):
        """frob_pows[j] = Frob^j(y) as a y-poly; Frob is Newton-lifted."""
        if self._frob_pows is None:
            p, N, m = self.params.p, self.params.N, self.mod
            h = list(self.h)
            if self.b == 1:
                self._frob_pows = [[(-h[0]) % m]]
                return self._frob_pows
            y = [0, 1] + [0] * (self.b - 2)
            hder = [(i * h[i]) % m for i in range(1, len(h))]
            # Newton-lift the root of h congruent to y^p mod p
            r = self.ur_pow(y, p)
            prec = 1
            while prec < N:
                hr = self._ur_eval(h, r)
                corr = self.ur_mul(hr, self.ur_inv(self._ur_eval(hder, r)))
                r = [(a - c) % m for a, c in zip(r, corr)]
                prec *= 2
            assert not any(self._ur_eval(h, r)), "Frobenius lift failed"
            fr = [y]
            cur = y
            for _ in range(1, self.b):
                cur = self._ur_compose(cur, r)
                fr.append(cur)
            self._frob_pows = fr
        return self._frob_pows

    def _ur_eval(self, poly, at):
        """Evaluate a scalar-coefficient poly at a y-poly point."""
        m = self.mod
        out = [0] * self.b
        for c in reversed(poly):
            out = self.ur_mul(out, at)
            out[0] = (out[0] + c) % m
        return out

    def _ur_compose(self, f, g):
        """f(g(y)) for y-polys f, g."""
        return self._ur_eval(list(f), g)

    # -- element constructors ------------------------------------------

    def zero(self):
        return TowerElement(self, [[0] * self.b for _ in range(self.phi)])

    def one(self):
        c = [[0] * self.b for _ in range(self.phi)]
        c[0][0] = 1
        return TowerElement(self, c)

    def monomial(self, zj: int, yi: int, coeff: int = 1):
        c = [[0] * self.b for _ in range(self.phi)]
        for idx, s in self.zexp[zj % self.pn1]:
            c[idx][yi] = (c[idx][yi] + s * coeff) % self.mod
        return TowerElement(self, c)

    def zeta_f(self):
        """The designated primitive f-th root of unity (the class of y)."""
        if self.b == 1:
            return self.from_y_poly([(-self.h[0]) % self.mod])
        return self.monomial(0, 1)

    def zeta_p(self):
        """The designated primitive p^(n+1)-st root of unity (the class of z)."""
        return self.monomial(1, 0)

    def zeta_fp(self):
        """zeta_f * zeta_p, of exact order f * p^(n+1)."""
        return self.zeta_f() * self.zeta_p()

    def from_y_poly(self, vec):
        c = [[0] * self.b for _ in range(self.phi)]
        c[0] = [x % self.mod for x in (list(vec) + [0] * self.b)[: self.b]]
        return TowerElement(self, c)

    def y_pow(self, e: int):
        """y^e as an element (exponent mod f)."""
        if self.b == 1:
            return self.from_y_poly(self.ur_pow([(-self.h[0]) % self.mod], e % self.f))
        return self.from_y_poly(self.ur_pow([0, 1] + [0] * (self.b - 2), e % self.f))

    def labels(self):
        return [
            GaloisLabel(j, c)
            for j in range(self.b)
            for c in range(1, self.pn1)
            if c % self.params.p != 0
        ]

    def compose_labels(self, l1: GaloisLabel, l2: GaloisLabel) -> GaloisLabel:
        return GaloisLabel((l1.j + l2.j) % self.b, (l1.c * l2.c) % self.pn1)

    def dlog_kappa(self, c: int) -> int:
        """Exponent i mod p^n with (1+p)^i = <c> mod p^(n+1)."""
        if self._dlog is None:
            p = self.params.p
            tab = {}
            x = 1
            for i in range(self.pn1 // p):
                tab[x] = i
                x = (x * (1 + p)) % self.pn1
            self._dlog = tab
        p = self.params.p
        w = _teich_mod(c, self.params, self.n + 1)
        cc = (c * pow(w, -1, self.pn1)) % self.pn1
        return self._dlog[cc]

    def lower(self) -> "TowerRing":
        if self.n == 0:
            raise DomainError("already at the bottom tower level")
        return build_tower(self.params, self.b, self.n - 1)

    def __repr__(self):
        return (
            f"TowerRing(p={self.params.p}, N={self.params.N}, b={self.b}, "
            f"n={self.n}, dim={self.dim})"
        )


@lru_cache(maxsize=None)
def _teich_mod(c: int, params: PadicParams, digits: int) -> int:
    """Teichmueller lift of c mod p^digits (digits <= N)."""
    m = params.p**digits
    x = c % m
    for _ in range(digits + 1):
        y = pow(x, params.p, m)
        if y == x:
            break
        x = y
    return x


class TowerElement:
    __slots__ = ("ring", "c", "pi_prec")

    def __init__(self, ring: TowerRing, c, pi_prec=None):
        self.ring = ring
        self.c = c
        self.pi_prec = ring.eN if pi_prec is None else min(pi_prec, ring.eN)

    # -- basics ---------------------------------------------------------

    def copy_with(self, c, pi_prec=None):
        return TowerElement(self.ring, c, self.pi_prec if pi_prec is None else pi_prec)

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.c)

    def __eq__(self, other):
        if not isinstance(other, TowerElement) or other.ring is not self.ring:
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash((id(self.ring), tuple(tuple(r) for r in self.c)))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m = self.ring.mod
        c = [
            [(x + y) % m for x, y in zip(r1, r2)]
            for r1, r2 in zip(self.c, other.c)
        ]
        return TowerElement(self.ring, c, min(self.pi_prec, other.pi_prec))

    __radd__ = __add__

    def __neg__(self):
        m = self.ring.mod
        return self.copy_with([[(-x) % m for x in row] for row in self.c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.ring is not self.ring:
                raise DomainError("elements of different tower rings")
            return other
        if isinstance(other, int):
            out = self.ring.zero()
            out.c[0][0] = other % self.ring.mod
            return out
        if isinstance(other, PadicScalar):
            return embed_scalar(other, self.ring)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            m = self.ring.mod
            return self.copy_with([[(x * other) % m for x in row] for row in self.c])
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _kron_mul(self.ring, self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.ring.one()
        base = self
        while e:
            if e & 1:
                r = r * base
            base = base * base
            e >>= 1
        return r

    # -- structure -------------------------------------------------------

    def residue(self):
        """Image in the residue field F_{p^b}, as a length-b tuple mod p."""
        p = self.ring.params.p
        out = [0] * self.ring.b
        for row in self.c:
            for i, x in enumerate(row):
                out[i] = (out[i] + x) % p
        return tuple(out)

    def is_unit(self) -> bool:
        return any(self.residue())

    def is_principal_unit(self) -> bool:
        r = self.residue()
        return r[0] == 1 and not any(r[1:])

    def scalar_part(self):
        """The constant coefficient as a PadicScalar, requiring the element
        to be scalar (no y, z dependence)."""
        if any(any(row[1:]) for row in self.c) or any(any(r) for r in self.c[1:]):
            raise DomainError("element is not a scalar")
        x = PadicScalar.from_int(self.ring.params, self.c[0][0])
        if x.is_exact_zero():
            return x
        digits = self.pi_prec // self.ring.e
        if x.val >= digits:
            return PadicScalar(self.ring.params, digits, 0, 0)
        return PadicScalar(self.ring.params, x.val, x.unit, min(x.prec, digits - x.val))

    def inverse(self):
        """Inverse of a unit, by Hensel lifting from the residue field."""
        ring = self.ring
        p = ring.params.p
        res = self.residue()
        if not any(res):
            raise DomainError("not a unit in the tower ring")
        g, u, _ = _fp_xgcd(list(res), [x % p for x in ring.h], p)
        if len(g) != 1:
            raise DomainError("not a unit in the tower ring")
        x0 = [(c * pow(g[0], -1, p)) % p for c in u]
        x = ring.from_y_poly((x0 + [0] * ring.b)[: ring.b])
        steps = max(1, (ring.eN - 1).bit_length())
        for _ in range(steps):
            x = x * (2 - self * x)
        assert (self * x - 1).is_zero(), "unit inversion failed"
        return x.copy_with(x.c, self.pi_prec)

    def valuation(self):
        """pi-adic valuation as a Fraction with denominator e (v(p) = 1);
        None when the element is indistinguishable from zero."""
        s, _ = self._val_unit(stop_at_unit=False)
        if s is None:
            return None
        return Fraction(s, self.ring.e)

    def pi_valuation(self):
        s, _ = self._val_unit(stop_at_unit=False)
        return s

    def unit_part(self):
        """(s, u) with self = pi^s * u, u a unit; pi = z - 1."""
        s, u = self._val_unit(stop_at_unit=True)
        if s is None:
            raise PrecisionError("element is indistinguishable from zero")
        return s, u

    def _val_unit(self, stop_at_unit: bool):
        ring = self.ring
        if self.is_zero():
            return None, None
        w = self
        s = 0
        while s < self.pi_prec:
            if any(w.residue()):
                return s, w
            w = _divide_by_pi(w)
            s += 1
        return None, None

    def galois(self, label: GaloisLabel):
        return galois_act(label, self)

    def __repr__(self):
        nz = sum(1 for row in self.c for x in row if x)
        return f"TowerElement({self.ring!r}, {nz} nonzero coeffs)"


# ---------------------------------------------------------------------
# multiplication via Kronecker substitution
# ---------------------------------------------------------------------


def _pack(ring: TowerRing, elt: TowerElement) -> int:
    W = ring.slot
    ys = ring.ystride
    buf = bytearray((ring.phi - 1) * ys * W + ring.b * W)
    for zj, row in enumerate(elt.c):
        base = zj * ys * W
        for yi, x in enumerate(row):
            if x:
                buf[base + yi * W : base + (yi + 1) * W] = x.to_bytes(W, "little")
    return int.from_bytes(buf, "little")


def _kron_mul(ring: TowerRing, a: TowerElement, b: TowerElement) -> TowerElement:
    W = ring.slot
    ys = ring.ystride
    prod = _pack(ring, a) * _pack(ring, b)
    nslots = (2 * ring.phi - 1) * ys
    raw = prod.to_bytes(nslots * W + W, "little")
    m = ring.mod
    bb = ring.b
    h = ring.h
    # gather slot values: wide[zj][yi] over 2*phi-1 z-slots, 2b-1 y-slots
    out = [[0] * bb for _ in range(ring.phi)]
    for zs in range(2 * ring.phi - 1):
        base = zs * ys * W
        row = [
            int.from_bytes(raw[base + yi * W : base + (yi + 1) * W], "little")
            for yi in range(ys)
        ]
        if not any(row):
            continue
        # reduce y-degree via h
        for d in range(2 * bb - 2, bb - 1, -1):
            c = row[d] % m
            if c:
                for i in range(bb):
                    row[d - bb + i] -= c * h[i]
            row[d] = 0
        # reduce z-degree via the precomputed table
        for idx, s in ring.zred[zs]:
            orow = out[idx]
            if s == 1:
                for i in range(bb):
                    orow[i] += row[i]
            else:
                for i in range(bb):
                    orow[i] -= row[i]
    out = [[x % m for x in row] for row in out]
    return TowerElement(ring, out, min(a.pi_prec, b.pi_prec))


# ---------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def build_tower(params: PadicParams, b: int, n: int) -> TowerRing:
    """Build the tower ring, choosing zeta_f deterministically.

    Candidate minimal polynomials for zeta_f are the monic degree-b
    divisors of Phi_f mod p, enumerated in lexicographic coefficient
    order (constant term first); within a factor the designated root is
    the class of y itself.  The first candidate whose root has an
    F_p-linearly independent Frobenius orbit wins, then gets Hensel
    lifted to mod p^N.
    """
    if b < 1:
        raise DomainError("unramified degree b must be >= 1")
    if n < 0:
        raise DomainError("tower level n must be >= 0")
    p, N = params.p, params.N
    f = p**b - 1
    phi_f = [c % p for c in cyclotomic_polynomial(f)]
    h0 = None
    for cand in _monic_candidates(p, b):
        _, r = _fp_divmod(phi_f, cand, p)
        if r:
            continue
        if _normal_basis_ok(cand, p, b):
            h0 = cand
            break
    if h0 is None:
        raise DomainError("no normal-basis factor found (cannot happen for valid input)")
    h = _hensel_lift_factor(cyclotomic_polynomial(f), h0, p, N)
    ring = TowerRing(params, b, n, h)
    return ring


def _monic_candidates(p, b):
    """Monic degree-b polynomials over F_p in lexicographic coefficient
    order (c_0, ..., c_{b-1})."""
    total = p**b
    for code in range(total):
        coeffs = []
        x = code
        for _ in range(b):
            coeffs.append(x % p)
            x //= p
        # code digits give (c_{b-1}, ..., c_0); flip for lex order on (c_0, ...)
        yield list(reversed(coeffs)) + [1]


def _normal_basis_ok(cand, p, b):
    """Frobenius orbit of the class of x is an F_p-basis of F_p[x]/(cand)."""
    if b == 1:
        return (-cand[0]) % p != 0
    rows = []
    cur = [0, 1] + [0] * (b - 2)
    for _ in range(b):
        rows.append(list(cur))
        nxt = [0] * b
        # cur^p mod cand
        acc = [1] + [0] * (b - 1)
        # fast pow
        base = list(cur)
        e = p
        while e:
            if e & 1:
                acc = _fp_polymulmod(acc, base, cand, p)
            base = _fp_polymulmod(base, base, cand, p)
            e >>= 1
        cur = acc
    # Gaussian elimination over F_p
    mat = [list(r) for r in rows]
    rank = 0
    for col in range(b):
        piv = next((r for r in range(rank, b) if mat[r][col] % p), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], -1, p)
        mat[rank] = [(x * inv) % p for x in mat[rank]]
        for r in range(b):
            if r != rank and mat[r][col]:
                c = mat[r][col]
                mat[r] = [(x - c * y) % p for x, y in zip(mat[r], mat[rank])]
        rank += 1
    return rank == b


def _fp_polymulmod(a, b, mod, p):
    prod = _poly_mul(a, b)
    _, r = _fp_divmod(prod, mod, p)
    return (r + [0] * (len(mod) - 1))[: len(mod) - 1]


def _hensel_lift_factor(A, g0, p, N):
    """Lift a simple factor g0 of A mod p to a monic factor of A mod p^N."""
    A = list(A)
    B0, r = _fp_divmod([c % p for c in A], g0, p)
    assert not r
    gg, u, v = _fp_xgcd(g0, B0, p)
    assert len(gg) == 1 and gg[0] % p, "factor not coprime to cofactor"
    ginv = pow(gg[0], -1, p)
    u = [(c * ginv) % p for c in u]
    v = [(c * ginv) % p for c in v]
    g = [c % p**N for c in g0]
    B = [c % p**N for c in B0]
    m = p**N
    for k in range(1, N):
        pk = p**k
        prod = _poly_mul(g, B)
        err = [((ac - pc) // pk) % p for ac, pc in _zip_pad_int(A, prod)]
        _poly_trim(err)
        ve = _poly_mul(v, err)
        q, dg = _fp_divmod(ve, g0, p)
        dB = [
            (x + y) % p
            for x, y in _zip_pad_int(_poly_mul(u, err), _poly_mul(B0, q))
        ]
        _poly_trim(dB)
        g = [(a + pk * (dg[i] if i < len(dg) else 0)) % m for i, a in enumerate(g)]
        B = [
            (a + pk * (dB[i] if i < len(dB) else 0)) % m
            for i, a in enumerate((B + [0] * max(0, len(dB) - len(B))))
        ]
    assert g[-1] == 1 and len(g) == len(g0)
    prod = _poly_mul(g, B)
    assert all((a - b) % m == 0 for a, b in _zip_pad_int(A, prod)), "Hensel lift failed"
    return g


def _zip_pad_int(a, b):
    n = max(len(a), len(b))
    return [
        ((a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)) for i in range(n)
    ]


# ---------------------------------------------------------------------
# Galois action, norms, logarithm
# ---------------------------------------------------------------------


def galois_act(label: GaloisLabel, x: TowerElement) -> TowerElement:
    """Apply sigma_(j,c): y -> Frob^j(y), z -> z^c (a ring homomorphism)."""
    ring = x.ring
    j = label.j % ring.b
    c = label.c % ring.pn1
    if c % ring.params.p == 0:
        raise DomainError("label c must be a unit mod p^(n+1)")
    m = ring.mod
    out = [[0] * ring.b for _ in range(ring.phi)]
    # precompute Frob^j(y)^i for i < b
    fp = ring.frob_pows[j]
    ypows = [[1] + [0] * (ring.b - 1)]
    for _ in range(1, ring.b):
        ypows.append(ring.ur_mul(ypows[-1], fp))
    for zj, row in enumerate(x.c):
        if not any(row):
            continue
        acc = [0] * ring.b
        for yi, coeff in enumerate(row):
            if coeff:
                yp = ypows[yi]
                for i in range(ring.b):
                    if yp[i]:
                        acc[i] = (acc[i] + coeff * yp[i]) % m
        for idx, s in ring.zexp[(c * zj) % ring.pn1]:
            orow = out[idx]
            if s == 1:
                for i in range(ring.b):
                    orow[i] = (orow[i] + acc[i]) % m
            else:
                for i in range(ring.b):
                    orow[i] = (orow[i] - acc[i]) % m
    return TowerElement(ring, out, x.pi_prec)


def norm_down(x: TowerElement) -> TowerElement:
    """Product over the level-n/level-(n-1) Galois conjugates, re-expressed
    one level down via z_n^p = z_{n-1}."""
    ring = x.ring
    if ring.n < 1:
        raise DomainError("norm_down needs tower level n >= 1")
    p = ring.params.p
    pn = ring.pn1 // p
    prod = x
    for k in range(1, p):
        prod = prod * galois_act(GaloisLabel(0, 1 + k * pn), x)
    low = ring.lower()
    c = [[0] * low.b for _ in range(low.phi)]
    for zj, row in enumerate(prod.c):
        if not any(row):
            continue
        if zj % p:
            raise AssertionError("norm result not in the level-(n-1) subring")
        c[zj // p] = list(row)
    return TowerElement(low, c, min(prod.pi_prec // p, low.eN))


def embed_scalar(s: PadicScalar, ring: TowerRing) -> TowerElement:
    if s.is_exact_zero():
        return ring.zero()
    if s.val < 0:
        raise DomainError("cannot embed a scalar of negative valuation")
    out = ring.zero()
    out.c[0][0] = s.lift() % ring.mod
    return TowerElement(ring, out.c, s.abs_prec * ring.e if s.prec else s.val * ring.e)


def embed_down(x: TowerElement, ring: TowerRing) -> TowerElement:
    """Interpret a level-n element supported on z-powers p*m in the
    level-(n-1) ring (inverse of the z_{n-1} -> z_n^p inclusion)."""
    p = x.ring.params.p
    c = [[0] * ring.b for _ in range(ring.phi)]
    for zj, row in enumerate(x.c):
        if any(row):
            if zj % p:
                raise DomainError("element does not lie in the lower level")
            c[zj // p] = list(row)
    return TowerElement(ring, c, min(x.pi_prec // p, ring.eN))


def _divide_by_pi(w: TowerElement) -> TowerElement:
    """Exact division by pi = z - 1 for w in the maximal ideal."""
    ring = w.ring
    m = ring.mod
    p = ring.params.p
    # w as a z-polynomial with y-poly coefficients; w(1) must be 0 mod p
    w1 = [0] * ring.b
    for row in w.c:
        for i, x in enumerate(row):
            w1[i] = (w1[i] + x) % m
    if any(x % p for x in w1):
        raise DomainError("element is not divisible by pi")
    cc = [(-(x // p)) % m for x in w1]  # scalar y-poly c with (w + c*Phi)(1) = 0
    # P(z) = w(z) + c * Phi_{p^(n+1)}(z); then q = P / (z - 1)
    pn = ring.pn1 // p
    P = [list(row) for row in w.c]
    for k in range(p - 1):  # Phi has z-exponents k*p^n for k < p; top one is z^phi
        for i in range(ring.b):
            P[k * pn][i] = (P[k * pn][i] + cc[i]) % m
    # synthetic division by (z - 1) of P + c*z^phi (degree phi)
    q = [[0] * ring.b for _ in range(ring.phi)]
    carry = list(cc)  # coefficient of z^phi
    for d in range(ring.phi - 1, -1, -1):
        q[d] = carry
        carry = [(P[d][i] + carry[i]) % m for i in range(ring.b)]
    # remainder = carry = P(1) = 0 mod p^N
    assert not any(carry), "pi-division left a remainder"
    return TowerElement(ring, q, max(0, w.pi_prec - 1))


class ScaledElement:
    """value = num * p^(-shift), num integral.

    The logarithm of a principal unit with v(u - 1) <= 1/(p-1) can fall
    outside the integer ring, so log values carry an explicit p-power
    denominator.  Addition aligns denominators; precision bookkeeping
    rides on the underlying elements.
    """

    __slots__ = ("num", "shift")

    def __init__(self, num: TowerElement, shift: int = 0):
        self.num = num
        self.shift = shift

    @property
    def ring(self):
        return self.num.ring

    @property
    def pi_prec(self):
        return self.num.pi_prec

    def is_zero(self):
        return self.num.is_zero()

    def valuation(self):
        v = self.num.valuation()
        return None if v is None else v - self.shift

    def pi_valuation(self):
        s = self.num.pi_valuation()
        return None if s is None else s - self.shift * self.ring.e

    def _align(self, other: "ScaledElement"):
        t = max(self.shift, other.shift)
        p = self.ring.params.p
        a = self.num * p ** (t - self.shift)
        b = other.num * p ** (t - other.shift)
        return a, b, t

    def __add__(self, other):
        if isinstance(other, TowerElement):
            other = ScaledElement(other, 0)
        a, b, t = self._align(other)
        return ScaledElement(a + b, t)

    def __sub__(self, other):
        if isinstance(other, TowerElement):
            other = ScaledElement(other, 0)
        a, b, t = self._align(other)
        return ScaledElement(a - b, t)

    def __neg__(self):
        return ScaledElement(-self.num, self.shift)

    def __mul__(self, other):
        if isinstance(other, ScaledElement):
            return ScaledElement(self.num * other.num, self.shift + other.shift)
        return ScaledElement(self.num * other, self.shift)

    __rmul__ = __mul__

    def galois(self, label: GaloisLabel):
        return ScaledElement(galois_act(label, self.num), self.shift)

    def as_element(self) -> TowerElement:
        """Drop the denominator when the value is actually integral."""
        p = self.ring.params.p
        d = p**self.shift
        out = []
        for row in self.num.c:
            orow = []
            for v in row:
                if v % d:
                    raise PrecisionError("value is not integral at this precision")
                orow.append(v // d)
            out.append(orow)
        return TowerElement(self.ring, out, max(0, self.num.pi_prec - self.shift * self.ring.e))

    def indistinguishable_from(self, other) -> bool:
        d = self - other
        if d.is_zero():
            return True
        s = d.num.pi_valuation()
        return s is None or s >= d.num.pi_prec

    def __repr__(self):
        return f"ScaledElement(p^-{self.shift} * {self.num!r})"


def plog_tower(u: TowerElement) -> ScaledElement:
    """Logarithm of a principal unit, with p-power convergence boosting.

    Returns (1/p^m) log(u^(p^m)) where m is minimal with
    v(u^(p^m) - 1) > 1; the result keeps the 1/p^m denominator
    explicit, and its precision records the guard digits spent on the
    series divisions.
    """
    ring = u.ring
    p, N = ring.params.p, ring.params.N
    if not u.is_principal_unit():
        raise DomainError("plog_tower needs a principal unit")
    if (u - ring.one()).is_zero():
        return ScaledElement(TowerElement(ring, ring.zero().c, u.pi_prec), 0)
    m = 0
    w = u
    while True:
        x = w - ring.one()
        if x.is_zero():
            # u^(p^m) = 1 at working precision: log vanishes at reduced precision
            return ScaledElement(
                TowerElement(ring, ring.zero().c, max(0, (N - m) * ring.e)), m
            )
        s = x.pi_valuation()
        if s is not None and s > ring.e:
            break
        if m > ring.params.N + ring.n + 3:
            raise PrecisionError("convergence boosting exhausted precision")
        w = w**p
        m += 1
    # series sum of log(w), w - 1 of valuation s/e > 1.  The cutoff uses
    # the base-p digit count of k, which dominates v_p(k) and keeps the
    # tail bound monotone.
    kmax = 1
    while (kmax * s) // ring.e - len_digits(kmax, p) < N:
        kmax += 1
    guard = max((vp_int(k, p) for k in range(1, kmax + 1)), default=0)
    digits = N - guard
    if digits - m <= 0:
        raise PrecisionError("plog_tower ran out of certified digits")
    term = ring.one()
    acc = ring.zero()
    mod = ring.mod
    for k in range(1, kmax + 1):
        term = term * x
        kv = vp_int(k, p)
        kk = k // p**kv
        kinv = pow(kk, -1, mod)
        sign = 1 if k % 2 == 1 else -1
        tc = [
            [_exact_div_mod(v, p**kv, mod) * kinv * sign % mod for v in row]
            for row in term.c
        ]
        acc = acc + TowerElement(ring, tc)
    red = ring.params.pw(digits)
    out = [[v % red for v in row] for row in acc.c]
    return ScaledElement(TowerElement(ring, out, digits * ring.e), m)


def vp_int(k: int, p: int) -> int:
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


def len_digits(k: int, p: int) -> int:
    d = 0
    while k:
        k //= p
        d += 1
    return d


def _exact_div_mod(v, d, mod):
    if v % d:
        raise AssertionError("inexact division in log series")
    return v // d


def teichmueller_part(u: TowerElement) -> TowerElement:
    """The root of unity of order dividing p^b - 1 congruent to u mod pi."""
    ring = u.ring
    if not u.is_unit():
        raise DomainError("Teichmueller part needs a unit")
    q = ring.params.p**ring.b
    w = u
    for _ in range(ring.params.N * ring.b + ring.n + 4):
        nxt = w**q
        if nxt == w:
            return w
        w = nxt
    raise PrecisionError("Teichmueller iteration did not stabilize")


def principal_part(u: TowerElement) -> TowerElement:
    """u divided by its Teichmueller part (a principal unit)."""
    return u * teichmueller_part(u).inverse()


def unit_log(u: TowerElement) -> ScaledElement:
    """Iwasawa logarithm of any unit: plog of the principal part."""
    return plog_tower(principal_part(u))
