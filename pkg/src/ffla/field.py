"""Word-size prime fields, small extension fields, and dense polynomials.

PrimeField supports two canonical element representations: the classic
residues [0, p-1] and the centered residues [(1-p)/2, (p-1)/2] used by
the delayed-reduction multiplication kernels.  ExtField is a table-backed
GF(p^k) with total order capped at 2**16; its elements are integers whose
base-p digits are the polynomial coefficients.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DomainError, RepresentationError
from .rng import SplitMix64

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MODULUS_CAP = 1 << 62
EXTFIELD_ORDER_CAP = 1 << 16


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Rep(Enum):
    CLASSIC = "classic"
    CENTERED = "centered"


class PrimeField:
    """Arithmetic context for GF(p), p an odd prime or 2, p < 2**62."""

    __slots__ = ("p", "rep", "half", "dtype")

    def __init__(self, p: int, rep: Rep = Rep.CLASSIC):
        if not is_probable_prime(p):
            raise DomainError(f"{p} is not prime")
        if p >= MODULUS_CAP:
            raise DomainError(f"modulus {p} exceeds the 2**62 cap")
        if rep is Rep.CENTERED and p == 2:
            raise RepresentationError("centered representation requires an odd prime")
        self.p = p
        self.rep = rep
        self.half = (p - 1) // 2
        # int64 storage if two canonical elements multiply without overflow
        self.dtype = np.int64 if (p - 1) ** 2 < 2**63 else object

    # -- scalar arithmetic ------------------------------------------------

    def canon(self, x: int) -> int:
        x = x % self.p
        if self.rep is Rep.CENTERED and x > self.half:
            x -= self.p
        return x

    def add(self, a: int, b: int) -> int:
        return self.canon(a + b)

    def sub(self, a: int, b: int) -> int:
        return self.canon(a - b)

    def mul(self, a: int, b: int) -> int:
        return self.canon(a * b)

    def neg(self, a: int) -> int:
        return self.canon(-a)

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise DomainError("inversion of zero")
        return self.canon(pow(a % self.p, self.p - 2, self.p))

    def pow(self, a: int, e: int) -> int:
        return self.canon(pow(a % self.p, e, self.p))

    def is_canonical(self, x: int) -> bool:
        if self.rep is Rep.CLASSIC:
            return 0 <= x < self.p
        return -self.half <= x <= self.half

    def to_classic(self, x: int) -> int:
        return x % self.p

    # -- array helpers -----------------------------------------------------

    def canon_array(self, arr: np.ndarray) -> np.ndarray:
        """Reduce any integer array into the canonical range of this mode."""
        r = arr % self.p  # numpy / python '%' both give the sign of the divisor
        if self.rep is Rep.CENTERED:
            r = r - self.p * (r > self.half)
        if self.dtype is np.int64 and r.dtype != np.int64:
            r = r.astype(np.int64)
        return r

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def random_array(self, rng: SplitMix64, shape) -> np.ndarray:
        count = int(np.prod(shape)) if shape else 1
        flat = rng.below_array(self.p, count)
        if self.dtype is object:
            flat = flat.astype(object)
        return self.canon_array(flat.reshape(shape))

    # -- sampling ----------------------------------------------------------

    def random(self, rng: SplitMix64) -> int:
        return self.canon(rng.below(self.p))

    def random_nonzero(self, rng: SplitMix64) -> int:
        return self.canon(1 + rng.below(self.p - 1))

    def sample_size(self) -> int:
        """|S| for probability reports: all nonzero field elements."""
        return self.p - 1

    def __eq__(self, other):
        return (
            isinstance(other, PrimeField) and self.p == other.p and self.rep == other.rep
        )

    def __hash__(self):
        return hash((self.p, self.rep))

    def __repr__(self):
        return f"PrimeField({self.p}, {self.rep.value})"


class Polynomial:
    """Dense univariate polynomial over a PrimeField, low degree first."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: PrimeField, coeffs):
        cs = [ctx.canon(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, [])

    @classmethod
    def one(cls, ctx):
        return cls(ctx, [1])

    @classmethod
    def x(cls, ctx):
        return cls(ctx, [0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def leading(self) -> int:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ctx == other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else (f"x^{i}" if c == 1 else f"{c}*x^{i}"))
        return "Poly(" + " + ".join(terms) + ")"

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial(self.ctx, [other])
        return other

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(self.ctx, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] -= c
        return Polynomial(self.ctx, out)

    def __neg__(self):
        return Polynomial(self.ctx, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial.zero(self.ctx)
        p = self.ctx.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % p
        return Polynomial(self.ctx, out)

    __rmul__ = __mul__

    def scale(self, s: int):
        return Polynomial(self.ctx, [c * s for c in self.coeffs])

    def shift(self, k: int):
        """Multiply by x**k."""
        if self.is_zero():
            return self
        return Polynomial(self.ctx, (0,) * k + self.coeffs)

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        if self.ctx.to_classic(lead) == 1:
            return self
        return self.scale(self.ctx.inv(lead))

    def divmod(self, other):
        if other.is_zero():
            raise DomainError("polynomial division by zero")
        ctx = self.ctx
        rem = list(self.coeffs)
        d = other.degree
        lead_inv = ctx.inv(other.leading())
        q = [0] * max(0, len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] % ctx.p
            if c:
                f = ctx.mul(c, lead_inv)
                q[i - d] = f
                for j, oc in enumerate(other.coeffs):
                    rem[i - d + j] = (rem[i - d + j] - f * oc) % ctx.p
        return Polynomial(ctx, q), Polynomial(ctx, rem[:d])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def divides(self, other) -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def lcm(self, other):
        if self.is_zero() or other.is_zero():
            return Polynomial.zero(self.ctx)
        g = self.gcd(other)
        return ((self * other) // g).monic()

    def eval(self, x: int) -> int:
        acc = 0
        p = self.ctx.p
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return self.ctx.canon(acc)

    def derivative(self):
        return Polynomial(self.ctx, [i * c for i, c in enumerate(self.coeffs)][1:])

    def pow_mod(self, e: int, modulus: "Polynomial") -> "Polynomial":
        result = Polynomial.one(self.ctx)
        base = self % modulus
        while e > 0:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result


def distinct_degree_factor_degrees(f: Polynomial, q: int) -> list[int]:
    """Degrees (with repetition across distinct factors) of the distinct
    monic irreducible factors of f over GF(q).

    Only the degree profile is computed, never the factors themselves.
    Multiplicities are ignored: x**2*(x+1) yields [1, 1].
    """
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    if q != f.ctx.p:
        raise DomainError("field order must match the coefficient field")
    g = f.monic()
    degrees: list[int] = []
    if g.degree <= 0:
        return degrees
    x = Polynomial.x(f.ctx)
    frob = x.pow_mod(q, g)  # x^q mod g
    d = 1
    while g.degree > 0:
        if 2 * d > g.degree:
            # factors of degree <= g.degree/2 are all gone: g is irreducible
            degrees.append(g.degree)
            break
        h = g.gcd(frob - x)
        if h.degree > 0:
            degrees.extend([d] * (h.degree // d))
            # strip every copy of the degree-d factors
            t = h
            while t.degree > 0:
                g = g // t
                t = g.gcd(h)
            if g.degree == 0:
                break
            frob = frob % g
        d += 1
        frob = frob.pow_mod(q, g)
    degrees.sort()
    return degrees


def totient_phi(f: Polynomial, q: int, k: int) -> Fraction:
    """Extended totient: product of (1 - q**(-k*d)) over the degrees d of
    the distinct monic irreducible factors of f.  Exact rational."""
    if f.is_zero():
        raise DomainError("totient of the zero polynomial")
    result = Fraction(1)
    for d in distinct_degree_factor_degrees(f, q):
        result *= 1 - Fraction(1, q ** (k * d))
    return result


def _poly_is_irreducible(f: Polynomial, p: int) -> bool:
    if f.degree < 1:
        return False
    return distinct_degree_factor_degrees(f, p) == [f.degree]


class ExtField:
    """Table-backed GF(p^k).

    Elements are integers in [0, p^k) whose base-p digits are the
    coefficients of the residue polynomial.  Multiplicative structure is
    stored in generator-power tables, so the total order is capped at 2**16.
    """

    __slots__ = ("p", "k", "order", "base", "modulus", "exp_table", "log_table",
                 "_reduction")

    def __init__(self, p: int, k: int, modulus: Polynomial | None = None, seed: int = 1):
        order = p**k
        if order > EXTFIELD_ORDER_CAP:
            raise ConfigError(f"field order {order} exceeds the 2**16 table cap")
        if k < 1:
            raise DomainError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.order = order
        self.base = PrimeField(p)
        if modulus is None:
            modulus = self._find_irreducible(seed)
        else:
            modulus = modulus.monic()
            if modulus.degree != k or not _poly_is_irreducible(modulus, p):
                raise DomainError("modulus must be a monic irreducible of degree k")
        self.modulus = modulus
        self._build_tables()

    def _find_irreducible(self, seed: int) -> Polynomial:
        if self.k == 1:
            return Polynomial(self.base, [0, 1])
        rng = SplitMix64(seed ^ (self.p << 20) ^ self.k)
        while True:
            coeffs = [rng.below(self.p) for _ in range(self.k)] + [1]
            f = Polynomial(self.base, coeffs)
            if _poly_is_irreducible(f, self.p):
                return f

    # -- integer <-> coefficient encoding ---------------------------------

    def encode(self, coeffs) -> int:
        val = 0
        for c in reversed(list(coeffs)):
            val = val * self.p + (c % self.p)
        return val

    def decode(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def _mul_raw(self, a: int, b: int) -> int:
        """Product in the quotient ring on raw coefficient lists (table build)."""
        p, k = self.p, self.k
        if k == 1:
            return a * b % p
        da, db = self.decode(a), self.decode(b)
        out = [0] * (2 * k - 1)
        for i, ai in enumerate(da):
            if ai:
                for j, bj in enumerate(db):
                    out[i + j] += ai * bj
        red = self._reduction
        for d in range(2 * k - 2, k - 1, -1):
            c = out[d] % p
            if c:
                for j in range(k):
                    out[d - k + j] += c * red[j]
        return self.encode(v % p for v in out[:k])

    def _build_tables(self):
        n = self.order - 1
        # x^k = -(m_0 + ... + m_{k-1} x^{k-1})  (modulus is monic)
        self._reduction = [(-c) % self.p for c in
                           (list(self.modulus.coeffs[:-1]) + [0] * self.k)[: self.k]]
        for g in range(2 if n > 1 else 1, self.order):
            # walk the powers of g; a generator closes the cycle after n steps
            exp = [1]
            cur = 1
            for _ in range(n - 1):
                cur = self._mul_raw(cur, g)
                if cur == 1:
                    break
                exp.append(cur)
            if len(exp) == n:
                self.exp_table = exp
                log = [0] * self.order
                for i, v in enumerate(exp):
                    log[v] = i
                self.log_table = log
                return
        raise ConfigError("no generator found (non-prime modulus?)")

    # -- arithmetic --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        da, db = self.decode(a), self.decode(b)
        return self.encode([(x + y) % self.p for x, y in zip(da, db)])

    def sub(self, a: int, b: int) -> int:
        da, db = self.decode(a), self.decode(b)
        return self.encode([(x - y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self.encode([(-x) % self.p for x in self.decode(a)])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        n = self.order - 1
        return self.exp_table[(self.log_table[a] + self.log_table[b]) % n]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("inversion of zero")
        n = self.order - 1
        return self.exp_table[(-self.log_table[a]) % n]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        n = self.order - 1
        return self.exp_table[(self.log_table[a] * e) % n]

    def kronecker_eval(self, a: int, q: int) -> int:
        """Evaluate the residue polynomial of `a` at radix q, with classic
        (nonnegative) coefficient representatives."""
        val = 0
        for c in reversed(self.decode(a)):
            val = val * q + c
        return val

    def random(self, rng: SplitMix64) -> int:
        return rng.below(self.order)

    def random_nonzero(self, rng: SplitMix64) -> int:
        return 1 + rng.below(self.order - 1)

    def element_x(self) -> int:
        """The element represented by the polynomial x (requires k >= 2)."""
        return self.p if self.k >= 2 else 1

    def __repr__(self):
        return f"ExtField(GF({self.p}^{self.k}), modulus={self.modulus})"
