"""Finite-field arithmetic for GF(p) and GF(2^w).

Elements are plain integers in [0, q) encoding polynomial-basis coordinates
(base-p digits, least significant digit = constant term).  Multiplication and
inversion run through log/antilog tables on a fixed generator so that matrix
kernels only ever see table lookups; addition is XOR for characteristic 2 and
modular otherwise.
"""

import numpy as np

MAX_Q = 1 << 16


class FieldError(ValueError):
    pass


def _prime_factors(x: int) -> list[int]:
    out = []
    d = 2
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            while x % d == 0:
                x //= d
        d += 1
    if x > 1:
        out.append(x)
    return out


def _split_prime_power(q: int) -> tuple[int, int]:
    """Return (p, w) with q = p^w, or raise FieldError."""
    if q < 2:
        raise FieldError(f"field size must be at least 2, got {q}")
    for p in range(2, q + 1):
        if p * p > q:
            break
        if q % p == 0:
            w = 0
            x = q
            while x % p == 0:
                x //= p
                w += 1
            if x != 1:
                raise FieldError(f"{q} is not a prime power")
            return p, w
    return q, 1  # q itself is prime


# --- polynomial arithmetic over GF(2), polynomials as int bit patterns ---

def _gf2_degree(f: int) -> int:
    return f.bit_length() - 1


def _gf2_mulmod(a: int, b: int, mod: int) -> int:
    deg = _gf2_degree(mod)
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> deg:
            a ^= mod
    return out


def _gf2_powmod(a: int, e: int, mod: int) -> int:
    out = 1
    while e:
        if e & 1:
            out = _gf2_mulmod(out, a, mod)
        a = _gf2_mulmod(a, a, mod)
        e >>= 1
    return out


def _gf2_poly_mod(a: int, b: int) -> int:
    db = _gf2_degree(b)
    while _gf2_degree(a) >= db >= 0 and a:
        a ^= b << (_gf2_degree(a) - db)
    return a


def _gf2_poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _gf2_poly_mod(a, b)
    return a


def _gf2_irreducible(f: int, w: int) -> bool:
    """f monic of degree w: irreducible iff it shares no factor with
    x^(2^d) - x for any d up to w // 2."""
    if f & 1 == 0:  # divisible by x
        return False
    for d in range(1, w // 2 + 1):
        t = _gf2_powmod(2, 1 << d, f)  # x^(2^d) mod f
        if _gf2_poly_gcd(t ^ 2, f) != 1:
            return False
    return True


def _smallest_gf2_modulus(w: int) -> int:
    for m in range(1 << w, 1 << (w + 1)):
        if _gf2_irreducible(m, w):
            return m
    raise FieldError(f"no irreducible polynomial of degree {w} found")


class Field:
    """GF(q) with q = p (prime) or q = 2^w, q <= 2^16.

    The modulus for extension fields is the lexicographically smallest
    irreducible polynomial, so fields rebuild identically from q alone.
    """

    def __init__(self, q: int):
        if q > MAX_Q:
            raise FieldError(f"field size {q} exceeds supported maximum {MAX_Q}")
        p, w = _split_prime_power(q)
        if p != 2 and w > 1:
            raise FieldError(
                f"GF({q}) = GF({p}^{w}) unsupported: only prime fields and GF(2^w)"
            )
        self.q = q
        self.p = p
        self.w = w
        if p == 2 and w > 1:
            self._mod_int = _smallest_gf2_modulus(w)
            self.modulus = tuple((self._mod_int >> i) & 1 for i in range(w + 1))
        else:
            self._mod_int = 0
            self.modulus = ()
        self.generator = self._find_generator()
        self._build_tables()

    # -- construction helpers --

    def _raw_mul(self, a: int, b: int) -> int:
        if self.w > 1:
            return _gf2_mulmod(a, b, self._mod_int)
        return (a * b) % self.p

    def _raw_pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._raw_mul(out, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return out

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        primes = _prime_factors(order)
        for g in range(2, self.q):
            if all(self._raw_pow(g, order // l) != 1 for l in primes):
                return g
        raise FieldError(f"no generator found for GF({self.q})")  # unreachable

    def _build_tables(self):
        q = self.q
        qm1 = q - 1
        # log[0] is a sentinel large enough that any sum involving it lands in
        # the zeroed tail of the exp table.
        log = np.full(q, 2 * qm1, dtype=np.int32)
        exp = np.zeros(4 * qm1 + 2, dtype=np.uint16)
        x = 1
        for i in range(qm1):
            exp[i] = x
            exp[i + qm1] = x
            log[x] = i
            x = self._raw_mul(x, self.generator)
        self.exp = exp
        self.log = log

    # -- scalar operations --

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in GF({self.q})")
        return int(self.exp[self.q - 1 - self.log[a]])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        return int(self.exp[(self.log[a] * e) % (self.q - 1)])

    # -- identity --

    def __eq__(self, other):
        return isinstance(other, Field) and self.q == other.q

    def __hash__(self):
        return hash(("Field", self.q))

    def __repr__(self):
        return f"Field(q={self.q})"


def build_field(q: int) -> Field:
    """Construct GF(q) with deterministic modulus and tables."""
    return Field(q)


def next_pow2(x: int) -> int:
    n = 1
    while n < x:
        n <<= 1
    return n
