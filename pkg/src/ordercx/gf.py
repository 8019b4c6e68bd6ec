"""Finite fields F_{p^n} with an optional conjugation over the index-2 subfield.

Elements are stored as integer codes: the coefficient vector
``(c_0, ..., c_{n-1})`` in the power basis of the modulus is packed as
``sum(c_k * p**k)``.  Integer order on codes is therefore lexicographic order
on ``(c_{n-1}, ..., c_0)``, which is the enumeration order of the field.

Bulk arithmetic on numpy arrays of codes goes through ``FieldSpec.vadd`` and
friends; the linear algebra module only ever uses those.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import budget
from .errors import FieldError, InverseOfZero

TABLE_LIMIT = 1024


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


# -- polynomials over F_p, coefficient lists low -> high -------------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _trim(a)
    m = _trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for k, c in enumerate(m):
            a[shift + k] = (a[shift + k] - factor * c) % p
        a = _trim(a)
    return a


def irreducible(modulus, p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    n = len(modulus) - 1
    for deg in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            divisor = list(tail) + [1]
            if not _poly_mod(modulus, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, n: int) -> tuple:
    # lex order on (c_{n-1}, ..., c_0); for n == 2 this picks x^2 + k
    # with the smallest k whenever such a modulus exists
    for high_to_low in itertools.product(range(p), repeat=n):
        modulus = tuple(reversed(high_to_low)) + (1,)
        if irreducible(modulus, p):
            return modulus
    raise AssertionError(f"no irreducible polynomial of degree {n} over F_{p}")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    modulus: tuple
    conjugation: bool = False

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.n < 1 or len(self.modulus) != self.n + 1 or self.modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree n")
        if self.conjugation and self.n % 2:
            raise FieldError("conjugation needs an even extension degree")
        if not irreducible(self.modulus, self.p):
            raise FieldError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def subfield_degree(self):
        return self.n // 2 if self.conjugation else None

    @property
    def subfield_order(self) -> int:
        if not self.conjugation:
            raise FieldError("conjugation not enabled")
        return self.p ** (self.n // 2)

    def __repr__(self):
        tag = ", conj" if self.conjugation else ""
        return f"GF({self.p}^{self.n}{tag})"

    # -- scalar arithmetic on codes ---------------------------------------

    def digits(self, code: int) -> list:
        out = []
        for _ in range(self.n):
            code, r = divmod(code, self.p)
            out.append(r)
        return out

    def from_digits(self, digits) -> int:
        code = 0
        for c in reversed(list(digits)):
            code = code * self.p + (c % self.p)
        return code

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.n == 1:
            return -a % self.p
        return self.from_digits(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.n - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        prod = [c % self.p for c in prod]
        return self.from_digits(_poly_mod(prod, self.modulus, self.p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise InverseOfZero("inverse of zero in " + repr(self))
        return self.pow(a, self.q - 2)

    def conj(self, a: int) -> int:
        return self.pow(a, self.subfield_order)

    # -- vectorized arithmetic on integer arrays of codes ------------------

    @cached_property
    def _tables(self):
        q = self.q
        if self.n == 1 or q > TABLE_LIMIT:
            return None
        codes = np.arange(q)
        digits = np.array([self.digits(c) for c in codes], dtype=np.int64)
        add = np.zeros((q, q), dtype=np.int64)
        for k in range(self.n):
            col = digits[:, k]
            add += ((col[:, None] + col[None, :]) % self.p) * self.p**k
        neg = np.array([self.neg(int(c)) for c in codes], dtype=np.int64)
        # log/exp tables from a primitive element
        exp = None
        for g in range(2, q):
            powers = [1]
            x = 1
            for _ in range(q - 2):
                x = self.mul(x, g)
                powers.append(x)
            if len(set(powers)) == q - 1:
                exp = np.array(powers, dtype=np.int64)
                break
        if exp is None:  # q == 2 handled by n == 1; only q-1 == 1 remains
            exp = np.array([1], dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        mul = np.zeros((q, q), dtype=np.int64)
        nz = codes[1:]
        mul[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % (q - 1)]
        inv = np.zeros(q, dtype=np.int64)
        inv[nz] = exp[(-log[nz]) % (q - 1)]
        return {"add": add, "neg": neg, "mul": mul, "inv": inv}

    @cached_property
    def _prime_inv(self):
        p = self.p
        inv = np.zeros(p, dtype=np.int64)
        for a in range(1, p):
            inv[a] = pow(a, p - 2, p)
        return inv

    def _vectorized(self, name):
        return np.vectorize(getattr(self, name), otypes=[np.int64])

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        t = self._tables
        if t is not None:
            return t["add"][a, b]
        return self._vectorized("add")(a, b)

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            return -a % self.p
        if self.p == 2:
            return a.copy()
        t = self._tables
        if t is not None:
            return t["neg"][a]
        return self._vectorized("neg")(a)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return a * b % self.p
        t = self._tables
        if t is not None:
            return t["mul"][a, b]
        return self._vectorized("mul")(a, b)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise InverseOfZero("inverse of zero in " + repr(self))
        if self.n == 1:
            if self.p <= 2**16:
                return self._prime_inv[a]
            return self._vectorized("inv")(a)
        t = self._tables
        if t is not None:
            return t["inv"][a]
        return self._vectorized("inv")(a)

    @cached_property
    def _conj_table(self):
        return np.array([self.conj(c) for c in range(self.q)], dtype=np.int64)

    def vconj(self, a):
        if not self.conjugation:
            raise FieldError("conjugation not enabled")
        return self._conj_table[np.asarray(a, dtype=np.int64)]

    # -- elements ----------------------------------------------------------

    def elem(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.spec != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != self.n or any(not 0 <= c < self.p for c in value):
                raise FieldError(f"bad coefficient vector {value!r} for {self!r}")
            return FieldElem(self, self.from_digits(value))
        value = int(value)
        if not 0 <= value < self.q:
            raise FieldError(f"code {value} out of range for {self!r}")
        return FieldElem(self, value)

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    @property
    def generator(self) -> "FieldElem":
        """The class of x in F_p[x]/(modulus) (equal to -c_0 when n == 1)."""
        if self.n == 1:
            return FieldElem(self, -self.modulus[0] % self.p)
        return FieldElem(self, self.p)

    def format_code(self, code: int) -> str:
        if self.n == 1:
            return str(code)
        terms = []
        for k, c in enumerate(self.digits(code)):
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) or "0"

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus),
                "conjugation": self.conjugation}


@dataclass(frozen=True)
class FieldElem:
    spec: FieldSpec
    value: int

    @property
    def coeffs(self) -> tuple:
        return tuple(self.spec.digits(self.value))

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.spec != self.spec:
                raise FieldError("mixed-field operands")
            return other.value
        if isinstance(other, int):
            return other % self.spec.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.spec, self.spec.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.spec, self.spec.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.spec, self.spec.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.spec, self.spec.mul(self.value, b))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.spec, self.spec.neg(self.value))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.spec, self.spec.mul(self.value, self.spec.inv(b)))

    def __pow__(self, e: int):
        return FieldElem(self.spec, self.spec.pow(self.value, e))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.spec, self.spec.inv(self.value))

    def conjugate(self) -> "FieldElem":
        return conjugate(self.spec, self)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return self.spec.format_code(self.value)

    def to_json(self) -> dict:
        return {"p": self.spec.p, "n": self.spec.n, "coeffs": list(self.coeffs)}


@lru_cache(maxsize=None)
def field_make(p: int, n: int = 1, conjugation: bool = False) -> FieldSpec:
    """Build F_{p^n} with the lexicographically smallest monic irreducible modulus.

    The same arguments always return the same (cached) object, so lookup
    tables are built once per field.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if n < 1:
        raise FieldError("extension degree must be >= 1")
    if conjugation and n % 2:
        raise FieldError("conjugation needs an even extension degree")
    budget.check("field", p**n, f"field of order {p}^{n}")
    return FieldSpec(p, n, smallest_irreducible(p, n), conjugation)


def field_of_order(q: int, conjugation: bool = False) -> FieldSpec:
    for p in range(2, q + 1):
        if q % p == 0:
            n, r = 0, q
            while r % p == 0:
                r //= p
                n += 1
            if r != 1 or not is_prime(p):
                break
            return field_make(p, n, conjugation)
    raise FieldError(f"{q} is not a prime power")


def field_arith(spec: FieldSpec, op: str, a, b=None) -> FieldElem:
    """Dispatch form of the field operations (``op`` in add/sub/mul/inv/neg/pow)."""
    a = spec.elem(a)
    if op == "add":
        return a + spec.elem(b)
    if op == "sub":
        return a - spec.elem(b)
    if op == "mul":
        return a * spec.elem(b)
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")


def conjugate(spec: FieldSpec, a) -> FieldElem:
    """Frobenius a -> a^(p^(n/2)); on F_q[x]/(x^2+k) this is a+bx -> a-bx."""
    if not spec.conjugation:
        raise FieldError("conjugation not enabled on " + repr(spec))
    a = spec.elem(a)
    return FieldElem(spec, spec.conj(a.value))


def enumerate_field(spec: FieldSpec) -> list:
    return [FieldElem(spec, c) for c in range(spec.q)]


def find_antiself_conjugate(spec: FieldSpec) -> FieldElem:
    """First nonzero lambda (in enumeration order) with conj(lambda) == -lambda."""
    for lam in enumerate_field(spec)[1:]:
        if conjugate(spec, lam) == -lam:
            return lam
    raise AssertionError(f"no anti-self-conjugate element in {spec!r}")


def elem_from_json(obj: dict, conjugation: bool = False) -> FieldElem:
    spec = field_make(int(obj["p"]), int(obj["n"]), conjugation)
    return spec.elem(tuple(int(c) for c in obj["coeffs"]))
