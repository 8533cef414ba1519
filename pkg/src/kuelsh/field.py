"""Exact arithmetic in finite fields GF(p^k).

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c_i`` is the
coefficient of ``g**i`` and ``g`` is a root of the field's modulus.  The
encoding doubles as the decimal JSON representation and as the sweep
order for exhaustive searches.

A :class:`FieldDesc` works on raw encodings (scalar methods and vectorised
numpy methods); :class:`FieldElem` is the typed wrapper used at the API
boundary and in the presentation DSL.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    DegreeZero,
    DivisionByZero,
    ElementSyntaxError,
    MixedFields,
    NotPrime,
    SizeOverflow,
)

#: largest field order accepted by :func:`field_make`
MAX_ORDER = 2**64

# beyond these sizes the table-driven paths are skipped
_LOG_TABLE_LIMIT = 2**16
_ADD_TABLE_LIMIT = 2**10
_INT64_PRIME_LIMIT = 2**31


def _is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


def _is_irreducible(coeffs_low_to_high: tuple[int, ...], p: int) -> bool:
    from sympy.polys.domains import ZZ
    from sympy.polys.galoistools import gf_irreducible_p

    return bool(gf_irreducible_p(list(reversed(coeffs_low_to_high)), p, ZZ))


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k, low-to-high."""
    if k == 1:
        return (0, 1)
    # c0 = 0 gives a factor x, so the sweep starts at c0 = 1
    for c0 in range(1, p):
        for rest in np.ndindex(*([p] * (k - 1))):
            cand = (c0, *map(int, rest), 1)
            if _is_irreducible(cand, p):
                return cand
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True)
class FieldDesc:
    """GF(p^k) with a fixed modulus.  Build through :func:`field_make`."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    # ------------------------------------------------------------------
    # encodings

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, ds) -> int:
        v = 0
        for d in reversed(list(ds)):
            v = v * self.p + (int(d) % self.p)
        return v

    def elem(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.desc != self:
                raise MixedFields(f"{value!r} does not belong to {self!r}")
            return value
        if isinstance(value, str):
            return parse_element(self, value)
        return FieldElem(self, self.from_int(int(value)))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(q)."""
        return n % self.p

    def elements(self):
        return range(self.q)

    # ------------------------------------------------------------------
    # tables

    @cached_property
    def _log_tables(self):
        """(exp, log) for extension fields of moderate size."""
        q = self.q
        for cand in range(2, q):
            exp = [1]
            x = cand
            while x != 1:
                exp.append(x)
                x = self._poly_mul(x, cand)
            if len(exp) == q - 1:
                log = [0] * q
                for i, e in enumerate(exp):
                    log[e] = i
                return exp, log
        raise AssertionError("no primitive element found")

    @cached_property
    def _np_log_tables(self):
        exp, log = self._log_tables
        return np.array(exp, dtype=np.int64), np.array(log, dtype=np.int64)

    @cached_property
    def _add_table(self):
        q = self.q
        tab = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = self.digits(a)
            for b in range(q):
                tab[a, b] = self.from_digits(x + y for x, y in zip(da, self.digits(b)))
        return tab

    @cached_property
    def _mode(self) -> str:
        if self.k == 1:
            return "prime64" if self.p < _INT64_PRIME_LIMIT else "prime_obj"
        if self.q <= _LOG_TABLE_LIMIT:
            return "ext_table"
        return "ext_obj"

    @property
    def dtype(self):
        return object if self._mode in ("prime_obj", "ext_obj") else np.int64

    # ------------------------------------------------------------------
    # scalar arithmetic on encodings

    def _poly_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                for j in range(k + 1):
                    prod[deg - k + j] = (prod[deg - k + j] - c * self.modulus[j]) % p
        return self.from_digits(prod[:k])

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_digits(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._mode == "ext_table":
            exp, log = self._log_tables
            return exp[(log[a] + log[b]) % (self.q - 1)]
        return self._poly_mul(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(a, e, self.p)
        e %= self.q - 1
        if self._mode == "ext_table":
            exp, log = self._log_tables
            return exp[(log[a] * e) % (self.q - 1)]
        result, base = 1, a
        while e:
            if e & 1:
                result = self._poly_mul(result, base)
            base = self._poly_mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int, n: int = 1) -> int:
        """a ** (p ** n)."""
        n %= self.k
        return a if n == 0 else self.pow(a, self.p**n)

    def frob_inv(self, a: int, n: int = 1) -> int:
        """The unique b with b ** (p ** n) == a."""
        return self.frob(a, (-n) % self.k)

    # ------------------------------------------------------------------
    # vectorised arithmetic on numpy arrays of encodings

    def asarray(self, x) -> np.ndarray:
        return np.asarray(x, dtype=self.dtype)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        mode = self._mode
        if mode in ("prime64", "prime_obj"):
            return (a + b) % self.p
        if self.p == 2 and mode == "ext_table":
            return np.bitwise_xor(a, b)
        if mode == "ext_table" and self.q <= _ADD_TABLE_LIMIT:
            return self._add_table[a, b]
        if mode == "ext_table":
            out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
            a = np.asarray(a)
            b = np.asarray(b)
            place = 1
            for _ in range(self.k):
                a, ra = np.divmod(a, self.p)
                b, rb = np.divmod(b, self.p)
                out += ((ra + rb) % self.p) * place
                place *= self.p
            return out
        return np.frompyfunc(self.add, 2, 1)(a, b)

    def vneg(self, a: np.ndarray) -> np.ndarray:
        mode = self._mode
        if mode in ("prime64", "prime_obj"):
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        return np.frompyfunc(self.neg, 1, 1)(a).astype(self.dtype)

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product (broadcasting)."""
        mode = self._mode
        if mode in ("prime64", "prime_obj"):
            return (a * b) % self.p
        if mode == "ext_table":
            exp, log = self._np_log_tables
            a = np.asarray(a)
            b = np.asarray(b)
            nz = (a != 0) & (b != 0)
            return np.where(nz, exp[(log[a] + log[b]) % (self.q - 1)], 0)
        return np.frompyfunc(self.mul, 2, 1)(a, b)

    def vscale(self, c: int, a: np.ndarray) -> np.ndarray:
        if c == 1:
            return a.copy()
        return self.vmul(np.asarray(c, dtype=self.dtype), a)

    def vfrob(self, a: np.ndarray, n: int) -> np.ndarray:
        return np.frompyfunc(lambda x: self.frob(x, n), 1, 1)(a).astype(self.dtype)

    def vfrob_inv(self, a: np.ndarray, n: int) -> np.ndarray:
        return np.frompyfunc(lambda x: self.frob_inv(x, n), 1, 1)(a).astype(self.dtype)

    def dot(self, a: np.ndarray, b: np.ndarray) -> int:
        """Inner product of two 1-d arrays."""
        if self._mode == "prime64" and self.p < 2**20:
            return int(np.dot(a, b) % self.p)
        total = 0
        for x, y in zip(a.tolist(), b.tolist()):
            if x and y:
                total = self.add(total, self.mul(x, y))
        return total

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product over the field."""
        if self._mode == "prime64" and self.p < 2**20:
            inner = a.shape[-1] if a.ndim else 0
            if (self.p - 1) ** 2 * max(inner, 1) < 2**53:
                # exact in float64, and BLAS is far faster than integer matmul
                prod = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
                return (prod.astype(np.int64) % self.p).astype(self.dtype)
            # int64 accumulation is safe for (p-1)^2 * n < 2^63
            return (a @ b) % self.p
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.zeros((a.shape[0], b.shape[1]))
        for j in range(a.shape[1]):
            col = a[:, j]
            nz = np.nonzero(col)[0]
            if len(nz) == 0:
                continue
            row = b[j]
            if not np.any(row != 0):
                continue
            out[nz] = self.vadd(out[nz], self.vmul(col[nz][:, None], row[None, :]))
        return out

    # ------------------------------------------------------------------
    # text

    def format(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        terms = []
        for i, c in reversed(list(enumerate(self.digits(a)))):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "g" if i == 1 else f"g^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> int:
        return parse_element(self, text).value


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> FieldDesc:
    """Build GF(p^k) with the lexicographically smallest monic irreducible modulus."""
    if not isinstance(p, int) or not isinstance(k, int):
        raise TypeError("p and k must be integers")
    if k < 1:
        raise DegreeZero(f"extension degree must be >= 1, got {k}")
    if p < 2 or not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p**k > MAX_ORDER:
        raise SizeOverflow(f"GF({p}^{k}) exceeds the supported order 2^64")
    modulus = _smallest_irreducible(p, k)
    if k > 1 and not _is_irreducible(modulus, p):
        raise AssertionError("modulus selection produced a reducible polynomial")
    return FieldDesc(p, k, modulus)


@dataclass(frozen=True)
class FieldElem:
    desc: FieldDesc
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.desc.digits(self.value))

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.desc != self.desc:
                raise MixedFields(f"cannot combine {self.desc!r} and {other.desc!r}")
            return other.value
        if isinstance(other, int):
            return self.desc.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FieldElem(self.desc, self.desc.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FieldElem(self.desc, self.desc.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return FieldElem(self.desc, self.desc.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return FieldElem(self.desc, self.desc.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return FieldElem(self.desc, self.desc.div(self.value, o))

    def __neg__(self):
        return FieldElem(self.desc, self.desc.neg(self.value))

    def __pow__(self, e: int):
        return FieldElem(self.desc, self.desc.pow(self.value, e))

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.desc == other.desc and self.value == other.value
        if isinstance(other, int):
            return self.value == self.desc.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.desc.p, self.desc.k, self.value))

    def inv(self) -> "FieldElem":
        return FieldElem(self.desc, self.desc.inv(self.value))

    def __str__(self) -> str:
        return self.desc.format(self.value)

    def __repr__(self) -> str:
        return f"FieldElem({self.desc!r}, {self})"


def field_arith(a: FieldElem, b: FieldElem | None, op: str) -> FieldElem:
    """Dispatch one of add/mul/neg/inv; the function form of the operators."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    raise ValueError(f"unknown field operation {op!r}")


def frobenius(a: FieldElem, n: int = 1) -> FieldElem:
    if n < 0:
        raise ValueError("iterate count must be >= 0")
    return FieldElem(a.desc, a.desc.frob(a.value, n))


def frobenius_inverse(a: FieldElem, n: int = 1) -> FieldElem:
    if n < 0:
        raise ValueError("iterate count must be >= 0")
    return FieldElem(a.desc, a.desc.frob_inv(a.value, n))


_TERM = re.compile(r"\s*(?:(\d+)\s*\*?\s*)?(g(?:\s*\^\s*(\d+))?)?\s*")


def parse_element(desc: FieldDesc, text: str) -> FieldElem:
    """Parse polynomial-in-g notation such as ``2*g^2+1`` or ``g+1``."""
    s = text.strip()
    if not s:
        raise ElementSyntaxError("empty field element")
    extra: dict[int, int] = {}
    pos = 0
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        pos = 1
    while True:
        m = _TERM.match(s, pos)
        coef_txt, g_txt, exp_txt = m.group(1), m.group(2), m.group(3)
        if coef_txt is None and g_txt is None:
            raise ElementSyntaxError(f"cannot parse field element {text!r} at offset {pos}")
        if desc.k == 1 and g_txt is not None:
            raise ElementSyntaxError(f"'g' is not defined in the prime field {desc!r}")
        coef = int(coef_txt) if coef_txt is not None else 1
        deg = 0 if g_txt is None else (int(exp_txt) if exp_txt is not None else 1)
        extra[deg] = extra.get(deg, 0) + sign * coef
        pos = m.end()
        if pos == len(s):
            break
        if s[pos] not in "+-":
            raise ElementSyntaxError(f"unexpected {s[pos]!r} in field element {text!r}")
        sign = -1 if s[pos] == "-" else 1
        pos += 1
    value = 0
    for deg, coef in extra.items():
        term = desc.mul(desc.from_int(coef), desc.pow(_gen(desc), deg))
        value = desc.add(value, term)
    return FieldElem(desc, value)


def _gen(desc: FieldDesc) -> int:
    """Encoding of g (the modulus root); in a prime field with modulus x this is 0."""
    return desc.p if desc.k > 1 else 0
