"""Exact homogeneous polynomial arithmetic over Q and prime fields.

Monomials are stored as integer keys.  For a ring in N variables with 8-bit
exponent fields, the key of x^a is ``deg(a) * B**N - sum(a_i * B**i)`` with
``B = 256``.  The key is linear in the exponent vector, so multiplying
monomials is integer addition, and integer comparison of keys is the graded
reverse lexicographic order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

FIELD_BITS = 8
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1
DEFAULT_PRIME = 32003


class ParseError(ValueError):
    """Raised for malformed polynomial text; ``pos`` is the 0-based offset."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """The rationals (``p is None``) or the prime field of odd order ``p``."""

    __slots__ = ("p",)

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if p == 2 or not _is_prime(p):
                raise ValueError(f"characteristic must be an odd prime, got {p}")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @classmethod
    def parse(cls, spec):
        spec = spec.strip().lower()
        if spec in ("q", "qq"):
            return cls(None)
        if spec.startswith("fp:"):
            try:
                p = int(spec[3:])
            except ValueError:
                raise ValueError(f"bad field spec {spec!r}") from None
            return cls(p)
        raise ValueError(f"bad field spec {spec!r}; expected 'q' or 'fp:<odd prime>'")

    @property
    def spec(self):
        return "q" if self.p is None else f"fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.spec!r})"

    def __call__(self, x):
        """Coerce an int or Fraction into a canonical field element."""
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError("denominator divisible by the characteristic")
            return x.numerator * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def to_string(self, c):
        """Decimal ``num/den`` for Q, symmetric residue for F_p."""
        if self.p is None:
            return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return str(c - self.p if c > self.p // 2 else c)

    def from_string(self, s):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/")
            if int(den) == 0:
                raise ZeroDivisionError("zero denominator")
            return self(Fraction(int(num), int(den)))
        return self(int(s))


class Ring:
    """Graded polynomial ring k[x0, ..., x_{n}] in ``nvars`` variables."""

    def __init__(self, nvars, field=None):
        if not 1 <= nvars <= 10:
            raise ValueError("between 1 and 10 variables are supported")
        self.nvars = nvars
        self.field = field if field is not None else Field(DEFAULT_PRIME)
        self.shift = FIELD_BITS * nvars
        self.base = 1 << self.shift
        self.guard = sum((1 << (FIELD_BITS - 1)) << (FIELD_BITS * i) for i in range(nvars))
        self._weights = tuple(self.base - (1 << (FIELD_BITS * i)) for i in range(nvars))

    def __eq__(self, other):
        return isinstance(other, Ring) and self.nvars == other.nvars and self.field == other.field

    def __hash__(self):
        return hash((self.nvars, self.field))

    def __repr__(self):
        return f"Ring({self.nvars}, {self.field.spec})"

    @property
    def n(self):
        """Dimension of the ambient projective space."""
        return self.nvars - 1

    # monomial keys

    def key(self, exps):
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        if any(e < 0 or e > MAX_EXPONENT for e in exps):
            raise OverflowError("exponent out of range")
        return sum(e * w for e, w in zip(exps, self._weights))

    def key_degree(self, k):
        return (k + self.base - 1) >> self.shift

    def key_packed(self, k):
        return (((k + self.base - 1) >> self.shift) << self.shift) - k

    def key_exps(self, k):
        packed = self.key_packed(k)
        mask = (1 << FIELD_BITS) - 1
        return tuple((packed >> (FIELD_BITS * i)) & mask for i in range(self.nvars))

    def divides(self, pa, pb):
        """Whether packed monomial ``pa`` divides packed monomial ``pb``."""
        g = self.guard
        return ((pb | g) - pa) & g == g

    def monomial_keys(self, degree):
        """Keys of all monomials of the given degree, in decreasing order."""
        return _monomial_keys(self.nvars, degree)

    def num_monomials(self, degree):
        if degree < 0:
            return 0
        from math import comb

        return comb(degree + self.nvars - 1, self.nvars - 1)

    # constructors

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.field(c)
        return Polynomial(self, {0: c} if c else {})

    def var(self, i):
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable x{i} not in ring with {self.nvars} variables")
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {self.key(exps): self.field(1)})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1):
        c = self.field(coeff)
        return Polynomial(self, {self.key(tuple(exps)): c} if c else {})

    def parse(self, text):
        return parse_polynomial(text, self.nvars, self.field)


@lru_cache(maxsize=None)
def _monomial_keys(nvars, degree):
    if degree < 0:
        return ()
    ring = Ring(nvars, Field(3))
    keys = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for v in combo:
            exps[v] += 1
        keys.append(ring.key(exps))
    keys.sort(reverse=True)
    return tuple(keys)


class _Sentinel:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


NON_HOMOGENEOUS = _Sentinel("NON_HOMOGENEOUS")
ANY_DEGREE = _Sentinel("ANY_DEGREE")


class Polynomial:
    """Immutable polynomial; ``terms`` maps monomial key to nonzero coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # structure

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self):
        """``(exponents, coefficient)`` pairs, leading term first."""
        r = self.ring
        return [(r.key_exps(k), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    def leading_coefficient(self):
        return self.terms[max(self.terms)] if self.terms else self.ring.field(0)

    def leading_exponents(self):
        return self.ring.key_exps(max(self.terms))

    def degree(self):
        """Total degree if homogeneous, else NON_HOMOGENEOUS; ANY_DEGREE for zero."""
        return homogeneous_degree(self)

    def is_constant(self):
        return all(k == 0 for k in self.terms)

    def constant_term(self):
        return self.terms.get(0, self.ring.field(0))

    # arithmetic

    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _combine(self.terms, other.terms, 1, self.ring.field.p))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _combine(self.terms, other.terms, -1, self.ring.field.p))

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        p = self.ring.field.p
        if p is None:
            return Polynomial(self.ring, {k: -c for k, c in self.terms.items()})
        return Polynomial(self.ring, {k: p - c for k, c in self.terms.items()})

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero()
        r = self.ring
        if r.key_degree(max(self.terms)) + r.key_degree(max(other.terms)) > MAX_EXPONENT:
            raise OverflowError("product degree exceeds supported range")
        p = r.field.p
        out = {}
        get = out.get
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        if p is None:
            out = {k: c for k, c in out.items() if c}
        else:
            out = {k: c % p for k, c in out.items() if c % p}
        return Polynomial(r, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c):
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        p = self.ring.field.p
        if p is None:
            return Polynomial(self.ring, {k: v * c for k, v in self.terms.items()})
        return Polynomial(self.ring, {k: v * c % p for k, v in self.terms.items()})

    def shift_key(self, k):
        """Multiply by the monomial with key ``k``."""
        return Polynomial(self.ring, {kk + k: c for kk, c in self.terms.items()})

    def diff(self, i):
        """Partial derivative with respect to x_i."""
        r = self.ring
        out = self.ring.zero()
        for exps, c in self.sorted_terms():
            if exps[i]:
                e = list(exps)
                e[i] -= 1
                out = out + r.monomial(e, r.field(exps[i]) * c)
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def _combine(a, b, sign, p):
    out = dict(a)
    get = out.get
    for k, c in b.items():
        v = get(k, 0) + sign * c
        if p is not None:
            v %= p
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def homogeneous_degree(poly):
    if not poly.terms:
        return ANY_DEGREE
    r = poly.ring
    degs = {r.key_degree(k) for k in poly.terms}
    if len(degs) != 1:
        return NON_HOMOGENEOUS
    return degs.pop()


def poly_ring_ops(a, b, op):
    """Apply ``op`` in {'add', 'sub', 'mul'} to two polynomials of one ring."""
    if a.ring != b.ring:
        raise ValueError("ambient ring mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def format_polynomial(poly):
    if not poly.terms:
        return "0"
    field = poly.ring.field
    pieces = []
    for exps, c in poly.sorted_terms():
        s = field.to_string(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mono = "*".join(
            f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exps) if e
        )
        if mono:
            body = mono if s == "1" else f"{s}*{mono}"
        else:
            body = s
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|([-+*^/()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m:
            bad = pos + len(stripped[pos:]) - len(stripped[pos:].lstrip())
            raise ParseError(f"unexpected character {stripped[bad]!r}", bad)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("var", int(m.group(2)), start))
        else:
            tokens.append((m.group(3), None, start))
        pos = m.end()
    tokens.append(("end", None, len(stripped)))
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i][0]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in "+-" and self.peek() != "end":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() == "*":
            self.take()
            value = value * self.unary()
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exp = self.take("num")[1]
            base = base**exp
        return base

    def atom(self):
        kind, val, pos = self.tokens[self.i]
        if kind == "num":
            self.take()
            if self.peek() == "/":
                self.take()
                _, den, dpos = self.take("num")
                if den == 0:
                    raise ParseError("division by zero in coefficient", dpos)
                try:
                    return self.ring.const(Fraction(val, den))
                except ZeroDivisionError:
                    raise ParseError("denominator vanishes in the field", dpos) from None
            return self.ring.const(val)
        if kind == "var":
            self.take()
            if val >= self.ring.nvars:
                raise ParseError(f"unknown variable x{val} (ring has {self.ring.nvars})", pos)
            return self.ring.var(val)
        if kind == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        raise ParseError(f"unexpected token {kind!r}", pos)


def parse_polynomial(text, num_vars, field=None):
    """Parse ``text`` into a canonical polynomial in ``num_vars`` variables.

    Grammar: variables ``x0``..``x9``, operators ``+ - * ^``, integer and
    ``num/den`` literals, parentheses.  ``field`` may be a Field or a spec
    string such as ``"q"`` or ``"fp:32003"``.
    """
    if isinstance(field, str):
        field = Field.parse(field)
    ring = num_vars if isinstance(num_vars, Ring) else Ring(num_vars, field)
    parser = _Parser(text, ring)
    if parser.peek() == "end":
        raise ParseError("empty expression", 0)
    value = parser.expr()
    if parser.peek() != "end":
        tok = parser.tokens[parser.i]
        raise ParseError(f"unexpected token {tok[0]!r}", tok[2])
    return value


class PolyMatrix:
    """Dense matrix of polynomials over one ring."""

    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring, rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else (ncols or 0)
        for r in rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")
            for e in r:
                if e.ring != ring:
                    raise ValueError("matrix entries must share the ambient ring")

    @classmethod
    def from_strings(cls, ring, rows):
        return cls(ring, [[ring.parse(s) if isinstance(s, str) else s for s in r] for r in rows])

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero()
        return cls(ring, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, ring, size, scalar=None):
        one = ring.one() if scalar is None else scalar
        z = ring.zero()
        return cls(ring, [[one if i == j else z for j in range(size)] for i in range(size)], size)

    @classmethod
    def from_columns(cls, ring, nrows, columns):
        cols = list(columns)
        return cls(ring, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return PolyMatrix(self.ring, [self.column(j) for j in range(self.ncols)], self.nrows)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            return matrix_product(self, other)
        return PolyMatrix(self.ring, [[e * other for e in r] for r in self.rows], self.ncols)

    def __rmul__(self, other):
        return PolyMatrix(self.ring, [[other * e for e in r] for r in self.rows], self.ncols)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        return PolyMatrix(
            self.ring,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        return PolyMatrix(
            self.ring,
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __neg__(self):
        return PolyMatrix(self.ring, [[-a for a in r] for r in self.rows], self.ncols)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self):
        return all(e.is_zero() for r in self.rows for e in r)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return PolyMatrix(
            self.ring, [a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols
        )

    def submatrix(self, rows, cols):
        return PolyMatrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in r) for r in self.rows)
        return f"PolyMatrix([{body}])"


def matrix_product(a, b):
    if a.ncols != b.nrows:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    if a.ring != b.ring:
        raise ValueError("ambient ring mismatch")
    ring = a.ring
    cols = b.columns()
    out = []
    for r in a.rows:
        row = []
        for c in cols:
            acc = ring.zero()
            for x, y in zip(r, c):
                if x.terms and y.terms:
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return PolyMatrix(ring, out, b.ncols)


def determinant(m):
    """Determinant by Laplace expansion over column subsets (small sizes only)."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    ring = m.ring
    size = m.nrows
    if size == 0:
        return ring.one()
    # minors[S] = det of rows 0..|S|-1 against column set S
    minors = {0: ring.one()}
    for i in range(size):
        nxt = {}
        for cols, val in minors.items():
            if not val.terms:
                continue
            sign = 1
            for j in range(size - 1, -1, -1):
                bit = 1 << j
                if cols & bit:
                    sign = -sign
                    continue
                entry = m.rows[i][j]
                if entry.terms:
                    # sign counts columns in ``cols`` larger than j
                    term = val * entry
                    key = cols | bit
                    acc = nxt.get(key)
                    contrib = term if sign > 0 else -term
                    nxt[key] = contrib if acc is None else acc + contrib
        minors = nxt
    return minors.get((1 << size) - 1, ring.zero())


def pfaffian(m):
    """Pfaffian of a skew-symmetric matrix of even size, by row expansion."""
    if m.nrows != m.ncols:
        raise ValueError("Pfaffian of a non-square matrix")
    ring = m.ring

    def pf(idx):
        if not idx:
            return ring.one()
        if len(idx) % 2:
            return ring.zero()
        i = idx[0]
        total = ring.zero()
        for pos in range(1, len(idx)):
            j = idx[pos]
            entry = m.rows[i][j]
            if entry.terms:
                rest = idx[1:pos] + idx[pos + 1:]
                term = entry * pf(rest)
                total = total + term if pos % 2 == 1 else total - term
        return total

    return pf(tuple(range(m.nrows)))


def is_skew_symmetric(m):
    if m.nrows != m.ncols:
        return False
    return all(
        m.rows[i][j] == -m.rows[j][i] for i in range(m.nrows) for j in range(m.nrows)
    )
