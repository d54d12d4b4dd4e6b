"""Exact arithmetic: rationals, cyclotomic numbers, matrices, linear algebra, series.

Every computation in the package runs over a single cyclotomic field
``Q(zeta_N)``.  Elements are stored as coefficient vectors in the power basis
``1, zeta, ..., zeta^(phi(N)-1)`` modulo the cyclotomic polynomial, so
equality is structural and hashing is cheap.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "CycNumber",
    "CycMatrix",
    "RationalSeries",
    "EchelonBasis",
    "cyclotomic_polynomial",
    "cyc_arith",
    "cyc_conjugate",
    "exact_rank",
    "nullspace",
    "char_det_series",
    "det_one_minus",
    "parse_rational",
    "render_rational",
]


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an int, or a Fraction into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"cannot read a rational from {text!r}")


def render_rational(q: Fraction):
    """Integers render as ints, everything else as the string ``"p/q"``."""
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# cyclotomic polynomials


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (low degree first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("conductor must be positive")
    # x^n - 1 divided by all Phi_d for proper divisors d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_poly_divexact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _int_poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k] // den[-1]
        q[k - dd] = c
        if c:
            for i, b in enumerate(den):
                num[k - dd + i] -= c * b
    assert not any(num[:dd]), "inexact cyclotomic division"
    return q


class _Field:
    """Reduction tables for Q(zeta_N), shared by every element of that conductor."""

    def __init__(self, n: int):
        self.n = n
        self.poly = cyclotomic_polynomial(n)
        self.phi = len(self.poly) - 1
        phi = self.phi
        # x^k mod Phi_N for 0 <= k < max(N, 2 phi - 1)
        top = max(n, 2 * phi - 1)
        powers = []
        cur = [Fraction(0)] * phi
        cur[0] = Fraction(1)
        for _ in range(top):
            powers.append(tuple(cur))
            # multiply by x and reduce
            carry = cur[-1]
            nxt = [Fraction(0)] + cur[:-1]
            if carry:
                for i in range(phi):
                    nxt[i] -= carry * self.poly[i]
            cur = nxt
        self.powers = powers
        self.zero = (Fraction(0),) * phi

    def reduce(self, coeffs: Sequence) -> tuple:
        phi = self.phi
        out = [Fraction(c) for c in coeffs[:phi]]
        out.extend([Fraction(0)] * (phi - len(out)))
        n = self.n
        for k in range(phi, len(coeffs)):
            c = coeffs[k]
            if c:
                row = self.powers[k % n] if k >= len(self.powers) else self.powers[k]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(out)


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    return _Field(n)


# ---------------------------------------------------------------------------
# scalars


class CycNumber:
    """An element of Q(zeta_N), immutable and hashable.

    >>> i = CycNumber.zeta(4)
    >>> i * i
    CycNumber(4, [-1, 0])
    """

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable = ()):
        f = _field(conductor)
        self.conductor = conductor
        self.coeffs = f.reduce(list(coeffs))
        self._hash = None

    @classmethod
    def _raw(cls, conductor: int, coeffs: tuple) -> "CycNumber":
        obj = object.__new__(cls)
        obj.conductor = conductor
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, conductor: int, value) -> "CycNumber":
        f = _field(conductor)
        return cls._raw(conductor, (Fraction(value),) + f.zero[1:])

    @classmethod
    def zeta(cls, conductor: int, k: int = 1) -> "CycNumber":
        """The root of unity zeta_N^k."""
        f = _field(conductor)
        return cls._raw(conductor, f.powers[k % conductor])

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "CycNumber":
        if isinstance(other, CycNumber):
            if other.conductor != self.conductor:
                raise ValueError(
                    f"conductor mismatch: {self.conductor} vs {other.conductor}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycNumber.rational(self.conductor, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycNumber._raw(
            self.conductor, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycNumber._raw(
            self.conductor, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return CycNumber._raw(self.conductor, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNumber._raw(self.conductor, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        phi = len(a)
        if phi == 1:
            return CycNumber._raw(self.conductor, (a[0] * b[0],))
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return CycNumber._raw(self.conductor, _field(self.conductor).reduce(conv))

    __rmul__ = __mul__

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta)")
        a = self.coeffs
        if len(a) == 1 or not any(a[1:]):
            return CycNumber.rational(self.conductor, 1 / a[0])
        inv = _poly_inverse_mod(list(a), [Fraction(c) for c in _field(self.conductor).poly])
        return CycNumber(self.conductor, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta)")
            return CycNumber._raw(
                self.conductor, tuple(a / other for a in self.coeffs)
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNumber.rational(self.conductor, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CycNumber":
        """Image under zeta -> zeta^{-1} (complex conjugation)."""
        return self.galois(-1)

    def galois(self, k: int) -> "CycNumber":
        """Image under the automorphism zeta -> zeta^k (k prime to N)."""
        f = _field(self.conductor)
        n = self.conductor
        out = [Fraction(0)] * f.phi
        for i, c in enumerate(self.coeffs):
            if c:
                row = f.powers[(i * k) % n]
                for j in range(f.phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CycNumber._raw(n, tuple(out))

    def multiplicative_order(self, bound: int | None = None) -> int | None:
        """Order as a root of unity, or None if not a root of unity of order <= bound."""
        bound = bound or 2 * self.conductor
        one = CycNumber.rational(self.conductor, 1)
        x = self
        for k in range(1, bound + 1):
            if x == one:
                return k
            x = x * self
        return None

    # -- comparison and display ------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycNumber):
            return self.conductor == other.conductor and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            if not any(self.coeffs[1:]):
                h = hash(self.coeffs[0])
            else:
                h = hash((self.conductor, self.coeffs))
            self._hash = h
        return h

    def __repr__(self):
        body = ", ".join(str(render_rational(c)) for c in self.coeffs)
        return f"CycNumber({self.conductor}, [{body}])"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = str(render_rational(c))
            if k == 0:
                terms.append(cs)
            else:
                mon = "z" if k == 1 else f"z^{k}"
                terms.append(mon if c == 1 else f"-{mon}" if c == -1 else f"{cs}*{mon}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_json(self):
        """Power-basis coefficient list, rationals as ``p/q`` strings."""
        return [render_rational(c) for c in self.coeffs]


def _poly_trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    b = _poly_trim(list(b))
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[k + i] -= c * y
    return q, _poly_trim(a[: len(b) - 1])


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _poly_trim(out)


def _poly_inverse_mod(a: list, m: list) -> list:
    """u with a*u = 1 mod m, via the extended Euclidean algorithm over Q."""
    r0, r1 = _poly_trim(list(m)), _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("element not invertible modulo the cyclotomic polynomial")
    c = r1[0]
    return [x / c for x in s1]


def cyc_arith(a: CycNumber, b: CycNumber, op: str) -> CycNumber:
    """Field operation by name: one of add, sub, mul, div."""
    if a.conductor != b.conductor:
        raise ValueError(f"conductor mismatch: {a.conductor} vs {b.conductor}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def cyc_conjugate(a: CycNumber) -> CycNumber:
    return a.conjugate()


# ---------------------------------------------------------------------------
# matrices


class CycMatrix:
    """Dense immutable matrix over Q(zeta_N)."""

    __slots__ = ("conductor", "rows", "ncols", "_hash")

    def __init__(self, conductor: int, rows: Sequence[Sequence]):
        self.conductor = conductor
        conv = []
        for r in rows:
            conv.append(tuple(_lift(conductor, x) for x in r))
        if conv and len({len(r) for r in conv}) != 1:
            raise ValueError("ragged matrix")
        self.rows = tuple(conv)
        self.ncols = len(conv[0]) if conv else 0
        self._hash = None

    @classmethod
    def _raw(cls, conductor, rows, ncols):
        obj = object.__new__(cls)
        obj.conductor = conductor
        obj.rows = rows
        obj.ncols = ncols
        obj._hash = None
        return obj

    @classmethod
    def identity(cls, conductor: int, n: int) -> "CycMatrix":
        one = CycNumber.rational(conductor, 1)
        zero = CycNumber.rational(conductor, 0)
        return cls._raw(
            conductor,
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)),
            n,
        )

    @classmethod
    def diagonal(cls, conductor: int, entries: Sequence) -> "CycMatrix":
        n = len(entries)
        zero = CycNumber.rational(conductor, 0)
        rows = []
        for i, e in enumerate(entries):
            rows.append(tuple(_lift(conductor, e) if i == j else zero for j in range(n)))
        return cls._raw(conductor, tuple(rows), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return self.conductor == other.conductor and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return f"CycMatrix({self.conductor}, [{body}])"

    def __mul__(self, other):
        if isinstance(other, CycMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch in matrix product")
            cols = list(zip(*other.rows))
            zero = CycNumber.rational(self.conductor, 0)
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = zero
                    for x, y in zip(r, c):
                        if x and y:
                            acc = acc + x * y
                    row.append(acc)
                out.append(tuple(row))
            return CycMatrix._raw(self.conductor, tuple(out), other.ncols)
        return CycMatrix._raw(
            self.conductor,
            tuple(tuple(x * other for x in r) for r in self.rows),
            self.ncols,
        )

    __rmul__ = __mul__

    def __add__(self, other: "CycMatrix"):
        return CycMatrix._raw(
            self.conductor,
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other: "CycMatrix"):
        return CycMatrix._raw(
            self.conductor,
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def transpose(self) -> "CycMatrix":
        return CycMatrix._raw(self.conductor, tuple(zip(*self.rows)), len(self.rows))

    def conjugate(self) -> "CycMatrix":
        return CycMatrix._raw(
            self.conductor,
            tuple(tuple(x.conjugate() for x in r) for r in self.rows),
            self.ncols,
        )

    def trace(self) -> CycNumber:
        acc = CycNumber.rational(self.conductor, 0)
        for i, r in enumerate(self.rows):
            acc = acc + r[i]
        return acc

    def is_identity(self) -> bool:
        return all(
            (x == 1) if i == j else x.is_zero()
            for i, r in enumerate(self.rows)
            for j, x in enumerate(r)
        )

    def monomial_form(self):
        """(perm, scalars) with self[i, perm[i]] = scalars[i] if monomial, else None."""
        perm, vals = [], []
        for r in self.rows:
            nz = [j for j, x in enumerate(r) if x]
            if len(nz) != 1:
                return None
            perm.append(nz[0])
            vals.append(r[nz[0]])
        if len(set(perm)) != len(perm):
            return None
        return tuple(perm), tuple(vals)

    def determinant(self) -> CycNumber:
        n = self.nrows
        a = [list(r) for r in self.rows]
        det = CycNumber.rational(self.conductor, 1)
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                return CycNumber.rational(self.conductor, 0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            p = a[col][col]
            det = det * p
            inv = p.inverse()
            for i in range(col + 1, n):
                if a[i][col]:
                    f = a[i][col] * inv
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return det

    def inverse(self) -> "CycMatrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("only square matrices are invertible")
        mf = self.monomial_form()
        zero = CycNumber.rational(self.conductor, 0)
        if mf is not None:
            perm, vals = mf
            rows = [[zero] * n for _ in range(n)]
            for i, (j, v) in enumerate(zip(perm, vals)):
                rows[j][i] = v.inverse()
            return CycMatrix._raw(self.conductor, tuple(map(tuple, rows)), n)
        one = CycNumber.rational(self.conductor, 1)
        a = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            inv = a[col][col].inverse()
            a[col] = [x * inv for x in a[col]]
            for i in range(n):
                if i != col and a[i][col]:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return CycMatrix._raw(self.conductor, tuple(tuple(r[n:]) for r in a), n)

    def compound(self, k: int) -> "CycMatrix":
        """k-th compound matrix: the action on the k-th exterior power."""
        from itertools import combinations

        idx = list(combinations(range(self.nrows), k))
        jdx = list(combinations(range(self.ncols), k))
        rows = []
        for I in idx:
            row = []
            for J in jdx:
                sub = CycMatrix._raw(
                    self.conductor,
                    tuple(tuple(self.rows[i][j] for j in J) for i in I),
                    k,
                )
                row.append(sub.determinant() if k else CycNumber.rational(self.conductor, 1))
            rows.append(tuple(row))
        return CycMatrix._raw(self.conductor, tuple(rows), len(jdx))

    def to_json(self):
        return [[x.to_json() for x in r] for r in self.rows]


def _lift(conductor: int, x) -> CycNumber:
    if isinstance(x, CycNumber):
        if x.conductor != conductor:
            raise ValueError(f"conductor mismatch: {x.conductor} vs {conductor}")
        return x
    if isinstance(x, (int, Fraction)):
        return CycNumber.rational(conductor, x)
    if isinstance(x, str):
        return CycNumber.rational(conductor, Fraction(x))
    # a coefficient list in the power basis
    return CycNumber(conductor, [parse_rational(c) for c in x])


# ---------------------------------------------------------------------------
# linear algebra


class EchelonBasis:
    """Row-echelon basis of a subspace, grown one sparse vector at a time.

    Vectors are dicts ``{column: value}`` with no explicit zeros.  Each stored
    row is normalised to 1 at its pivot, the first nonzero column, so the
    pivot choice is deterministic.
    """

    def __init__(self):
        self.rows: dict[int, dict] = {}
        self._order: list[int] = []

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def reduce(self, vec: dict) -> dict:
        vec = {k: v for k, v in vec.items() if v}
        if not vec:
            return vec
        for p in self.pivots:
            c = vec.get(p)
            if c is None:
                continue
            for k, v in self.rows[p].items():
                nv = vec.get(k)
                nv = -c * v if nv is None else nv - c * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            if not vec:
                break
        return vec

    def add(self, vec: dict) -> bool:
        """Insert vec; return True if it enlarged the span."""
        vec = self.reduce(vec)
        if not vec:
            return False
        p = min(vec)
        inv = vec[p].inverse() if isinstance(vec[p], CycNumber) else 1 / vec[p]
        self.rows[p] = {k: v * inv for k, v in vec.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def reduced_rows(self) -> list[dict]:
        """Fully reduced rows (zero above every pivot), in pivot order."""
        piv = self.pivots
        rows = {p: dict(self.rows[p]) for p in piv}
        for p in reversed(piv):
            row = rows[p]
            for q in piv:
                if q >= p:
                    break
                other = rows[q]
                c = other.get(p)
                if c:
                    for k, v in row.items():
                        nv = other.get(k)
                        nv = -c * v if nv is None else nv - c * v
                        if nv:
                            other[k] = nv
                        else:
                            other.pop(k, None)
        return [rows[p] for p in piv]


def _dense_to_sparse(row) -> dict:
    return {j: x for j, x in enumerate(row) if x}


def exact_rank(M) -> int:
    """Rank over Q(zeta_N) of a CycMatrix or a list of rows (dense lists or sparse dicts)."""
    rows = M.rows if isinstance(M, CycMatrix) else M
    basis = EchelonBasis()
    for r in rows:
        basis.add(r if isinstance(r, dict) else _dense_to_sparse(r))
    return len(basis)


def nullspace(rows, ncols: int, with_free: bool = False):
    """Basis of {v : row . v = 0 for every row}, in reduced form.

    The kernel vector for each free column f has a 1 at f and zeros at the
    other free columns.
    """
    basis = EchelonBasis()
    for r in rows:
        basis.add(r if isinstance(r, dict) else _dense_to_sparse(r))
    red = basis.reduced_rows()
    pivots = basis.pivots
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    out = []
    for f in free:
        vec = {f: 1}
        for p, row in zip(pivots, red):
            c = row.get(f)
            if c:
                vec[p] = -c
        out.append(vec)
    if with_free:
        return out, free
    return out


# ---------------------------------------------------------------------------
# truncated power series


class RationalSeries:
    """Power series truncated at t^T.

    Coefficients are Fractions or CycNumbers; nothing beyond index T is ever
    read or produced.
    """

    __slots__ = ("truncation", "coeffs")

    def __init__(self, coeffs: Sequence, truncation: int):
        coeffs = list(coeffs[: truncation + 1])
        if coeffs:
            zero = coeffs[0] * 0
        else:
            zero = Fraction(0)
        coeffs.extend([zero] * (truncation + 1 - len(coeffs)))
        self.truncation = truncation
        self.coeffs = coeffs

    @classmethod
    def one(cls, truncation: int, one=Fraction(1)) -> "RationalSeries":
        return cls([one], truncation)

    def __len__(self):
        return self.truncation + 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __eq__(self, other):
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return self.truncation == other.truncation and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __repr__(self):
        return f"RationalSeries({[str(c) for c in self.coeffs]}, T={self.truncation})"

    def _check(self, other):
        if self.truncation != other.truncation:
            raise ValueError("series truncations differ")

    def __add__(self, other: "RationalSeries"):
        self._check(other)
        return RationalSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.truncation)

    def __sub__(self, other: "RationalSeries"):
        self._check(other)
        return RationalSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.truncation)

    def scale(self, c) -> "RationalSeries":
        return RationalSeries([a * c for a in self.coeffs], self.truncation)

    def __mul__(self, other):
        if not isinstance(other, RationalSeries):
            return self.scale(other)
        self._check(other)
        T = self.truncation
        a, b = self.coeffs, other.coeffs
        zero = a[0] * 0
        out = [zero] * (T + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(T + 1 - i):
                    y = b[j]
                    if y:
                        out[i + j] = out[i + j] + x * y
        return RationalSeries(out, T)

    def mul_poly(self, poly: Sequence) -> "RationalSeries":
        """Multiply by a polynomial given as a coefficient list."""
        T = self.truncation
        a = self.coeffs
        zero = a[0] * 0
        out = [zero] * (T + 1)
        for i, x in enumerate(poly):
            if x and i <= T:
                for j in range(T + 1 - i):
                    y = a[j]
                    if y:
                        out[i + j] = out[i + j] + x * y
        return RationalSeries(out, T)

    def inverse(self) -> "RationalSeries":
        a = self.coeffs
        if not a[0]:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        inv0 = 1 / a[0]
        T = self.truncation
        out = [inv0]
        for k in range(1, T + 1):
            acc = a[0] * 0
            for i in range(1, k + 1):
                if a[i]:
                    acc = acc + a[i] * out[k - i]
            out.append(-acc * inv0)
        return RationalSeries(out, T)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])


def det_one_minus(M: CycMatrix) -> list[CycNumber]:
    """Coefficients of det(1 - s M) in s (Faddeev-LeVerrier)."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("det(1 - tM) needs a square matrix")
    cond = M.conductor
    mf = M.monomial_form()
    if mf is not None:
        return _det_one_minus_monomial(cond, *mf)
    one = CycNumber.rational(cond, 1)
    coeffs = [one]
    ident = CycMatrix.identity(cond, n)
    Mk = CycMatrix.diagonal(cond, [0] * n)
    for k in range(1, n + 1):
        Mk = M * Mk + ident * coeffs[-1]
        coeffs.append(-(M * Mk).trace() / k)
    return coeffs


def _det_one_minus_monomial(cond, perm, vals) -> list[CycNumber]:
    # product over cycles of (1 - s^len * prod of scalars on the cycle)
    one = CycNumber.rational(cond, 1)
    n = len(perm)
    seen = [False] * n
    poly = [one]
    for start in range(n):
        if seen[start]:
            continue
        length, prod, i = 0, one, start
        while not seen[i]:
            seen[i] = True
            prod = prod * vals[i]
            i = perm[i]
            length += 1
        factor = [one] + [one * 0] * (length - 1) + [-prod]
        new = [one * 0] * (len(poly) + length)
        for a, x in enumerate(poly):
            for b, y in enumerate(factor):
                if x and y:
                    new[a + b] = new[a + b] + x * y
        poly = new
    return poly


def char_det_series(M: CycMatrix, scale_power: int, trunc: int):
    """Return (det(1 - t^d M) as a coefficient list, 1/det(1 - tM) to order trunc)."""
    if M.nrows != M.ncols:
        raise ValueError("char_det_series needs a square matrix")
    base = det_one_minus(M)
    zero = base[0] * 0
    det_poly = [zero] * (scale_power * (len(base) - 1) + 1)
    for k, c in enumerate(base):
        det_poly[scale_power * k] = c
    recip = RationalSeries(base, trunc).inverse()
    return det_poly, recip
