"""Sparse multivariate polynomials over Q(zeta_N) and linear substitutions."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

from .exactnum import CycMatrix, CycNumber


class DivisionError(ArithmeticError):
    """Division by a linear form left a remainder."""


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of the given total degree, lexicographically decreasing."""
    if nvars == 0:
        return ((),) if degree == 0 else ()
    if nvars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict:
    return {m: k for k, m in enumerate(monomials(nvars, degree))}


class MultiPoly:
    """Polynomial as a dict {exponent tuple: CycNumber}; no zero coefficients stored."""

    __slots__ = ("nvars", "conductor", "terms")

    def __init__(self, nvars: int, conductor: int, terms: dict | None = None):
        self.nvars = nvars
        self.conductor = conductor
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def _raw(cls, nvars, conductor, terms):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.conductor = conductor
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, conductor: int, exps: Sequence[int], coeff=1) -> "MultiPoly":
        c = coeff if isinstance(coeff, CycNumber) else CycNumber.rational(conductor, coeff)
        return cls(len(exps), conductor, {tuple(exps): c})

    @classmethod
    def variable(cls, nvars: int, conductor: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(conductor, e)

    @classmethod
    def linear_form(cls, conductor: int, coeffs: Sequence[CycNumber]) -> "MultiPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls._raw(n, conductor, terms)

    def zero_like(self) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, self.conductor, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(k) for k in self.terms}) <= 1

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mon = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"({self.terms[e]})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k)
            nv = v if nv is None else nv + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return MultiPoly._raw(self.nvars, self.conductor, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k)
            nv = -v if nv is None else nv - v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return MultiPoly._raw(self.nvars, self.conductor, out)

    def __neg__(self):
        return MultiPoly._raw(self.nvars, self.conductor, {k: -v for k, v in self.terms.items()})

    def scale(self, c) -> "MultiPoly":
        if not c:
            return self.zero_like()
        return MultiPoly._raw(self.nvars, self.conductor, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                nv = out.get(k)
                p = v1 * v2
                nv = p if nv is None else nv + p
                out[k] = nv
        return MultiPoly._raw(self.nvars, self.conductor, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        result = MultiPoly.monomial(self.conductor, [0] * self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, i: int) -> "MultiPoly":
        out = {}
        for e, v in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[ne] = v * e[i]
        return MultiPoly._raw(self.nvars, self.conductor, out)

    def constant_term(self) -> CycNumber:
        return self.terms.get((0,) * self.nvars, CycNumber.rational(self.conductor, 0))

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._raw(
            self.nvars, self.conductor, {k: v for k, v in self.terms.items() if sum(k) == d}
        )

    def to_vector(self, degree: int) -> dict:
        """Coordinates in the monomial basis of the given degree (sparse)."""
        idx = monomial_index(self.nvars, degree)
        out = {}
        for e, v in self.terms.items():
            if sum(e) != degree:
                raise ValueError("polynomial is not homogeneous of the requested degree")
            out[idx[e]] = v
        return out

    @classmethod
    def from_vector(cls, nvars: int, conductor: int, degree: int, vec: dict) -> "MultiPoly":
        mons = monomials(nvars, degree)
        return cls._raw(nvars, conductor, {mons[k]: v for k, v in vec.items() if v})

    def divide_linear(self, alpha: Sequence[CycNumber]) -> "MultiPoly":
        """Exact quotient by the linear form sum alpha_k x_k; raises on a remainder."""
        p = next(k for k, a in enumerate(alpha) if a)
        inv = alpha[p].inverse()
        others = [(k, a) for k, a in enumerate(alpha) if a and k != p]
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            # the term with the highest power of x_p (ties: largest exponent tuple)
            e = max(rem, key=lambda t: (t[p], t))
            if e[p] == 0:
                raise DivisionError("polynomial is not divisible by the linear form")
            c = rem.pop(e) * inv
            qe = e[:p] + (e[p] - 1,) + e[p + 1 :]
            quot[qe] = quot.get(qe, 0) + c if qe in quot else c
            for k, a in others:
                te = qe[:k] + (qe[k] + 1,) + qe[k + 1 :]
                nv = rem.get(te)
                nv = -c * a if nv is None else nv - c * a
                if nv:
                    rem[te] = nv
                else:
                    rem.pop(te, None)
        return MultiPoly._raw(self.nvars, self.conductor, {k: v for k, v in quot.items() if v})

    def substitute(self, S: CycMatrix) -> "MultiPoly":
        """Replace each x_k by sum_l S[k, l] x_l."""
        return substitute_linear(self, S)


def substitute_linear(f: MultiPoly, S: CycMatrix) -> MultiPoly:
    n = f.nvars
    mf = S.monomial_form()
    if mf is not None:
        perm, vals = mf
        out = {}
        for e, v in f.terms.items():
            ne = [0] * n
            c = v
            for k, a in enumerate(e):
                if a:
                    ne[perm[k]] += a
                    c = c * vals[k] ** a
            out[tuple(ne)] = out[tuple(ne)] + c if tuple(ne) in out else c
        return MultiPoly._raw(n, f.conductor, {k: v for k, v in out.items() if v})
    forms = [MultiPoly.linear_form(f.conductor, S.rows[k]) for k in range(n)]
    powers: dict = {}

    def power(k, a):
        key = (k, a)
        if key not in powers:
            powers[key] = forms[k] ** a
        return powers[key]

    acc = f.zero_like()
    for e, v in f.terms.items():
        term = MultiPoly.monomial(f.conductor, [0] * n, v)
        for k, a in enumerate(e):
            if a:
                term = term * power(k, a)
        acc = acc + term
    return acc


def block_diagonal(blocks: Sequence[CycMatrix]) -> CycMatrix:
    cond = blocks[0].conductor
    total = sum(B.nrows for B in blocks)
    zero = CycNumber.rational(cond, 0)
    rows = []
    off = 0
    for B in blocks:
        s = B.nrows
        for r in B.rows:
            rows.append([zero] * off + list(r) + [zero] * (total - off - s))
        off += s
    return CycMatrix(cond, rows)


def block_substitute(f: MultiPoly, blocks: Sequence[CycMatrix]) -> MultiPoly:
    """Substitute block-diagonally: variables are split into consecutive blocks."""
    if len(blocks) == 1:
        return substitute_linear(f, blocks[0])
    return substitute_linear(f, block_diagonal(blocks))


def iter_terms(f: MultiPoly) -> Iterator[tuple[tuple[int, ...], CycNumber]]:
    for e in sorted(f.terms):
        yield e, f.terms[e]
