"""Molien series, degrees, fake degrees, Koszul characters and the numerology report.

Convention: the polynomial ring is C[h], functions on the defining space, with
(w.f)(v) = f(M_w^{-1} v).  Its degree-one component is therefore the dual
representation V*, carried by the inverse-transpose matrices.  Both V and V*
exponent multisets are always computed, so nothing below depends on which of
the two is called "h".
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .exactnum import CycNumber, RationalSeries, det_one_minus
from .group import (
    ReflectionGroup,
    Representation,
    defining_rep,
    dual_rep,
    is_real,
    stats,
)
from .parallel import pmap


class SeriesError(ValueError):
    """A series that should be a nonnegative integer polynomial is not."""


def default_trunc(G: ReflectionGroup) -> int:
    return 2 * (len(G.reflections) + G.rank + 2)


def degree_one_matrices(G: ReflectionGroup):
    """Matrices of W on the span of the variables x_1..x_n."""
    return G.duals


def _as_rational(x) -> Fraction:
    if isinstance(x, CycNumber):
        return x.to_rational()
    return Fraction(x)


def _weighted_sum(terms: Counter, trunc: int, order: int) -> list:
    """(1/|W|) sum over distinct (weight, numerator poly, det poly) of count * weight * num / det."""

    def one(item):
        (weight, num, den), count = item
        s = RationalSeries(list(den), trunc).inverse()
        if num is not None:
            s = s.mul_poly(num)
        return s.scale(weight * count)

    parts = pmap(one, sorted(terms.items(), key=_term_sort_key))
    acc = parts[0]
    for p in parts[1:]:
        acc = acc + p
    return [c / order for c in acc.coeffs]


def _term_sort_key(item):
    (weight, num, den), count = item
    return (repr(weight), repr(num), repr(den), count)


def molien_series(G: ReflectionGroup, trunc: int) -> RationalSeries:
    """(1/|W|) sum_w 1/det(1 - t M_w), truncated at t^trunc."""
    one = G.one()
    terms = Counter((one, None, tuple(det_one_minus(M))) for M in degree_one_matrices(G))
    coeffs = _weighted_sum(terms, trunc, G.order)
    return RationalSeries([_as_rational(c) for c in coeffs], trunc)


def factor_degrees(series: RationalSeries, n: int) -> list[int]:
    """Greedy factorisation of a Hilbert series as prod 1/(1 - t^d)."""
    T = series.truncation
    residual = list(series.coeffs)
    degrees = []
    while True:
        k = next((i for i in range(1, T + 1) if residual[i]), None)
        if k is None:
            break
        c = residual[k]
        if c < 0 or Fraction(c).denominator != 1:
            raise SeriesError(f"Molien series obstruction {c} at t^{k} is not a positive integer")
        for _ in range(int(c)):
            degrees.append(k)
            # multiply by (1 - t^k)
            residual = [residual[i] - (residual[i - k] if i >= k else 0) for i in range(T + 1)]
        if len(degrees) > n:
            break
    return degrees


def molien_degrees(G: ReflectionGroup, trunc: int | None = None) -> list[int]:
    """Degrees of the basic invariants, certified by re-expansion to order trunc."""
    T = trunc or default_trunc(G)
    ser = molien_series(G, T)
    degrees = factor_degrees(ser, G.rank)
    if len(degrees) != G.rank:
        raise SeriesError(
            f"Molien series factors with {len(degrees)} degrees {degrees}, expected {G.rank} "
            f"(reducible or wrongly built group, or truncation {T} too small)"
        )
    if prod(degrees) != G.order:
        raise SeriesError(f"product of degrees {degrees} is {prod(degrees)}, not |W| = {G.order}")
    check = RationalSeries([Fraction(1)], T)
    for d in degrees:
        geo = [Fraction(1) if i % d == 0 else Fraction(0) for i in range(T + 1)]
        check = check * RationalSeries(geo, T)
    if check != ser:
        raise SeriesError("degree factorisation does not reproduce the Molien series")
    return sorted(degrees)


def fake_degree(G: ReflectionGroup, E: Representation, degrees=None, trunc: int | None = None) -> list[int]:
    """Graded multiplicity of E in the coinvariant ring, as an integer coefficient list."""
    degrees = degrees or molien_degrees(G)
    T = trunc or default_trunc(G)
    chi = E.character(G)
    terms = Counter(
        (chi[i].conjugate(), None, tuple(det_one_minus(A)))
        for i, A in enumerate(degree_one_matrices(G))
    )
    coeffs = _weighted_sum(terms, T, G.order)
    ser = RationalSeries(coeffs, T)
    for d in degrees:
        ser = ser.mul_poly([1] + [0] * (d - 1) + [-1])
    out = []
    for k, c in enumerate(ser.coeffs):
        q = _as_rational(c)
        if q.denominator != 1 or q < 0:
            raise SeriesError(f"fake degree of {E.name} has coefficient {q} at t^{k}")
        out.append(int(q))
    N = len(G.reflections)
    if any(out[N + 1 :]):
        raise SeriesError(f"fake degree of {E.name} extends beyond degree N = {N}")
    while len(out) > 1 and not out[-1]:
        out.pop()
    if sum(out) != E.dimension:
        raise SeriesError(f"fake degree of {E.name} has total {sum(out)}, not dim E = {E.dimension}")
    return out


def exponents_of(G: ReflectionGroup, E: Representation, degrees=None, trunc: int | None = None) -> list[int]:
    fd = fake_degree(G, E, degrees, trunc)
    return sorted(k for k, c in enumerate(fd) for _ in range(c))


@dataclass
class DegreeData:
    degrees: list[int]
    exponents_by_rep: dict[str, list[int]]
    coexponents: list[int]
    exponent_rep: str = "V"

    @property
    def exponents(self) -> list[int]:
        return [d - 1 for d in self.degrees]


def degree_data(G: ReflectionGroup, trunc: int | None = None) -> DegreeData:
    degrees = molien_degrees(G, trunc)
    byrep = {
        "V": exponents_of(G, defining_rep(G), degrees, trunc),
        "V*": exponents_of(G, dual_rep(G), degrees, trunc),
    }
    shifted = [d - 1 for d in degrees]
    if byrep["V"] == shifted:
        main, other = "V", "V*"
    elif byrep["V*"] == shifted:
        main, other = "V*", "V"
    else:
        raise SeriesError(f"neither V nor V* has exponents {shifted}: {byrep}")
    return DegreeData(degrees, byrep, byrep[other], exponent_rep=main)


def coexponents(G: ReflectionGroup, trunc: int | None = None) -> list[int]:
    """Exponents of whichever of V, V* does not have exponents {d_i - 1}."""
    return degree_data(G, trunc).coexponents


# ---------------------------------------------------------------------------
# numerology


def group_class(G: ReflectionGroup) -> dict:
    """Where the duality and Catalan identities are claimed to hold."""
    real = is_real(G)
    spec = G.spec
    family_m1 = spec.is_family and spec.m == 1
    max_nh = max(rec.stabilizer_order for rec in G.hyperplanes)
    primitive_high = spec.primitive and max_nh > 2
    if real:
        reason = "real reflection group"
    elif family_m1:
        reason = "G(l,1,n)"
    elif primitive_high:
        reason = "primitive group with reflections of order > 2"
    else:
        reason = "outside the asserted classes; checks are informational"
    return {
        "real": real,
        "family_m1": family_m1,
        "primitive": spec.primitive,
        "max_reflection_order": max_nh,
        "asserted": real or family_m1 or primitive_high,
        "reason": reason,
    }


def _check(name, asserted, passed, **values):
    return {
        "name": name,
        "status": ("pass" if passed else "fail") if asserted else "informational",
        "asserted": asserted,
        "pass": passed,
        "values": values,
    }


def numerology_report(G: ReflectionGroup, trunc: int | None = None) -> dict:
    """Evaluate the degree, exponent and Catalan identities with every value."""
    st = stats(G)
    dd = degree_data(G, trunc)
    n = G.rank
    g, h = st.g, st.h
    d = dd.degrees
    co = dd.coexponents
    ex = dd.exponents
    cls = group_class(G)
    A = cls["asserted"]

    checks = []
    checks.append(_check("g_integer", True, g.denominator == 1, g=g, N=st.N, n=n))

    dual_sums = [d[i] + d[n - 1 - i] for i in range(n)]
    checks.append(
        _check("degree_duality", A, all(s == g + 2 for s in dual_sums), sums=dual_sums, target=g + 2)
    )

    lhs = [g + c + 1 for c in co]
    rhs = [h + x for x in d]
    checks.append(
        _check("coexponent_identity", A, lhs == rhs, g_plus_coexp_plus_1=lhs, h_plus_d=rhs)
    )

    cat_h = prod(Fraction(h + x, x) for x in d)
    cat_g = prod(Fraction(g + c + 1, x) for c, x in zip(co, d))
    checks.append(
        _check(
            "catalan",
            A,
            cat_h == cat_g and cat_h.denominator == 1,
            cat_from_h=cat_h,
            cat_from_g=cat_g,
            integral=cat_h.denominator == 1,
        )
    )

    exp_sums = [ex[i] + ex[n - 1 - i] for i in range(n)]
    checks.append(
        _check("exponent_duality", A, all(s == g for s in exp_sums), sums=exp_sums, target=g)
    )

    # the standard-codegree reading of the same identity, reported for comparison
    codeg = [c - 1 for c in co]
    checks.append(
        _check(
            "codegree_reading",
            False,
            [g + c + 1 for c in codeg] == rhs,
            codegrees=codeg,
            g_plus_codeg_plus_1=[g + c + 1 for c in codeg],
            h_plus_d=rhs,
        )
    )
    checks.append(
        _check(
            "shift_identity",
            False,
            all(x - c - 1 == g - h for x, c in zip(d, co)),
            d_minus_coexp_minus_1=[x - c - 1 for x, c in zip(d, co)],
            g_minus_h=g - h,
        )
    )

    return {
        "group": G.spec.label,
        "order": st.order,
        "N": st.N,
        "Nstar": st.Nstar,
        "h": h,
        "g": g,
        "degrees": d,
        "exponents": dd.exponents_by_rep,
        "exponent_rep": dd.exponent_rep,
        "coexponents": co,
        "codegrees": codeg,
        "catalan": cat_h,
        "class": cls,
        "checks": checks,
        "all_asserted_pass": all(c["pass"] for c in checks if c["asserted"]),
    }


# ---------------------------------------------------------------------------
# Koszul complex characters


@dataclass
class KoszulResult:
    coeffs: list[Fraction]
    monomial: bool
    degree: int | None
    mass: Fraction
    integral: bool = True
    notes: list[str] = field(default_factory=list)


def koszul_det_multiplicity(
    G: ReflectionGroup,
    E: Representation,
    shift: int | None = None,
    trunc: int | None = None,
    det_power: int = 1,
) -> KoszulResult:
    """Graded multiplicity of det^det_power in C[h]/(E placed in degree shift).

    Computes (1/|W|) sum_w det(w)^{-det_power} det(1 - t^D B_w) / det(1 - t A_w),
    the Euler characteristic of the Koszul complex paired with the character.
    """
    n = G.rank
    if E.dimension != n:
        raise ValueError(f"Koszul complex needs dim E = n = {n}, got {E.dimension}")
    D = shift if shift is not None else int(stats(G).g) + 1
    if D < 1:
        raise ValueError("shift must be at least 1")
    T = trunc or (n + 1) * D
    terms: Counter = Counter()
    for i, A in enumerate(degree_one_matrices(G)):
        B = E.matrix_of(i)
        base = det_one_minus(B)
        num = [G.zero()] * (D * n + 1)
        for k, c in enumerate(base):
            num[D * k] = c
        terms[(G.dets[i] ** (-det_power), tuple(num), tuple(det_one_minus(A)))] += 1
    coeffs = [_to_fraction_or_none(c) for c in _weighted_sum(terms, T, G.order)]
    integral = all(c is not None and c.denominator == 1 for c in coeffs)
    coeffs = [c if c is not None else Fraction(0) for c in coeffs]
    nz = [k for k, c in enumerate(coeffs) if c]
    monomial = len(nz) == 1 and coeffs[nz[0]] == 1
    return KoszulResult(
        coeffs=_trim(coeffs),
        monomial=monomial,
        degree=nz[0] if monomial else None,
        mass=sum(coeffs, Fraction(0)),
        integral=integral,
    )


def _to_fraction_or_none(c):
    if isinstance(c, CycNumber):
        return c.to_rational() if c.is_rational() else None
    return Fraction(c)


def _trim(coeffs: list) -> list:
    coeffs = list(coeffs)
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def koszul_graded_dim(G: ReflectionGroup, shift: int) -> tuple[list[int], int]:
    """(1 - t^D)^n / (1 - t)^n as a polynomial, and its value at t = 1."""
    if shift < 1:
        raise ValueError("shift must be at least 1")
    poly = [1]
    block = [1] * shift
    for _ in range(G.rank):
        new = [0] * (len(poly) + shift - 1)
        for i, a in enumerate(poly):
            for j, b in enumerate(block):
                new[i + j] += a * b
        poly = new
    return poly, sum(poly)
