"""Parameters, Dunkl operators and the lowest-weight module L_c(triv).

Conventions shared with the series module: w acts on polynomials by
(w.f)(v) = f(M_w^{-1} v), so the linear forms carry the dual representation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .exactnum import CycMatrix, CycNumber, EchelonBasis, exact_rank, nullspace, render_rational
from .group import ReflectionGroup, Representation, builtin_rep, local_data, stats
from .parallel import pmap
from .polynomials import MultiPoly, monomials, substitute_linear


class ParameterError(ValueError):
    pass


class GramCapError(RuntimeError):
    """The Gram layers never reached rank 0 below the degree cap."""


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class Parameter:
    """c_{o,j} per hyperplane orbit o and index j < n_H (W-invariant by construction)."""

    values: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def zero(cls, G: ReflectionGroup) -> "Parameter":
        return cls(tuple((Fraction(0),) * G.orbit_n_h(o) for o in range(len(G.orbits))))

    @classmethod
    def rho(cls, G: ReflectionGroup) -> "Parameter":
        out = []
        for o in range(len(G.orbits)):
            nH = G.orbit_n_h(o)
            out.append(tuple(Fraction(j, nH) for j in range(nH)))
        return cls(tuple(out))

    @classmethod
    def from_lists(cls, values: Sequence[Sequence]) -> "Parameter":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in values))

    def __add__(self, other: "Parameter") -> "Parameter":
        self._same_shape(other)
        return Parameter(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.values, other.values)))

    def __sub__(self, other: "Parameter") -> "Parameter":
        self._same_shape(other)
        return Parameter(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.values, other.values)))

    def scale(self, k) -> "Parameter":
        k = Fraction(k)
        return Parameter(tuple(tuple(a * k for a in r) for r in self.values))

    def _same_shape(self, other: "Parameter") -> None:
        if [len(r) for r in self.values] != [len(r) for r in other.values]:
            raise ParameterError("parameters have different orbit shapes")

    @property
    def polynomial_action(self) -> bool:
        return all(r[0] == 0 for r in self.values)

    def to_json(self) -> list:
        return [[render_rational(x) for x in r] for r in self.values]


def _check_shape(G: ReflectionGroup, c: Parameter) -> None:
    shape = [G.orbit_n_h(o) for o in range(len(G.orbits))]
    if [len(r) for r in c.values] != shape:
        raise ParameterError(f"parameter shape {[len(r) for r in c.values]} does not match orbits {shape}")


def dot_action(s: Sequence[Sequence[int]], c: Parameter) -> Parameter:
    """s.c = s(c + rho) - rho, with s[o][j] the image of index j in orbit o."""
    if len(s) != len(c.values):
        raise ParameterError("one permutation per orbit is required")
    out = []
    for perm, row in zip(s, c.values):
        nH = len(row)
        if sorted(perm) != list(range(nH)):
            raise ParameterError(f"{list(perm)} is not a permutation of range({nH})")
        shifted = [row[j] + Fraction(j, nH) for j in range(nH)]
        moved = [Fraction(0)] * nH
        for j in range(nH):
            moved[perm[j]] = shifted[j]
        out.append(tuple(moved[j] - Fraction(j, nH) for j in range(nH)))
    return Parameter(tuple(out))


def sigma(c: Parameter) -> Parameter:
    out = []
    for row in c.values:
        nH = len(row)
        new = [row[0]]
        for j in range(1, nH):
            new.append(row[nH - j] + Fraction(2 * (nH - j), nH))
        out.append(tuple(new))
    return Parameter(tuple(out))


def _local(G: ReflectionGroup, E: Representation | str) -> tuple[Representation, dict]:
    if isinstance(E, str):
        E = builtin_rep(G, E)
    return E, local_data(G, E)


def c_function(G: ReflectionGroup, E: Representation | str, c: Parameter) -> Fraction:
    """c_E = (1/dim E) sum_H sum_j n_H c_{H,j} E_{H,j}."""
    _check_shape(G, c)
    E, ld = _local(G, E)
    total = Fraction(0)
    for o, orbit in enumerate(G.orbits):
        nH = G.orbit_n_h(o)
        for j in range(nH):
            total += len(orbit) * nH * c.values[o][j] * ld[(o, j)]
    return total / E.dimension


def perturbation_direction(G: ReflectionGroup, E: Representation | str = "V*") -> Parameter:
    """A direction inside c_E = const with c_{o,0} fixed; zero if no such direction exists."""
    E, ld = _local(G, E)
    coords = [(o, j) for o in range(len(G.orbits)) for j in range(1, G.orbit_n_h(o))]
    weight = {(o, j): len(G.orbits[o]) * G.orbit_n_h(o) * ld[(o, j)] for (o, j) in coords}
    delta = {k: Fraction(0) for k in coords}
    if len(coords) > 1:
        pivot = next((k for k in coords if weight[k]), None)
        for k in coords:
            if k != pivot:
                delta[k] = Fraction(1)
        if pivot is not None:
            rest = sum(weight[k] for k in coords if k != pivot)
            delta[pivot] = Fraction(-rest, weight[pivot])
    return Parameter(
        tuple(
            tuple(delta.get((o, j), Fraction(0)) for j in range(G.orbit_n_h(o)))
            for o in range(len(G.orbits))
        )
    )


def base_parameter(
    G: ReflectionGroup, epsilon=0, rep: Representation | str = "V*"
) -> tuple[Fraction, Parameter]:
    """c_{o,j} = 2j c_0 with c_0 fixed by c_rep = 1, moved by epsilon along the level set.

    rep names the module playing h* (under the shared polynomial convention
    this is V*, the degree-one component).
    """
    unit = Parameter(
        tuple(tuple(Fraction(2 * j) for j in range(G.orbit_n_h(o))) for o in range(len(G.orbits)))
    )
    k = c_function(G, rep, unit)
    if k == 0:
        raise ParameterError("c_0 has zero coefficient; the group is not irreducible")
    c0 = 1 / k
    c = unit.scale(c0)
    eps = Fraction(epsilon)
    if eps:
        c = c + perturbation_direction(G, rep).scale(eps)
    return c0, c


# ---------------------------------------------------------------------------
# Dunkl operators


class DunklOperators:
    """The n commuting Dunkl operators at a parameter with c_{o,0} = 0.

    normals may override the stored hyperplane normals (any nonzero rescaling
    gives the same operators).
    """

    def __init__(self, G: ReflectionGroup, c: Parameter, normals: Sequence[Sequence[CycNumber]] | None = None):
        _check_shape(G, c)
        if not c.polynomial_action:
            raise ParameterError("Dunkl operators need c_{o,0} = 0 to preserve polynomials")
        self.G = G
        self.c = c
        self.n = G.rank
        self.cond = G.conductor
        recs = G.hyperplanes
        if normals is None:
            normals = [r.normal for r in recs]
        if len(normals) != len(recs):
            raise ParameterError("one normal per hyperplane is required")
        self._subs: dict[int, CycMatrix] = {}
        self.terms = []
        for h, rec in enumerate(recs):
            o = G.orbit_of[h]
            row = c.values[o]
            weights = []
            for w in rec.stabilizer_elements:
                if w == G.identity:
                    continue
                a = G.zero()
                for j, cj in enumerate(row):
                    if cj:
                        a = a + G.dets[w] ** (-j) * cj
                if a:
                    weights.append((w, a))
            if weights:
                self.terms.append((tuple(normals[h]), weights))

    def act(self, w: int, f: MultiPoly) -> MultiPoly:
        S = self._subs.get(w)
        if S is None:
            S = self._subs[w] = self.G.elements[self.G.inverse[w]]
        return substitute_linear(f, S)

    def _difference_terms(self, f: MultiPoly) -> list[tuple[tuple, MultiPoly]]:
        out = []
        for alpha, weights in self.terms:
            acc = f.zero_like()
            for w, a in weights:
                acc = acc + (self.act(w, f) - f).scale(a)
            if acc:
                out.append((alpha, acc.divide_linear(alpha)))
        return out

    def apply(self, i: int, f: MultiPoly) -> MultiPoly:
        out = f.derivative(i)
        for alpha, q in self._difference_terms(f):
            if alpha[i]:
                out = out - q.scale(alpha[i])
        return out

    def apply_all(self, f: MultiPoly) -> list[MultiPoly]:
        """[y_0 f, ..., y_{n-1} f], sharing the hyperplane quotients."""
        diffs = self._difference_terms(f)
        out = []
        for i in range(self.n):
            r = f.derivative(i)
            for alpha, q in diffs:
                if alpha[i]:
                    r = r - q.scale(alpha[i])
            out.append(r)
        return out

    def layer_matrices(self, d: int) -> list[list[dict]]:
        """For each monomial x^nu of degree d: the n images as sparse vectors in degree d-1."""
        mons = monomials(self.n, d)

        def column(nu):
            f = MultiPoly.monomial(self.cond, nu)
            return [g.to_vector(d - 1) if g else {} for g in self.apply_all(f)]

        return pmap(column, mons)


def dunkl_apply(
    G: ReflectionGroup, c: Parameter, i: int, f: MultiPoly, normals=None
) -> MultiPoly:
    return DunklOperators(G, c, normals).apply(i, f)


# ---------------------------------------------------------------------------
# Gram ranks


@dataclass
class GramLayer:
    degree: int
    size: int
    rank: int
    det_rank: int
    det_inverse_rank: int


@dataclass
class GramReport:
    layers: list[GramLayer]
    dimension: int
    det_multiplicity: int
    det_inverse_multiplicity: int
    termination_degree: int

    @property
    def ranks(self) -> list[int]:
        return [layer.rank for layer in self.layers]

    def to_json(self) -> dict:
        return {
            "ranks": self.ranks,
            "layer_sizes": [layer.size for layer in self.layers],
            "det_ranks": [layer.det_rank for layer in self.layers],
            "dim": self.dimension,
            "det_mult": self.det_multiplicity,
            "det_inverse_mult": self.det_inverse_multiplicity,
            "termination_degree": self.termination_degree,
        }


def layer_action(G: ReflectionGroup, d: int) -> list[list[dict]]:
    """For each group element, the images of the degree-d monomials as sparse vectors."""
    n = G.rank
    mons = monomials(n, d)
    cond = G.conductor

    def images(w):
        S = G.elements[G.inverse[w]]
        return [substitute_linear(MultiPoly.monomial(cond, nu), S).to_vector(d) for nu in mons]

    return pmap(images, range(G.order))


def isotype_projection(G: ReflectionGroup, action: list[list[dict]], weights: Sequence[CycNumber]) -> list[dict]:
    """Basis of the image of sum_w weights[w] * (action of w) on the monomial layer."""
    size = len(action[0]) if action else 0
    basis = EchelonBasis()
    for k in range(size):
        vec: dict = {}
        for w, cw in enumerate(weights):
            if not cw:
                continue
            for idx, v in action[w][k].items():
                nv = vec.get(idx)
                nv = v * cw if nv is None else nv + v * cw
                if nv:
                    vec[idx] = nv
                else:
                    vec.pop(idx, None)
        basis.add(vec)
    return basis.reduced_rows()


def _row_times(row: dict, cols: list[dict]) -> dict:
    out = {}
    for k, col in enumerate(cols):
        acc = None
        for idx, v in col.items():
            r = row.get(idx)
            if r is not None:
                acc = r * v if acc is None else acc + r * v
        if acc:
            out[k] = acc
    return out


def _projected_rank(rows: list[dict], cols: list[dict]) -> int:
    if not rows or not cols:
        return 0
    return exact_rank([_row_times(r, cols) for r in rows])


def gram_and_dimension(
    G: ReflectionGroup,
    c: Parameter,
    cap: int | None = None,
    with_det: bool = True,
    normals=None,
) -> GramReport:
    """Layer ranks of the contravariant pairing on the polynomial module.

    The row space at degree d is spanned by r . D_i for r in the row space at
    degree d-1, which equals the span of the dual-monomial rows because the
    operators commute; only a basis is carried forward.
    """
    ops = DunklOperators(G, c, normals)
    n = G.rank
    if cap is None:
        cap = n * (stats(G).g + 2)
    one = G.one()
    det_w = [G.dets[w] ** (-1) for w in range(G.order)]
    det_inv_w = [G.dets[w] for w in range(G.order)]
    layers = [GramLayer(0, 1, 1, 1 if all(x == one for x in G.dets) else 0, 1 if all(x == one for x in G.dets) else 0)]
    rows: list[dict] = [{0: one}]
    d = 0
    while True:
        d += 1
        if d > cap:
            raise GramCapError(f"Gram ranks still nonzero at degree cap {cap}")
        mats = ops.layer_matrices(d)
        size = len(mats)
        basis = EchelonBasis()
        for i in range(n):
            cols = [m[i] for m in mats]
            for r in rows:
                basis.add(_row_times(r, cols))
        rank = len(basis)
        new_rows = basis.reduced_rows()
        det_rank = det_inv_rank = 0
        if with_det and rank:
            action = layer_action(G, d)
            det_rank = _projected_rank(new_rows, isotype_projection(G, action, det_w))
            det_inv_rank = _projected_rank(new_rows, isotype_projection(G, action, det_inv_w))
        layers.append(GramLayer(d, size, rank, det_rank, det_inv_rank))
        if rank > size:
            raise AssertionError("layer rank exceeds layer size")
        rows = new_rows
        if rank == 0:
            break
    # an empty row space spans nothing in any later degree, so zero persists
    return GramReport(
        layers=layers,
        dimension=sum(layer.rank for layer in layers),
        det_multiplicity=sum(layer.det_rank for layer in layers),
        det_inverse_multiplicity=sum(layer.det_inverse_rank for layer in layers),
        termination_degree=d,
    )


def det_multiplicity_L(G: ReflectionGroup, c: Parameter) -> int:
    return gram_and_dimension(G, c).det_multiplicity


def layer_sizes_ok(report: GramReport, n: int) -> bool:
    return all(layer.rank <= comb(layer.degree + n - 1, n - 1) for layer in report.layers)


# ---------------------------------------------------------------------------
# singular vectors


@dataclass
class SingularSubspace:
    degree: int
    dimension: int
    traces: list[CycNumber]
    multiplicities: dict[str, int]
    reflection_type: dict[str, bool]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "dim": self.dimension,
            "multiplicities": dict(sorted(self.multiplicities.items())),
            "reflection_type": dict(sorted(self.reflection_type.items())),
        }


def _inner(G: ReflectionGroup, chi: Sequence[CycNumber], psi: Sequence[CycNumber]) -> Fraction:
    acc = G.zero()
    for a, b in zip(chi, psi):
        acc = acc + a * b.conjugate()
    acc = acc / G.order
    if not acc.is_rational():
        raise ArithmeticError("character inner product is not rational")
    return acc.to_rational()


def singular_subspace(
    G: ReflectionGroup, c: Parameter, d: int, reps: Sequence[str] = ("V", "V*")
) -> SingularSubspace:
    """Joint kernel of the Dunkl operators on degree-d polynomials, with its character."""
    d = int(d)
    ops = DunklOperators(G, c)
    n = G.rank
    mons = monomials(n, d)
    mats = ops.layer_matrices(d) if d > 0 else [[{}] * n]
    rows = []
    for i in range(n):
        for kappa in range(len(monomials(n, d - 1)) if d > 0 else 0):
            row = {}
            for nu, m in enumerate(mats):
                v = m[i].get(kappa)
                if v:
                    row[nu] = v
            if row:
                rows.append(row)
    kernel, free = nullspace(rows, len(mons), with_free=True)
    lifted = [
        {k: (v if isinstance(v, CycNumber) else CycNumber.rational(G.conductor, v)) for k, v in vec.items()}
        for vec in kernel
    ]
    polys = [MultiPoly.from_vector(n, G.conductor, d, vec) for vec in lifted]

    def trace(w):
        S = G.elements[G.inverse[w]]
        acc = G.zero()
        for p, f in zip(polys, free):
            img = substitute_linear(p, S).to_vector(d)
            v = img.get(f)
            if v is not None:
                acc = acc + v
        return acc

    traces = pmap(trace, range(G.order)) if polys else [G.zero()] * G.order
    mult: dict[str, int] = {}
    refl: dict[str, bool] = {}
    for name in reps:
        E = builtin_rep(G, name)
        m = _inner(G, traces, E.character(G))
        if m.denominator != 1:
            raise ArithmeticError(f"multiplicity of {name} is not an integer")
        mult[name] = int(m)
        # with multiplicity one the isotype is a copy of E; check its reflections directly
        refl[name] = m == 1 and _isotype_is_reflection_type(G, E, polys, d)
    return SingularSubspace(d, len(kernel), traces, mult, refl)


def _isotype_is_reflection_type(G: ReflectionGroup, E: Representation, polys: list[MultiPoly], d: int) -> bool:
    """Project the kernel onto the E-isotype and check each reflection fixes a hyperplane there."""
    chi = E.character(G)
    coeff = [chi[w].conjugate() * E.dimension / G.order for w in range(G.order)]
    basis = EchelonBasis()
    for p in polys:
        acc = p.zero_like()
        for w, a in enumerate(coeff):
            if a:
                acc = acc + substitute_linear(p, G.elements[G.inverse[w]]).scale(a)
        basis.add(acc.to_vector(d))
    iso = basis.reduced_rows()
    if len(iso) != E.dimension:
        return False
    piv = [min(v) for v in iso]
    iso_polys = [MultiPoly.from_vector(G.rank, G.conductor, d, v) for v in iso]
    for r in G.reflections:
        S = G.elements[G.inverse[r]]
        rows = []
        for k, p in enumerate(iso_polys):
            img = substitute_linear(p, S).to_vector(d)
            # coordinates in the reduced basis are read off at the pivots
            rows.append([img.get(q, G.zero()) - (G.one() if q == piv[k] else G.zero()) for q in piv])
        if exact_rank(rows) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# index combinatorics


@dataclass
class JackCensus:
    bound: int
    lattice_count: int
    expected_lattice_count: int
    sequence_count: int
    witness: tuple[int, ...] | None

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "lattice_count": self.lattice_count,
            "expected_lattice_count": self.expected_lattice_count,
            "sequence_count": self.sequence_count,
            "witness": list(self.witness) if self.witness else None,
        }


def jack_index_census(l: int, m: int, n: int) -> JackCensus:
    if m <= 0 or l % m:
        raise ValueError("m must divide l")
    q = l // m
    bound = l * (n - 1) + 2 * q - 2
    lattice = sum(1 for _ in itertools.product(range(bound + 1), repeat=n))
    seqs = []
    for Q in itertools.combinations(range(bound + 1), n):
        if len({x % l for x in Q}) == 1 and all(x % q == (q - 1) % q for x in Q):
            seqs.append(Q)
    return JackCensus(bound, lattice, (bound + 1) ** n, len(seqs), seqs[0] if len(seqs) == 1 else None)
