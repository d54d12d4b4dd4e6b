"""Complex reflection groups as explicit matrix groups.

A group is built either from the monomial family G(l, m, n) or from a list of
generator matrices over one cyclotomic field.  The element list is closed
under multiplication by breadth-first search; reflections, their hyperplanes,
pointwise stabilisers and hyperplane orbits are read off the element list.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Callable, Sequence

from .exactnum import CycMatrix, CycNumber, exact_rank, nullspace, parse_rational

log = logging.getLogger(__name__)

DEFAULT_CAP = 10000


class GroupBuildError(ValueError):
    """Raised when a group specification cannot be turned into a finite reflection group."""


@dataclass(frozen=True)
class GroupSpec:
    """Either family parameters (l, m, n) or an explicit generator list."""

    l: int | None = None
    m: int | None = None
    n: int | None = None
    conductor: int | None = None
    generators: tuple[CycMatrix, ...] | None = None
    name: str | None = None
    primitive: bool = False

    @classmethod
    def family(cls, l: int, m: int, n: int) -> "GroupSpec":
        if l < 1 or m < 1 or n < 1:
            raise GroupBuildError("l, m, n must be positive integers")
        if l % m:
            raise GroupBuildError(f"m must divide l (got l={l}, m={m})")
        return cls(l=l, m=m, n=n, name=f"G({l},{m},{n})")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Read a family string such as ``"G(3,1,2)"``."""
        mt = re.fullmatch(r"\s*G\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*", text)
        if not mt:
            raise GroupBuildError(f"cannot parse group spec {text!r}; expected G(l,m,n)")
        return cls.family(*(int(x) for x in mt.groups()))

    @property
    def is_family(self) -> bool:
        return self.l is not None

    @property
    def label(self) -> str:
        return self.name or "generators"

    def to_json(self) -> dict:
        if self.is_family:
            return {"family": [self.l, self.m, self.n], "name": self.label}
        return {
            "conductor": self.conductor,
            "generators": [g.to_json() for g in self.generators],
            "name": self.label,
            "primitive": self.primitive,
        }


def load_generator_file(path) -> GroupSpec:
    """Read a generator file.

    Schema::

        {"conductor": N,
         "generators": [ matrix, ... ],
         "name": "G4",            # optional
         "primitive": true}       # optional, marks a primitive group

    A matrix is a list of rows, a row a list of entries, and an entry either a
    rational (int or "p/q") or the list of its coefficients in the power basis
    1, z, z^2, ... of Q(z), z = exp(2 pi i / N).
    """
    data = json.loads(Path(path).read_text())
    return generator_spec_from_json(data)


def generator_spec_from_json(data: dict) -> GroupSpec:
    try:
        cond = int(data["conductor"])
        raw = data["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupBuildError(f"malformed generator file: {exc}") from exc
    if cond < 1:
        raise GroupBuildError("conductor must be positive")
    gens = []
    for g in raw:
        rows = []
        for r in g:
            row = []
            for e in r:
                if isinstance(e, list):
                    row.append(CycNumber(cond, [parse_rational(c) for c in e]))
                else:
                    row.append(CycNumber.rational(cond, parse_rational(e)))
            rows.append(row)
        gens.append(CycMatrix(cond, rows))
    if not gens:
        raise GroupBuildError("generator list is empty")
    return GroupSpec(
        conductor=cond,
        generators=tuple(gens),
        name=data.get("name"),
        primitive=bool(data.get("primitive", False)),
    )


def family_conductor(l: int) -> int:
    return l if l > 2 else 1


def family_generators(l: int, m: int, n: int) -> tuple[int, list[CycMatrix]]:
    """Standard monomial generators of G(l, m, n) over Q(zeta_l)."""
    if l == 1:
        raise GroupBuildError(
            "G(1,1,n) acts reducibly on its n-dimensional space; use G(3,3,2) or "
            "another rank-2 substitute for symmetric-group checks"
        )
    cond = family_conductor(l)
    zeta = CycNumber.zeta(cond, cond // l) if l > 2 else CycNumber.rational(cond, -1 if l == 2 else 1)
    one = CycNumber.rational(cond, 1)
    zero = CycNumber.rational(cond, 0)
    gens = []
    for i in range(n - 1):
        rows = [[one if r == c else zero for c in range(n)] for r in range(n)]
        rows[i][i] = rows[i + 1][i + 1] = zero
        rows[i][i + 1] = rows[i + 1][i] = one
        gens.append(CycMatrix(cond, rows))
    if m < l:
        gens.append(CycMatrix.diagonal(cond, [zeta**m] + [one] * (n - 1)))
    if n >= 2 and m > 1:
        d = CycMatrix.diagonal(cond, [zeta] + [one] * (n - 1))
        gens.append(d * gens[0] * d.inverse())
    if not gens:
        raise GroupBuildError(f"G({l},{m},{n}) is trivial and contains no reflections")
    return cond, gens


@dataclass
class HyperplaneRecord:
    normal: tuple[CycNumber, ...]
    stabilizer_order: int
    stabilizer_elements: tuple[int, ...]
    orbit: int = -1


@dataclass
class ReflectionGroup:
    spec: GroupSpec
    conductor: int
    rank: int
    elements: list[CycMatrix]
    generators: list[int]
    reflections: list[int]
    hyperplanes: list[HyperplaneRecord]
    orbit_of: dict[int, int]
    orbits: list[list[int]]
    inverse: list[int]
    dets: list[CycNumber]
    identity: int = 0
    warnings: list[str] = field(default_factory=list)
    _index: dict = field(default_factory=dict, repr=False)
    _duals: list | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, M: CycMatrix) -> int:
        return self._index[M]

    def multiply(self, i: int, j: int) -> int:
        return self._index[self.elements[i] * self.elements[j]]

    @property
    def duals(self) -> list[CycMatrix]:
        """Inverse transposes M_w^{-T}: the matrices of the dual representation."""
        if self._duals is None:
            self._duals = [self.elements[self.inverse[i]].transpose() for i in range(self.order)]
        return self._duals

    def orbit_n_h(self, orbit: int) -> int:
        return self.hyperplanes[self.orbits[orbit][0]].stabilizer_order

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def zero(self) -> CycNumber:
        return CycNumber.rational(self.conductor, 0)

    def one(self) -> CycNumber:
        return CycNumber.rational(self.conductor, 1)


def _normalize_covector(vec: Sequence[CycNumber]) -> tuple[CycNumber, ...]:
    lead = next(x for x in vec if x)
    inv = lead.inverse()
    return tuple(x * inv for x in vec)


def _apply_covector(alpha: Sequence[CycNumber], M: CycMatrix) -> tuple[CycNumber, ...]:
    """Row vector alpha times M."""
    zero = alpha[0] * 0
    out = []
    for j in range(M.ncols):
        acc = zero
        for i, a in enumerate(alpha):
            if a:
                acc = acc + a * M.rows[i][j]
        out.append(acc)
    return tuple(out)


def build_group(spec: GroupSpec, cap: int = DEFAULT_CAP) -> ReflectionGroup:
    """Enumerate the group generated by the spec and its reflection data."""
    if spec.is_family:
        cond, gens = family_generators(spec.l, spec.m, spec.n)
    else:
        cond, gens = spec.conductor, list(spec.generators)
    n = gens[0].nrows
    for g in gens:
        if g.nrows != n or g.ncols != n:
            raise GroupBuildError("generators must be square matrices of one size")
        if g.conductor != cond:
            raise GroupBuildError("generator conductor differs from the declared conductor")
        if not g.determinant():
            raise GroupBuildError("generator is not invertible")

    ident = CycMatrix.identity(cond, n)
    elements = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = g * x
                if y not in index:
                    if len(elements) >= cap:
                        raise GroupBuildError(
                            f"closure exceeded the cap of {cap} elements (group infinite or too large)"
                        )
                    index[y] = len(elements)
                    elements.append(y)
                    new.append(y)
        frontier = new

    inverse = [index[M.inverse()] for M in elements]
    dets = [M.determinant() for M in elements]

    reflections = []
    normal_index: dict[tuple, int] = {}
    members: list[list[int]] = []
    for i, M in enumerate(elements):
        diff = M - ident
        if exact_rank(diff) != 1:
            continue
        reflections.append(i)
        row = next(r for r in diff.rows if any(r))
        key = _normalize_covector(row)
        if key not in normal_index:
            normal_index[key] = len(members)
            members.append([])
        members[normal_index[key]].append(i)

    hyperplanes = []
    for key, h in sorted(normal_index.items(), key=lambda kv: kv[1]):
        stab = tuple([0] + members[h])
        hyperplanes.append(HyperplaneRecord(normal=key, stabilizer_order=len(stab), stabilizer_elements=stab))

    # hyperplane orbits: w(H) has normal alpha_H M_w^{-1}
    gen_inv = [g.inverse() for g in gens]
    orbit_of: dict[int, int] = {}
    orbits: list[list[int]] = []
    for h in range(len(hyperplanes)):
        if h in orbit_of:
            continue
        oid = len(orbits)
        orbit_of[h] = oid
        todo, orbit = [h], [h]
        while todo:
            cur = todo.pop()
            for gi in gen_inv:
                img = _normalize_covector(_apply_covector(hyperplanes[cur].normal, gi))
                k = normal_index.get(img)
                if k is None:
                    raise GroupBuildError("hyperplane set is not W-stable (closure bug)")
                if k not in orbit_of:
                    orbit_of[k] = oid
                    orbit.append(k)
                    todo.append(k)
        orbits.append(sorted(orbit))
    for h, rec in enumerate(hyperplanes):
        rec.orbit = orbit_of[h]

    G = ReflectionGroup(
        spec=spec,
        conductor=cond,
        rank=n,
        elements=elements,
        generators=[index[g] for g in gens],
        reflections=reflections,
        hyperplanes=hyperplanes,
        orbit_of=orbit_of,
        orbits=orbits,
        inverse=inverse,
        dets=dets,
        _index=index,
    )
    _check_stabilizers(G)
    if spec.is_family:
        _check_family_counts(G)
    if not reflections:
        raise GroupBuildError("group contains no reflections")
    if not is_irreducible(G):
        msg = "group acts reducibly (commutant larger than scalars)"
        G.warnings.append(msg)
        log.warning("%s: %s", spec.label, msg)
    return G


def _check_stabilizers(G: ReflectionGroup) -> None:
    for rec in G.hyperplanes:
        dets = {G.dets[i] for i in rec.stabilizer_elements}
        if len(dets) != rec.stabilizer_order:
            raise GroupBuildError("pointwise stabiliser is not cyclic (det not injective)")
        orders = [G.dets[i].multiplicative_order(rec.stabilizer_order) for i in rec.stabilizer_elements]
        if rec.stabilizer_order not in orders:
            raise GroupBuildError("pointwise stabiliser is not cyclic")


def _check_family_counts(G: ReflectionGroup) -> None:
    l, m, n = G.spec.l, G.spec.m, G.spec.n
    order = l**n * factorial(n) // m
    N = l * n * (n - 1) // 2 + n * (l // m - 1)
    Nstar = l * n * (n - 1) // 2 + (n if l // m > 1 else 0)
    got = (G.order, len(G.reflections), len(G.hyperplanes))
    if got != (order, N, Nstar):
        raise GroupBuildError(
            f"{G.spec.label}: enumeration gave (|W|, N, N*) = {got}, closed form {(order, N, Nstar)}"
        )


def is_irreducible(G: ReflectionGroup) -> bool:
    """Commutant test: only scalars commute with every generator."""
    n = G.rank
    rows = []
    for gi in G.generators:
        M = G.elements[gi]
        # unknown X (n x n, flattened row-major); equations (XM - MX)_{ij} = 0
        for i in range(n):
            for j in range(n):
                eq = {}
                for k in range(n):
                    a = M.rows[k][j]  # X_{ik} M_{kj}
                    if a:
                        eq[i * n + k] = eq.get(i * n + k, 0) + a
                    b = M.rows[i][k]  # M_{ik} X_{kj}
                    if b:
                        eq[k * n + j] = eq.get(k * n + j, 0) - b
                rows.append({k: v for k, v in eq.items() if v})
    return len(nullspace(rows, n * n)) == 1


def is_real(G: ReflectionGroup) -> bool:
    """All characters of the defining representation are self-conjugate."""
    return all(M.trace() == M.trace().conjugate() for M in G.elements)


# ---------------------------------------------------------------------------
# statistics


@dataclass
class GroupStats:
    order: int
    N: int
    Nstar: int
    h: Fraction
    g: Fraction
    warnings: list[str] = field(default_factory=list)


def stats(G: ReflectionGroup) -> GroupStats:
    N, Nstar, n = len(G.reflections), len(G.hyperplanes), G.rank
    h = Fraction(N + Nstar, n)
    g = Fraction(2 * N, n)
    warn = []
    if g.denominator != 1:
        warn.append(f"g = 2N/n = {g} is not an integer")
    if h.denominator != 1:
        warn.append(f"h = (N+N*)/n = {h} is not an integer")
    if G.spec.is_family:
        l, m = G.spec.l, G.spec.m
        closed = l * (n - 1) + 2 * (l // m - 1)
        if g != closed:
            warn.append(f"g = {g} differs from l(n-1)+2(l/m-1) = {closed}")
    for w in warn:
        log.warning("%s: %s", G.spec.label, w)
    return GroupStats(order=G.order, N=N, Nstar=Nstar, h=h, g=g, warnings=warn)


# ---------------------------------------------------------------------------
# representations


@dataclass
class Representation:
    """A matrix representation w -> CycMatrix, evaluated lazily per element."""

    name: str
    dimension: int
    matrix_of: Callable[[int], CycMatrix] = field(repr=False)
    _chars: list | None = field(default=None, repr=False)
    _group_order: int = field(default=0, repr=False)

    def character(self, G: ReflectionGroup) -> list[CycNumber]:
        if self._chars is None:
            self._chars = [self.matrix_of(i).trace() for i in range(G.order)]
        return self._chars


def trivial_rep(G: ReflectionGroup) -> Representation:
    one = CycMatrix.identity(G.conductor, 1)
    return Representation("triv", 1, lambda i: one)


def defining_rep(G: ReflectionGroup) -> Representation:
    return Representation("V", G.rank, lambda i: G.elements[i])


def dual_rep(G: ReflectionGroup) -> Representation:
    return Representation("V*", G.rank, lambda i: G.duals[i])


def det_rep(G: ReflectionGroup, power: int = 1) -> Representation:
    name = "det" if power == 1 else f"det^{power}"
    return Representation(name, 1, lambda i: CycMatrix(G.conductor, [[G.dets[i] ** power]]))


def exterior_power_rep(G: ReflectionGroup, k: int) -> Representation:
    from math import comb

    cache: dict[int, CycMatrix] = {}

    def mat(i):
        if i not in cache:
            cache[i] = G.elements[i].compound(k)
        return cache[i]

    return Representation(f"L^{k}V", comb(G.rank, k), mat)


def builtin_rep(G: ReflectionGroup, name: str) -> Representation:
    """Look up one of: triv, V, V*, det, det^-1, L^kV."""
    if name == "triv":
        return trivial_rep(G)
    if name == "V":
        return defining_rep(G)
    if name == "V*":
        return dual_rep(G)
    if name == "det":
        return det_rep(G, 1)
    if name in ("det^-1", "det-1"):
        return det_rep(G, -1)
    mt = re.fullmatch(r"L\^?(\d+)V", name)
    if mt:
        return exterior_power_rep(G, int(mt.group(1)))
    raise ValueError(f"unknown representation {name!r}")


# ---------------------------------------------------------------------------
# local data


class LocalDataError(ValueError):
    pass


def local_data_by_hyperplane(G: ReflectionGroup, E: Representation) -> dict[tuple[int, int], int]:
    chi = E.character(G)
    out = {}
    for h, rec in enumerate(G.hyperplanes):
        nH = rec.stabilizer_order
        for j in range(nH):
            acc = G.zero()
            for w in rec.stabilizer_elements:
                acc = acc + G.dets[w] ** (-j) * chi[w]
            acc = acc / nH
            if not acc.is_rational() or acc.to_rational().denominator != 1 or acc.to_rational() < 0:
                raise LocalDataError(
                    f"projector trace {acc} at hyperplane {h}, j={j} is not a nonnegative integer"
                )
            out[(h, j)] = int(acc.to_rational())
    return out


def local_data(G: ReflectionGroup, E: Representation) -> dict[tuple[int, int], int]:
    """Local data E_{H,j}, keyed by (orbit, j); verified constant along orbits."""
    per_h = local_data_by_hyperplane(G, E)
    out: dict[tuple[int, int], int] = {}
    for (h, j), v in per_h.items():
        key = (G.orbit_of[h], j)
        if key in out and out[key] != v:
            raise LocalDataError(f"local data not constant on orbit {key[0]}")
        out[key] = v
    for o in range(len(G.orbits)):
        total = sum(out[(o, j)] for j in range(G.orbit_n_h(o)))
        if total != E.dimension:
            raise LocalDataError(f"local data at orbit {o} sums to {total}, not dim E = {E.dimension}")
    return out


def is_amenable(G: ReflectionGroup, E: Representation) -> tuple[bool, dict[int, int]]:
    """(amenable?, {orbit: C(H,E)}) with C(H,E) = sum_j j E_{H,j}."""
    ld = local_data(G, E)
    cert = {}
    ok = True
    for o in range(len(G.orbits)):
        nH = G.orbit_n_h(o)
        c = sum(j * ld[(o, j)] for j in range(nH))
        cert[o] = c
        if c > nH - 1:
            ok = False
    return ok, cert
