"""Bigraded Hilbert series of the diagonal coinvariant ring, by linear algebra.

Variables x_1..x_n and y_1..y_n carry dual representations; the ideal is
generated by all averaged monomials of positive bidegree, and each bidegree
is handled independently once the previous antidiagonal is known.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactnum import CycNumber, EchelonBasis
from .group import ReflectionGroup, stats
from .parallel import pmap
from .polynomials import MultiPoly, block_diagonal, monomials, substitute_linear


class OracleError(RuntimeError):
    pass


DEFAULT_ORDER_CAP = 50
DEFAULT_COMPONENT_CAP = 5000


def bidegree_monomials(n: int, a: int, b: int) -> list[tuple[int, ...]]:
    return [mx + my for mx in monomials(n, a) for my in monomials(n, b)]


class _Action:
    """Diagonal action on C[x, y]; x substitutes by M^T, y by M^{-1}."""

    def __init__(self, G: ReflectionGroup):
        self.G = G
        self.subs = [
            block_diagonal([G.elements[w].transpose(), G.elements[G.inverse[w]]]) for w in range(G.order)
        ]

    def apply(self, w: int, f: MultiPoly) -> MultiPoly:
        return substitute_linear(f, self.subs[w])

    def table(self, a: int, b: int) -> tuple[list[tuple[int, ...]], list[list[dict]]]:
        """Monomial basis of bidegree (a, b) and, per element, the images as sparse vectors."""
        G = self.G
        n = G.rank
        mons = bidegree_monomials(n, a, b)
        idx = {m: k for k, m in enumerate(mons)}

        def images(w):
            out = []
            for m in mons:
                img = self.apply(w, MultiPoly.monomial(G.conductor, m))
                out.append({idx[e]: v for e, v in img.terms.items()})
            return out

        return mons, pmap(images, range(G.order))


def _project(action: list[list[dict]], weights: list[CycNumber], vec: dict) -> dict:
    out: dict = {}
    for w, cw in enumerate(weights):
        if not cw:
            continue
        for k, coef in vec.items():
            s = cw * coef
            for idx, v in action[w][k].items():
                nv = out.get(idx)
                nv = v * s if nv is None else nv + v * s
                if nv:
                    out[idx] = nv
                else:
                    out.pop(idx, None)
    return out


def _span_rank(vectors) -> int:
    basis = EchelonBasis()
    for v in vectors:
        basis.add(v)
    return len(basis)


def invariant_component(
    G: ReflectionGroup, bidegree: tuple[int, int], cap: int = DEFAULT_COMPONENT_CAP
) -> list[MultiPoly]:
    """Basis of the invariants of bidegree (a, b), obtained by averaging monomials."""
    a, b = bidegree
    n = G.rank
    mons = bidegree_monomials(n, a, b)
    if len(mons) > cap:
        raise OracleError(f"component of bidegree {bidegree} has {len(mons)} monomials, cap is {cap}")
    mons, action = _Action(G).table(a, b)
    rows = _invariant_rows(G, action, len(mons))
    return [MultiPoly(2 * n, G.conductor, {mons[k]: v for k, v in r.items()}) for r in rows]


def _invariant_rows(G: ReflectionGroup, action: list[list[dict]], size: int) -> list[dict]:
    one = [G.one()] * G.order
    basis = EchelonBasis()
    for k in range(size):
        basis.add(_project(action, one, {k: G.one()}))
    return basis.reduced_rows()


@dataclass
class BigradedTable:
    entries: dict[tuple[int, int], int]
    completed: bool
    total: int
    det_multiplicity: int = 0
    det_entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def is_symmetric(self) -> bool:
        return all(self.entries.get((b, a)) == v for (a, b), v in self.entries.items())

    def margins(self) -> tuple[int, int]:
        """(sum over pure-x bidegrees, sum over pure-y bidegrees)."""
        px = sum(v for (a, b), v in self.entries.items() if b == 0)
        py = sum(v for (a, b), v in self.entries.items() if a == 0)
        return px, py

    def zero_propagation_holds(self) -> bool:
        for (a, b), v in self.entries.items():
            if v == 0:
                for nb in ((a + 1, b), (a, b + 1)):
                    if self.entries.get(nb, 0) != 0:
                        return False
        return True

    def to_json(self) -> dict:
        return {
            "entries": [[a, b, v] for (a, b), v in sorted(self.entries.items()) if v],
            "det_entries": [[a, b, v] for (a, b), v in sorted(self.det_entries.items()) if v],
            "completed": self.completed,
            "dim": self.total,
            "det_mult": self.det_multiplicity,
        }

    def to_csv(self) -> str:
        lines = ["a,b,dim,det"]
        for (a, b), v in sorted(self.entries.items()):
            if v:
                lines.append(f"{a},{b},{v},{self.det_entries.get((a, b), 0)}")
        return "\n".join(lines) + "\n"


def _ideal_component(
    G: ReflectionGroup,
    n: int,
    a: int,
    b: int,
    mons: list,
    inv_rows: list[dict],
    prev: dict,
) -> list[dict]:
    """I_(a,b) = x_i I_(a-1,b) + y_i I_(a,b-1) + invariants of bidegree (a,b)."""
    idx = {m: k for k, m in enumerate(mons)}
    basis = EchelonBasis()
    for (da, db), shift in (((1, 0), 0), ((0, 1), n)):
        src = prev.get((a - da, b - db))
        if not src:
            continue
        src_mons, src_rows = src
        for i in range(n):
            for r in src_rows:
                vec = {}
                for k, v in r.items():
                    e = list(src_mons[k])
                    e[shift + i] += 1
                    vec[idx[tuple(e)]] = v
                basis.add(vec)
    before = len(basis)
    for r in inv_rows:
        basis.add(r)
    if len(basis) < before:
        raise OracleError("ideal span shrank while adding generators")
    return basis.reduced_rows()


def hilbert_table(
    G: ReflectionGroup,
    order_cap: int = DEFAULT_ORDER_CAP,
    antidiagonal_cap: int | None = None,
    component_cap: int = DEFAULT_COMPONENT_CAP,
    with_det: bool = True,
) -> BigradedTable:
    if G.order > order_cap:
        raise OracleError(f"group order {G.order} exceeds the oracle cap {order_cap}")
    n = G.rank
    if antidiagonal_cap is None:
        antidiagonal_cap = 4 * stats(G).N
    act = _Action(G)
    det_w = [G.dets[w] ** (-1) for w in range(G.order)]
    entries: dict[tuple[int, int], int] = {(0, 0): 1}
    det_entries: dict[tuple[int, int], int] = {(0, 0): 1 if all(x == G.one() for x in G.dets) else 0}
    prev: dict = {(0, 0): (bidegree_monomials(n, 0, 0), [])}
    zero_run = 0
    s = 0
    completed = False
    while True:
        s += 1
        if s > antidiagonal_cap:
            break
        bidegrees = [(a, s - a) for a in range(s + 1)]

        def component(ab):
            a, b = ab
            mons, action = act.table(a, b)
            if len(mons) > component_cap:
                raise OracleError(f"component of bidegree {ab} exceeds cap {component_cap}")
            inv = _invariant_rows(G, action, len(mons))
            ideal = _ideal_component(G, n, a, b, mons, inv, prev)
            dim = len(mons) - len(ideal)
            det = 0
            if with_det and dim:
                full = _span_rank(_project(action, det_w, {k: G.one()}) for k in range(len(mons)))
                part = _span_rank(_project(action, det_w, r) for r in ideal)
                det = full - part
            return ab, mons, ideal, dim, det

        results = pmap(component, bidegrees)
        prev = {}
        for ab, mons, ideal, dim, det in results:
            entries[ab] = dim
            det_entries[ab] = det
            prev[ab] = (mons, ideal)
        if all(r[3] == 0 for r in results):
            zero_run += 1
            if zero_run == 2:
                completed = True
                break
        else:
            zero_run = 0
    table = BigradedTable(
        entries=entries,
        completed=completed,
        total=sum(entries.values()),
        det_multiplicity=sum(det_entries.values()),
        det_entries=det_entries,
    )
    if not completed:
        raise OracleError(f"antidiagonal cap {antidiagonal_cap} reached before the ring vanished")
    if not table.zero_propagation_holds():
        raise OracleError("a zero component is followed by a nonzero one")
    return table


def det_multiplicity_RW(G: ReflectionGroup, **kwargs) -> int:
    return hilbert_table(G, **kwargs).det_multiplicity
