import json
import random
from fractions import Fraction
from math import factorial

import pytest

from reflab.exactnum import CycMatrix, exact_rank
from reflab.group import (
    GroupBuildError,
    GroupSpec,
    build_group,
    builtin_rep,
    det_rep,
    generator_spec_from_json,
    is_amenable,
    is_irreducible,
    local_data,
    local_data_by_hyperplane,
    stats,
)

from conftest import group

FAMILY = ["G(2,1,2)", "G(3,1,2)", "G(4,1,2)", "G(4,2,2)", "G(3,3,2)", "G(4,4,2)", "G(2,1,3)", "G(3,1,3)"]


@pytest.mark.parametrize(
    "label, order, N, Nstar",
    [("G(2,1,2)", 8, 4, 4), ("G(3,3,2)", 6, 3, 3), ("G(3,1,2)", 18, 7, 5), ("G4", 24, 8, 4)],
)
def test_enumeration_counts(label, order, N, Nstar):
    st = stats(group(label))
    assert (st.order, st.N, st.Nstar) == (order, N, Nstar)


@pytest.mark.parametrize(
    "label, h, g", [("G(2,1,2)", 4, 4), ("G(3,1,2)", 6, 7), ("G4", 6, 8), ("G(4,1,3)", 12, 14)]
)
def test_coxeter_numbers(label, h, g):
    st = stats(group(label))
    assert (st.h, st.g) == (h, g)
    assert not st.warnings


@pytest.mark.parametrize("label", FAMILY)
def test_closed_forms(label):
    G = group(label)
    l, m, n = G.spec.l, G.spec.m, G.spec.n
    st = stats(G)
    assert st.order == l**n * factorial(n) // m
    assert st.N == l * n * (n - 1) // 2 + n * (l // m - 1)
    assert st.Nstar == l * n * (n - 1) // 2 + (n if l // m > 1 else 0)
    assert st.g == Fraction(2 * st.N, n) == l * (n - 1) + 2 * (l // m - 1)
    assert sum(rec.stabilizer_order - 1 for rec in G.hyperplanes) == st.N


@pytest.mark.parametrize("label", ["G(3,1,2)", "G(4,2,2)", "G4"])
def test_closure_and_inverses(label):
    G = group(label)
    rnd = random.Random(7)
    for _ in range(50):
        i, j = rnd.randrange(G.order), rnd.randrange(G.order)
        G.multiply(i, j)  # raises KeyError if the product were missing
    for i in range(G.order):
        assert (G.elements[i] * G.elements[G.inverse[i]]).is_identity()


@pytest.mark.parametrize("label", ["G(3,1,2)", "G4", "G(4,1,2)"])
def test_reflections_and_stabilizers(label):
    G = group(label)
    one = CycMatrix.identity(G.conductor, G.rank)
    for r in G.reflections:
        assert exact_rank(G.elements[r] - one) == 1
    for rec in G.hyperplanes:
        dets = {G.dets[w] for w in rec.stabilizer_elements}
        assert len(dets) == rec.stabilizer_order
        for w in rec.stabilizer_elements:
            assert G.dets[w] ** rec.stabilizer_order == G.one()


def test_invalid_family_specs():
    with pytest.raises(GroupBuildError, match="m must divide l"):
        GroupSpec.parse("G(1,2,3)")
    with pytest.raises(GroupBuildError):
        GroupSpec.parse("G(3,1)")
    with pytest.raises(GroupBuildError):
        build_group(GroupSpec.parse("G(1,1,3)"))


def test_generator_file_errors():
    with pytest.raises(GroupBuildError):
        generator_spec_from_json({"generators": []})
    with pytest.raises(GroupBuildError, match="not invertible"):
        build_group(generator_spec_from_json({"conductor": 1, "generators": [[[1, 0], [0, 0]]]}))
    with pytest.raises(GroupBuildError, match="cap"):
        build_group(generator_spec_from_json({"conductor": 1, "generators": [[[1, 1], [0, 1]]]}), cap=50)


def test_reducible_generators_warn():
    data = {"conductor": 1, "generators": [[[-1, 0], [0, 1]], [[1, 0], [0, -1]]]}
    G = build_group(generator_spec_from_json(data))
    assert not is_irreducible(G)
    assert G.warnings


def test_g4_file_round_trip(tmp_path):
    G = group("G4")
    path = tmp_path / "g.json"
    path.write_text(json.dumps(G.spec.to_json()))
    from reflab.group import load_generator_file

    again = build_group(load_generator_file(path))
    assert again.order == 24 and again.spec.primitive


def test_local_data_coordinate_hyperplane():
    G = group("G(2,1,2)")
    per_h = local_data_by_hyperplane(G, builtin_rep(G, "V"))
    coord = [h for h, rec in enumerate(G.hyperplanes) if sum(1 for x in rec.normal if x) == 1]
    assert coord
    for h in coord:
        assert per_h[(h, 0)] == 1 and per_h[(h, 1)] == 1


@pytest.mark.parametrize("label", ["G(3,1,2)", "G4", "G(4,2,2)", "G(2,1,3)"])
@pytest.mark.parametrize("rep", ["triv", "V", "V*", "det", "det^-1", "L2V"])
def test_local_data_sums_to_dimension(label, rep):
    G = group(label)
    E = builtin_rep(G, rep)
    ld = local_data(G, E)
    for o in range(len(G.orbits)):
        vals = [ld[(o, j)] for j in range(G.orbit_n_h(o))]
        assert all(v >= 0 for v in vals)
        assert sum(vals) == E.dimension


@pytest.mark.parametrize("label", ["G(3,1,2)", "G4", "G(2,1,1)"])
def test_amenability(label):
    G = group(label)
    for rep in ("V", "V*"):
        ok, cert = is_amenable(G, builtin_rep(G, rep))
        assert ok
    if label == "G(2,1,1)":
        ok, cert = is_amenable(G, det_rep(G))
        assert ok and cert == {0: 1}


@pytest.mark.parametrize("label", ["G(3,1,2)", "G4"])
@pytest.mark.parametrize("rep", ["V", "V*", "det", "L2V"])
def test_representations_are_multiplicative(label, rep):
    G = group(label)
    E = builtin_rep(G, rep)
    rnd = random.Random(1)
    for _ in range(10):
        i, j = rnd.randrange(G.order), rnd.randrange(G.order)
        assert E.matrix_of(i) * E.matrix_of(j) == E.matrix_of(G.multiply(i, j))
