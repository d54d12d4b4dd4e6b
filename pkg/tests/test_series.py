import pytest

from reflab.group import builtin_rep, stats
from reflab.series import (
    SeriesError,
    coexponents,
    degree_data,
    exponents_of,
    factor_degrees,
    fake_degree,
    koszul_det_multiplicity,
    koszul_graded_dim,
    molien_degrees,
    molien_series,
    numerology_report,
)
from reflab.exactnum import RationalSeries

from conftest import group


@pytest.mark.parametrize(
    "label, degrees",
    [
        ("G(2,1,2)", [2, 4]),
        ("G(3,1,2)", [3, 6]),
        ("G(3,3,2)", [2, 3]),
        ("G(4,1,2)", [4, 8]),
        ("G(4,2,2)", [4, 4]),
        ("G(4,4,2)", [2, 4]),
        ("G(2,1,3)", [2, 4, 6]),
        ("G(3,1,3)", [3, 6, 9]),
        ("G4", [4, 6]),
    ],
)
def test_molien_degrees(label, degrees):
    assert molien_degrees(group(label)) == degrees


def test_factorization_rejects_too_few_degrees():
    # 1/(1-t) in two variables' worth of slots: only one degree appears
    ser = RationalSeries([1] * 11, 10)
    assert factor_degrees(ser, 2) == [1]
    G = group("G(3,1,2)")
    with pytest.raises(SeriesError):
        molien_degrees(G, trunc=4)


def test_molien_series_leading_terms():
    ser = molien_series(group("G(2,1,2)"), 8)
    # 1/((1-t^2)(1-t^4)) = 1 + t^2 + 2t^4 + 2t^6 + 3t^8
    assert list(ser.coeffs) == [1, 0, 1, 0, 2, 0, 2, 0, 3]


@pytest.mark.parametrize("label, ev, evstar", [("G(3,1,2)", [2, 5], [1, 4]), ("G4", [3, 5], [1, 3])])
def test_exponents_both_readings(label, ev, evstar):
    G = group(label)
    dd = degree_data(G)
    assert dd.exponents_by_rep == {"V": ev, "V*": evstar}
    assert dd.exponents == [d - 1 for d in dd.degrees]


@pytest.mark.parametrize("label, co", [("G(3,1,2)", [1, 4]), ("G4", [1, 3]), ("G(2,1,2)", [1, 3])])
def test_coexponents(label, co):
    assert coexponents(group(label)) == co


@pytest.mark.parametrize("label", ["G(3,1,2)", "G4", "G(2,1,3)", "G(4,2,2)"])
def test_fake_degree_properties(label):
    G = group(label)
    assert exponents_of(G, builtin_rep(G, "triv")) == [0]
    det_exps = exponents_of(G, builtin_rep(G, "det"))
    det_inv_exps = exponents_of(G, builtin_rep(G, "det^-1"))
    N = stats(G).N
    assert N in (sum(det_exps), sum(det_inv_exps))
    for rep in ("V", "V*", "L2V"):
        fd = fake_degree(G, builtin_rep(G, rep))
        assert all(c >= 0 for c in fd)
        assert sum(fd) == builtin_rep(G, rep).dimension


def _check(report, name):
    return next(c for c in report["checks"] if c["name"] == name)


def test_numerology_g312():
    r = numerology_report(group("G(3,1,2)"))
    assert r["all_asserted_pass"]
    assert r["catalan"] == 6
    assert _check(r, "degree_duality")["values"]["sums"] == [9, 9]
    assert _check(r, "coexponent_identity")["values"]["g_plus_coexp_plus_1"] == [9, 12]
    assert _check(r, "coexponent_identity")["values"]["h_plus_d"] == [9, 12]
    assert _check(r, "codegree_reading")["status"] == "informational"


def test_numerology_g4():
    r = numerology_report(group("G4"))
    assert r["class"]["asserted"]
    assert r["all_asserted_pass"]
    assert r["catalan"] == 5
    assert r["g"] == 8 and r["degrees"] == [4, 6]


def test_numerology_real_shift_identity():
    r = numerology_report(group("G(2,1,2)"))
    assert _check(r, "shift_identity")["pass"]
    assert _check(r, "shift_identity")["values"]["g_minus_h"] == 0


def test_numerology_outside_classes_is_informational():
    r = numerology_report(group("G(4,2,2)"))
    assert not r["class"]["asserted"]
    statuses = {c["name"]: c["status"] for c in r["checks"]}
    assert statuses["catalan"] == "informational"
    assert statuses["degree_duality"] == "informational"
    assert r["all_asserted_pass"]


@pytest.mark.parametrize(
    "label, total", [("G(2,1,2)", 4), ("G(3,1,2)", 7), ("G4", 8), ("G(2,1,3)", 9), ("G(4,1,3)", 21)]
)
def test_koszul_single_monomial(label, total):
    G = group(label)
    res = koszul_det_multiplicity(G, builtin_rep(G, "V"))
    assert res.integral
    assert res.monomial and res.degree == total
    assert res.mass == 1


def test_koszul_shift_one_real_group():
    G = group("G(2,1,2)")
    res = koszul_det_multiplicity(G, builtin_rep(G, "V"), shift=1)
    assert res.coeffs == [0]


def test_koszul_dimension_mismatch():
    G = group("G(2,1,2)")
    with pytest.raises(ValueError):
        koszul_det_multiplicity(G, builtin_rep(G, "det"))


@pytest.mark.parametrize("shift, value", [(5, 25), (8, 64), (1, 1)])
def test_koszul_graded_dim(shift, value):
    poly, v = koszul_graded_dim(group("G(2,1,2)"), shift)
    assert v == value
    assert poly == poly[::-1]
