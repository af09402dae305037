import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from heegner_lab.grossgalois import (EquidistReport, ExperimentConfig, InsufficientDataError,
                                     Twist, base_point, c_constant, class_action, class_data,
                                     column_translation, galois_orbit, hecke_equidist_stats,
                                     optimal_embeddings, parse_twists, partition_T, select_ell,
                                     simultaneous_reduction, surjectivity_experiment,
                                     total_variation, twist_to_pic, validate_point,
                                     weight_measure)
from heegner_lab.quadratic import (BQForm, ImagQuadField, QuadOrder, class_group, class_number,
                                   compose, principal_form)

# (ell, D) with ell inert in Q(sqrt D)
INERT_PAIRS = [(11, -3), (11, -4), (23, -3), (23, -4), (23, -8), (13, -7), (13, -8), (37, -8), (37, -15)]


def test_weight_measure_and_c_constant():
    cls = class_data(11)
    mu = weight_measure(cls)
    assert sum(mu) == 1
    assert sorted(mu) == [Fraction(2, 5), Fraction(3, 5)]
    assert c_constant(cls, 1) == Fraction(2, 5) and c_constant(cls, 3) == Fraction(8, 125)
    with pytest.raises(ValueError):
        c_constant(cls, 0)


probability = st.lists(st.integers(0, 20), min_size=3, max_size=3).filter(any).map(
    lambda v: [Fraction(x, sum(v)) for x in v])


@given(probability, probability, probability)
def test_total_variation_is_a_metric(p, q, r):
    assert 0 <= total_variation(p, q) <= 1
    assert total_variation(p, q) == total_variation(q, p)
    assert total_variation(p, p) == 0
    assert total_variation(p, r) <= total_variation(p, q) + total_variation(q, r)


def test_total_variation_dicts():
    assert total_variation({0: Fraction(1)}, {1: Fraction(1)}) == 1


def test_experiment_config():
    assert ExperimentConfig(2, 3, 1, 2).bound() == (2 * 2) ** 2 * 3
    with pytest.raises(ValueError):
        ExperimentConfig(0, 1, 1, 1)


def test_base_points_frozen():
    cls = class_data(11)
    w = [c.w for c in cls]
    p3 = base_point(cls, QuadOrder(ImagQuadField(-3), 1))
    p4 = base_point(cls, QuadOrder(ImagQuadField(-4), 1))
    assert w[p3.class_index] == 6 and w[p4.class_index] == 4
    assert validate_point(p3, cls, -3) and validate_point(p4, cls, -4)


@pytest.mark.parametrize("ell,D", INERT_PAIRS)
def test_eichler_embedding_count(ell, D):
    # sum over classes of optimal embeddings mod units = h(O_n) (1 - (O_n / ell)) = 2 h(O_n)
    cls = class_data(ell)
    fld = ImagQuadField(D)
    for n in (1, 2, 5):
        if n % ell == 0 or D % n == 0 and n > 1:
            continue
        pts = optimal_embeddings(cls, QuadOrder(fld, n))
        assert len(pts) == 2 * class_number(n * n * D)
        assert all(validate_point(p, cls, D) for p in pts)
        assert len({p.key() for p in pts}) == len(pts)


@pytest.mark.parametrize("ell,D,n", [(11, -3, 5), (23, -4, 3), (37, -15, 1), (13, -7, 3), (11, -4, 7)])
def test_action_is_a_free_group_action(ell, D, n):
    cls = class_data(ell)
    order = QuadOrder(ImagQuadField(D), n)
    base = base_point(cls, order)
    G, pts = galois_orbit(base, cls, order)
    assert len(pts) == len(G) == class_number(order.disc)
    assert len({p.key() for p in pts.values()}) == len(G)
    e = principal_form(order.disc)
    for f in G:
        for g in list(G)[:4]:
            # pts is indexed consistently: g * pts[f] == pts[g f]
            assert class_action(pts[f], g, cls, order) == pts[compose(g, f)]
        assert class_action(pts[f], e, cls, order) == pts[f]


def test_nonprincipal_class_has_order_two():
    cls = class_data(11)
    order = QuadOrder(ImagQuadField(-15), 1)
    g = BQForm(2, 1, 2)
    pt = base_point(cls, order)
    once = class_action(pt, g, cls, order)
    assert once != pt and class_action(once, g, cls, order) == pt


def test_parse_twists():
    tws = parse_twists("id; 1:2,1,3", -23)
    assert tws[0] == Twist.identity(-23) and tws[1] == Twist(1, BQForm(2, 1, 3))
    assert str(tws[1]) == "1:(2,1,3)"
    with pytest.raises(ValueError):
        parse_twists("1:1,1,1", -23)


@pytest.mark.parametrize("D", [-23, -47, -71])
def test_twist_to_pic_on_maximal_order_is_a_homomorphism(D):
    O = QuadOrder(ImagQuadField(D), 1)
    G = class_group(O)
    image = {g: twist_to_pic(Twist(1, g), O, 11) for g in G}
    assert sorted(image.values()) == sorted(G.elements)
    for f in G:
        for g in G:
            assert image[compose(f, g)] == compose(image[f], image[g])


def test_simultaneous_reduction_table():
    cls = class_data(23)
    fld = ImagQuadField(-4)
    tws = parse_twists("id;id", -4)
    t = simultaneous_reduction(5, tws, cls, fld)
    assert len(t) == class_number(-100) == t.distinct_points
    assert t.column(0) == t.column(1)
    assert column_translation(t, 0, 1) == principal_form(-100)
    assert t.coverage() == Fraction(len(set(t.column(0))), len(cls))


def test_surjectivity_report_frozen_and_parallel_identical():
    fld = ImagQuadField(-3)
    rep1 = surjectivity_experiment(11, fld, n_list=[5, 17, 23])
    rep2 = surjectivity_experiment(11, fld, n_list=[5, 17, 23], workers=2)
    assert rep1.to_json() == rep2.to_json() and rep1.to_csv() == rep2.to_csv()
    rows = {r["n"]: r for r in rep1.rows}
    assert rows[5]["coverage"] == 1 and rows[5]["rows"] == class_number(-75) == 2
    assert rep1.summary["smallest_full_coverage_n"] == 5
    parsed = list(csv.DictReader(io.StringIO(rep1.to_csv())))
    assert [int(r["n"]) for r in parsed] == [5, 17, 23]
    json.loads(rep1.to_json())


def test_surjectivity_rejects_split_ell():
    with pytest.raises(ValueError):
        surjectivity_experiment(13, ImagQuadField(-3), n_list=[5])


def test_hecke_equidist_frozen():
    rep = hecke_equidist_stats(11, n_list=[2, 3], classes=class_data(11))
    r2 = rep.rows[0]
    assert r2["deg"] == 3 and r2["tv_exact"] == [2, 5]
    assert rep.rows[0]["envelope"] >= rep.rows[1]["envelope"]
    assert isinstance(rep, EquidistReport)


def test_select_ell_frozen():
    sel = select_ell(ExperimentConfig(), ImagQuadField(-3))
    assert sel.ell == 11 and sel.certificate == [(2, 1), (5, 1), (11, 2)]
    sel = select_ell(ExperimentConfig(t1=2), ImagQuadField(-3))
    assert sel.ell == 47 and sel.num_classes == 5


def test_partition_T_needs_data():
    cls = class_data(11)
    tws = [Twist.identity(-3)]
    with pytest.raises(InsufficientDataError):
        partition_T(tws, [simultaneous_reduction(5, tws, cls, -3)], min_data=3)
    tables = [simultaneous_reduction(n, tws * 2, cls, -3) for n in (5, 17, 23)]
    assert partition_T(tws * 2, tables) == [[0, 1]]


def test_twisted_column_is_a_translate():
    cls = class_data(11)
    fld = ImagQuadField(-3)
    tws = parse_twists("id;5:3,3,7", -3)
    t = simultaneous_reduction(5, tws, cls, fld)
    assert sorted(t.column(0)) == [0, 1]
    s = column_translation(t, 0, 1)
    assert s == twist_to_pic(tws[1], QuadOrder(fld, 5), 11) != principal_form(-75)
    assert t.coverage() == Fraction(len(set(t.image())), len(cls) ** 2)
