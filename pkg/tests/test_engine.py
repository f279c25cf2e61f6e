"""Saturation engine: seeds, triviality, tableaux, decision reports."""

import pytest

from matprop import (Derived, ExtendedMatrix, OriginalLeft, PointednessError,
                     ResourceLimitError, StarColumn, builtin_matrix, decide,
                     is_anti_trivial, is_trivial_matrix, is_trivial_set,
                     matrix_set, parse_matrix, saturate, seed_tableau)
from matprop.engine import _interpretation_vectors

ARI = matrix_set([builtin_matrix("ari")])
MAJ = builtin_matrix("maj")
CLASH = parse_matrix("[x1 | x2]", pointed=False)

# ({ari}, maj) saturation, captured once and checked by hand: the three
# seed columns are maj's left columns, then row stacking over ari yields
# the goal (1, 1, 1) after four derivations
ARI_MAJ_COLUMNS = [(1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 1, 2), (2, 2, 1),
                   (1, 2, 2), (1, 1, 1)]
ARI_MAJ_PROVENANCE = [OriginalLeft(1), OriginalLeft(2), OriginalLeft(3),
                      Derived(0, (0, 1, 2)), Derived(0, (1, 0, 2)),
                      Derived(0, (0, 2, 1)), Derived(0, (0, 3, 2))]


def test_seed_tableau_order_and_dedup():
    t = seed_tableau(builtin_matrix("sub"))
    assert t.columns == [(1, 1), (0, 1), (0, 0)]
    assert t.provenance == [OriginalLeft(1), OriginalLeft(2), StarColumn()]

    dup = ExtendedMatrix(((1, 1, 2), (1, 1, 1)), False)
    t = seed_tableau(dup)
    assert t.columns == [(1, 1)]  # repeated left column kept once
    assert t.provenance == [OriginalLeft(1)]

    distinct = ExtendedMatrix(((1, 2, 1), (1, 1, 1)), False)
    t = seed_tableau(distinct)
    assert t.columns == [(1, 1), (2, 1)]
    assert t.provenance == [OriginalLeft(1), OriginalLeft(2)]

    # a left column equal to the star column keeps its original provenance
    starry = ExtendedMatrix(((0, 1), (0, 1)), True)
    t = seed_tableau(starry)
    assert t.columns == [(0, 0)]
    assert t.provenance == [OriginalLeft(1)]


def test_tableau_bound():
    t = seed_tableau(builtin_matrix("sub"))
    assert t.bound(2) == 4  # pointed, k = 1
    t = seed_tableau(MAJ)
    assert t.bound(3) == 8  # non-pointed, k = 2


def test_triviality():
    assert is_trivial_matrix(CLASH)
    assert is_trivial_matrix(CLASH.with_pointed())
    assert is_trivial_matrix(ExtendedMatrix(((1,),), False))  # no left columns
    assert not is_trivial_matrix(ExtendedMatrix(((0,),), True))
    assert is_anti_trivial(ExtendedMatrix(((0,),), True))
    for name in ("mal", "maj", "ari", "uni", "struni", "sub", "q4"):
        assert not is_trivial_matrix(builtin_matrix(name))
    assert not is_trivial_set(matrix_set([]))
    assert is_trivial_set(matrix_set([builtin_matrix("sub"),
                                      CLASH.with_pointed()]))


def test_interpretation_vectors_frozen():
    got = _interpretation_vectors(builtin_matrix("sub"), [0, 1, 2])
    assert got == [(0, 0, 0), (1, 0, 1), (1, 1, 0), (2, 0, 2), (2, 2, 0)]


def test_saturate_ari_maj_frozen():
    t = saturate(ARI, MAJ)
    assert t.columns == ARI_MAJ_COLUMNS
    assert t.provenance == ARI_MAJ_PROVENANCE

    full = saturate(ARI, MAJ, full=True)
    assert full.columns == ARI_MAJ_COLUMNS + [(2, 2, 2)]
    assert full.columns[:len(t.columns)] == t.columns  # early run is a prefix
    assert len(full) <= full.bound(3)


def test_saturate_uni_sub_struni_frozen():
    mats = matrix_set([builtin_matrix("uni"), builtin_matrix("sub")])
    t = saturate(mats, builtin_matrix("struni"))
    assert t.columns == [(1, 2), (0, 2), (0, 1), (0, 0), (1, 0), (1, 1)]
    assert builtin_matrix("struni").right_column() in t


def test_saturate_sub_q4_frozen():
    t = saturate(matrix_set([builtin_matrix("sub")]), builtin_matrix("q4"),
                 full=True)
    assert t.columns == [(1, 1, 1), (0, 1, 2), (0, 2, 1), (0, 2, 2), (0, 0, 0)]
    assert builtin_matrix("q4").right_column() not in t


def test_saturate_bound_self_pairs():
    for name in ("mal", "maj", "ari", "uni", "struni", "struni2", "sub",
                 "p3", "q4", "edge3", "cube3"):
        m = builtin_matrix(name)
        t = saturate(matrix_set([m]), m, full=True)
        assert len(t) <= t.bound(m.n)


def test_saturate_resource_limit():
    with pytest.raises(ResourceLimitError):
        saturate(ARI, MAJ, max_candidates=0)
    with pytest.raises(ResourceLimitError):
        decide(ARI, MAJ, max_candidates=0)


def test_pointedness_mismatch():
    with pytest.raises(PointednessError):
        saturate(matrix_set([builtin_matrix("sub")]), MAJ)
    with pytest.raises(PointednessError):
        decide(matrix_set([builtin_matrix("sub")]), MAJ)


def test_decide_holds_and_not():
    assert decide(ARI, MAJ).holds
    assert decide(ARI, builtin_matrix("mal")).holds
    assert decide(matrix_set([MAJ, builtin_matrix("mal")]),
                  builtin_matrix("ari")).holds
    assert not decide(matrix_set([builtin_matrix("mal")]), MAJ).holds
    assert not decide(matrix_set([builtin_matrix("sub")]),
                      builtin_matrix("q4")).holds


def test_decide_m_zero_case():
    m0 = ExtendedMatrix(((1,),), False)
    target = ExtendedMatrix(((1,), (1,)), False)
    rep = decide(matrix_set([m0]), target)
    assert rep.holds and rep.degenerate == "m_zero_case"
    rep = decide(matrix_set([MAJ]), target)
    assert not rep.holds and rep.degenerate == "m_zero_case"
    # branch order: the no-left-column branch wins over the trivial branch
    rep = decide(matrix_set([CLASH]), target)
    assert not rep.holds and rep.degenerate == "m_zero_case"


def test_decide_trivial_S():
    rep = decide(matrix_set([CLASH]), MAJ)
    assert rep.holds and rep.degenerate == "trivial_S"
    assert rep.used_matrices == ()
    rep = decide(matrix_set([CLASH.with_pointed()]), builtin_matrix("sub"))
    assert rep.holds and rep.degenerate == "trivial_S"


def test_decide_anti_trivial_flag():
    rep = decide(matrix_set([MAJ]), parse_matrix("[x1 | x1]", pointed=False))
    assert rep.holds and rep.degenerate == "anti_trivial_N"
    assert rep.used_matrices == ()
    rep = decide(matrix_set([builtin_matrix("sub")]), parse_matrix("[x1 | *]"))
    assert rep.holds and rep.degenerate == "anti_trivial_N"


def test_decide_empty_S():
    rep = decide(matrix_set([], pointed=True), builtin_matrix("sub"))
    assert not rep.holds and rep.degenerate == "none"
    rep = decide(matrix_set([], pointed=True),
                 parse_matrix("[x1 | x1]", pointed=True))
    assert rep.holds and rep.degenerate == "anti_trivial_N"


def test_decide_used_matrices():
    mats = matrix_set([builtin_matrix("uni"), builtin_matrix("sub")])
    rep = decide(mats, builtin_matrix("struni"))
    assert rep.holds
    assert rep.used_matrices == (0, 1)


def test_decide_mode_and_determinism():
    a = decide(ARI, MAJ).to_json_dict()
    b = decide(ARI, MAJ).to_json_dict()
    assert a == b
    assert a["mode"] == "non_pointed"
    assert decide(matrix_set([builtin_matrix("sub")]),
                  builtin_matrix("p3")).mode == "pointed"


def test_report_json_structure():
    d = decide(ARI, MAJ).to_json_dict()
    assert d["verdict"] == "holds"
    assert d["degenerate"] == "none"
    assert d["used_matrices"] == [0]
    assert len(d["columns"]) == 7
    assert d["columns"][0] == {"entries": ["x1", "x1", "x2"],
                               "provenance": {"type": "original", "j": 1}}
    assert d["columns"][3] == {"entries": ["x2", "x1", "x2"],
                               "provenance": {"type": "derived", "matrix": 0,
                                              "parents": [0, 1, 2]}}
    slim = decide(ARI, MAJ).to_json_dict(include_tableau=False)
    assert "columns" not in slim
    d2 = decide(matrix_set([builtin_matrix("sub")]), builtin_matrix("p3"))
    cols = d2.to_json_dict()["columns"]
    assert {"entries": ["*", "*", "*"], "provenance": {"type": "star"}} in cols
