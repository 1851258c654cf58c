import json

import pytest

from nagano import tables
from nagano.errors import BindingOutOfRange, UnknownPair


def test_lookup_examples():
    iv = tables.lookup("iv")
    assert iv.algebra == "sl(p+q,R)" and iv.space == "Gr_p(R^{p+q})" and str(iv.rank) == "min(p,q)"
    ix = tables.lookup("ix")
    assert str(ix.dim_g_alpha) == "n-1" and not ix.real_type
    xii = tables.lookup("xii")
    assert str(xii.rank) == "3" and xii.noncompact_dual == "E6(-26)xR"


def test_lookup_by_name():
    assert tables.lookup("Gr_p(R^{p+q})").id == "iv"
    assert tables.lookup("E7,C").id == "xvii"


def test_unknown_pair():
    with pytest.raises(UnknownPair):
        tables.lookup("xx")
    with pytest.raises(KeyError):
        tables.lookup(4)


def test_real_type_rows():
    ids = [r.id for r in tables.real_type_rows()]
    assert ids == ["i", "iii", "iv", "vii", "viii", "x", "xi", "xii", "xix"]
    assert "v" not in ids


def test_rows_are_unique_and_real_type_means_dimension_one():
    ids = [r.id for r in tables.all_rows()]
    assert len(ids) == len(set(ids)) == 19
    for row in tables.all_rows():
        if row.real_type:
            assert row.dim_g_alpha.variables() == set() and row.dim_g_alpha.evaluate({}) == 1
        else:
            low = {name: m for name, m in row.parameters}
            assert row.dim_g_alpha.evaluate(low) != 1


def test_json_round_trip_is_bit_exact():
    text = tables.rows_to_json()
    rows = [tables.NaganoPairRow.from_json(d) for d in json.loads(text)]
    assert tables.rows_to_json(rows) == text
    assert rows == tables.all_rows()


def test_instantiate_examples():
    proj = tables.instantiate("iv", p=1, q=3)
    assert proj["rank"] == 1 and proj["space"] == "P(R^4)" and not proj["higher_rank"]
    assert tables.instantiate("iv", {"p": 2, "q": 2})["rank"] == 2
    assert tables.instantiate("viii", p=1, q=3)["rank"] == 2


@pytest.mark.parametrize("p,q", [(1, 1), (1, 5), (2, 2), (3, 2), (4, 7)])
def test_higher_rank_gate_for_grassmannians(p, q):
    row = tables.instantiate("iv", p=p, q=q)
    assert row["higher_rank"] == (min(p, q) >= 2)


@pytest.mark.parametrize(
    "key,bindings",
    [("iv", {"p": 0, "q": 2}), ("iv", {"p": 1}), ("i", {"n": 2}), ("iv", {"p": 1, "q": 1, "n": 3}), ("ix", {"n": 2.5})],
)
def test_binding_out_of_range(key, bindings):
    with pytest.raises(BindingOutOfRange):
        tables.instantiate(key, bindings)


def test_rank_one_real_type_instances_are_projective_spaces():
    for row in tables.real_type_rows():
        grids = [[{}]]
        for name, low in row.parameters:
            grids = [[{**b, name: v} for b in g for v in range(low, low + 6)] for g in grids]
        for bindings in grids[0]:
            inst = tables.instantiate(row.id, bindings)
            if inst["rank"] == 1:
                assert row.id == "iv" and min(bindings["p"], bindings["q"]) == 1
                assert inst["space"].startswith("P(R^")


def test_format_table_has_a_line_per_row():
    text = tables.format_table()
    assert len(text.splitlines()) == 20
