import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from teamlog.errors import ModelError
from teamlog.model import (
    Team, full_team, load_structure, load_team, make_structure, make_team, restrict_team, team_order_key,
)

TRIANGLE = {"domain": ["a", "b", "c"], "relations": {"E": [["a", "b"], ["b", "c"], ["c", "a"]]}}


def test_load_triangle():
    A = load_structure(json.dumps(TRIANGLE))
    assert A.domain == ("a", "b", "c")
    assert A.relations["E"] == {(0, 1), (1, 2), (2, 0)}
    assert A.holds("E", (2, 0)) and not A.holds("E", (0, 2))


def test_load_from_dict_and_path(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(TRIANGLE), encoding="utf-8")
    assert load_structure(str(p)) == load_structure(TRIANGLE)


def test_structure_without_relations():
    A = load_structure({"domain": ["a"], "relations": {}})
    assert A.size == 1 and A.relations == {}
    assert load_structure({"domain": ["a", "b"]}).size == 2


def test_duplicate_tuples_collapse():
    A = make_structure("ab", {"E": [["a", "b"], ["a", "b"]]})
    assert A.relations["E"] == {(0, 1)}


@pytest.mark.parametrize("doc", [
    {"domain": ["a", "b"], "relations": {"E": [["a", "b"], ["a"]]}},
    {"domain": ["a"], "relations": {"E": [["a", "z"]]}},
    {"domain": ["a"], "extra": 1},
    {"relations": {}},
    {"domain": []},
    {"domain": ["a", "a"]},
])
def test_bad_structures(doc):
    with pytest.raises(ModelError):
        load_structure(doc)


def test_bad_json():
    with pytest.raises(ModelError):
        load_structure("{not json")


def test_relation_arity_checked_on_use():
    A = make_structure("ab", {"E": [["a", "b"]]})
    with pytest.raises(ModelError):
        A.holds("E", (0,))
    with pytest.raises(ModelError):
        A.holds("R", (0,))


def test_load_team():
    A = load_structure(TRIANGLE)
    X = load_team({"vars": ["x", "y"], "rows": [["a", "a"], ["a", "b"]]}, A)
    assert X.vars == ("x", "y") and X.rows == ((0, 0), (0, 1))
    assert len(load_team({"vars": ["x"], "rows": []}, A)) == 0
    dup = load_team({"vars": ["x"], "rows": [["b"], ["b"], ["a"]]}, A)
    assert dup.rows == ((0,), (1,))


@pytest.mark.parametrize("doc", [
    {"vars": ["x", "y"], "rows": [["a"]]},
    {"vars": ["x"], "rows": [["q"]]},
    {"vars": ["x"], "rows": [], "more": []},
    {"vars": ["x", "x"], "rows": []},
])
def test_bad_teams(doc):
    with pytest.raises(ModelError):
        load_team(doc, load_structure(TRIANGLE))


def test_team_json_round_trip():
    A = load_structure(TRIANGLE)
    X = make_team(("x", "y"), [(2, 1), (0, 0)])
    assert load_team(X.to_json(A), A) == X
    assert load_structure(A.to_json()) == A


def test_full_team():
    two, three = make_structure("ab"), make_structure("abc")
    assert len(full_team(two, ("x", "y"))) == 4
    assert len(full_team(three, ("x",))) == 3
    assert full_team(three, ()).rows == ((),)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3))
def test_full_team_size(n, r):
    A = make_structure(range(n))
    X = full_team(A, [f"v{i}" for i in range(r)])
    assert len(X) == n**r
    assert list(X.rows) == sorted(X.rows)


def test_restrict():
    X = make_team(("x", "y"), [(0, 1), (0, 2)])
    assert restrict_team(X, {"x"}) == make_team(("x",), [(0,)])
    assert restrict_team(X, {"x", "y"}) == X
    assert len(restrict_team(make_team(("x", "y"), []), {"x"})) == 0
    with pytest.raises(ModelError):
        restrict_team(X, {"z"})


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_restrict_idempotent_and_monotone(seed):
    rng = random.Random(seed)
    vars_ = ("x", "y", "z")
    rows = [tuple(rng.randrange(3) for _ in vars_) for _ in range(rng.randrange(0, 10))]
    X = make_team(vars_, rows)
    small = set(rng.sample(vars_, rng.randrange(0, 3)))
    big = small | set(rng.sample(vars_, rng.randrange(0, 4)))
    once = restrict_team(X, small)
    assert restrict_team(once, small) == once
    assert restrict_team(restrict_team(X, big), small) == once
    assert len(once) <= len(restrict_team(X, big))


def test_team_rows_sorted_and_deduped():
    X = Team(("x",), ((2,), (0,), (2,)))
    assert X.rows == ((0,), (2,))
    with pytest.raises(ModelError):
        Team(("x",), ((0, 1),))


def test_team_order_key():
    universe = [(0,), (1,), (2,)]
    teams = [{(0,), (1,)}, {(0,)}, {(1,), (2,)}, {(2,)}, set()]
    assert sorted(teams, key=lambda t: team_order_key(t, universe)) == teams
