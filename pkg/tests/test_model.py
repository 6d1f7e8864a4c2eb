import itertools
import json
import random

import pytest

from locco import (BudgetError, CoverModel, ModelError, arc,
                   enumeration_budget, left_invariant_cover, load_model,
                   model_from_json_dict, shrink_relation_check)
from locco.cli import bundled_model_names, load_bundled_model
from locco.compare import random_cover_model


def brute_diagonal(model, n):
    """Independent enumeration of the level-n neighborhood."""
    out = set()
    for t in itertools.product(model.points, repeat=n + 1):
        if any(all(c in members for c in t) for members in model.cover):
            out.add(t)
    return out


def test_interval_diagonal_neighborhood_oracle():
    m = load_bundled_model("interval")
    got = set(m.diagonal_neighborhood(1).tuples)
    assert got == brute_diagonal(m, 1)
    assert len(got) == 7


def test_hexagon_neighborhood_sizes():
    m = load_bundled_model("hexagon")
    assert len(m.diagonal_neighborhood(1)) == 24
    assert len(m.diagonal_neighborhood(2)) == 78


def test_random_models_match_brute_force():
    for seed in range(6):
        m = random_cover_model(random.Random(seed))
        for n in (0, 1, 2):
            assert set(m.diagonal_neighborhood(n).tuples) == brute_diagonal(m, n)


def test_diagonal_neighborhood_tuples_are_sorted_and_cached():
    m = load_bundled_model("hexagon")
    a = m.diagonal_neighborhood(1)
    b = m.diagonal_neighborhood(1)
    assert a is b
    keys = [m.point_key(t) for t in a.tuples]
    assert keys == sorted(keys)


def test_budget_error(monkeypatch):
    m = load_bundled_model("hexagon")
    monkeypatch.setenv("LOCCO_BUDGET", "10")
    with pytest.raises(BudgetError):
        CoverModel(points=m.points, cover=m.cover, cover_names=m.cover_names,
                   complex=m.complex).diagonal_neighborhood(2)
    monkeypatch.delenv("LOCCO_BUDGET")
    assert enumeration_budget() == 2_000_000


def test_nerve_oracle_hexagon():
    m = load_bundled_model("hexagon")
    nerve = m.nerve()
    assert nerve.of_dimension(0) == ((0,), (1,), (2,))
    assert set(nerve.of_dimension(1)) == {(0, 1), (0, 2), (1, 2)}
    assert nerve.of_dimension(2) == ()
    assert m.intersection((0, 1)) == (2,)
    assert m.intersection((1, 2)) == (4,)
    assert m.intersection((0, 2)) == (0,)


def test_nerve_oracle_z6():
    m = load_bundled_model("z6_arcs")
    nerve = m.nerve()
    assert [len(nerve.of_dimension(d)) for d in range(4)] == [6, 12, 6, 0]


def test_intersection_requires_increasing_indices():
    m = load_bundled_model("hexagon")
    with pytest.raises(ModelError):
        m.intersection((1, 0))
    with pytest.raises(ModelError):
        m.intersection((0, 0))


def test_validation_rejects_bad_models():
    with pytest.raises(ModelError):
        CoverModel(points=(), cover=(frozenset({0}),), cover_names=("U0",))
    with pytest.raises(ModelError):
        CoverModel(points=(0, 1), cover=(frozenset({0}),), cover_names=("U0",))
    with pytest.raises(ModelError):
        CoverModel(points=(0, 1), cover=(frozenset({0, 7}),), cover_names=("U0",))
    with pytest.raises(ModelError):
        CoverModel(points=(0, 1), cover=(frozenset({0, 1}),), cover_names=("U0",),
                   complex=((0,), (1,), (1, 0)))
    with pytest.raises(ModelError):
        CoverModel(points=(0, 1), cover=(frozenset({0, 1}),), cover_names=("U0",),
                   complex=((0, 1),))


def test_complex_helpers():
    m = load_bundled_model("hexagon")
    assert m.u_small_subcomplex() == m.complex
    sub = m.full_subcomplex({0, 1, 2})
    assert sub == ((0,), (1,), (2,), (0, 1), (1, 2))


def test_json_round_trip(tmp_path):
    m = load_bundled_model("z6_arcs")
    doc = m.to_json_dict()
    back = model_from_json_dict(doc)
    assert back.points == m.points
    assert back.cover == m.cover
    assert back.complex == m.complex
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    assert load_model(str(path)).cover == m.cover


def test_left_invariant_cover_radius_caps():
    m12 = left_invariant_cover(12, 4)
    assert len(m12.cover) == 12 and all(len(s) == 9 for s in m12.cover)
    with pytest.raises(ModelError):
        left_invariant_cover(12, 5)
    left_invariant_cover(6, 1)
    with pytest.raises(ModelError):
        left_invariant_cover(6, 2)
    with pytest.raises(ModelError):
        left_invariant_cover(4, 1)


def test_arc_and_shrink_relation():
    assert arc(12, 1, 0) == frozenset({11, 0, 1})
    assert arc(6, 2, 5) == frozenset({3, 4, 5, 0, 1})
    assert shrink_relation_check(12, 1, 3)
    assert shrink_relation_check(12, 1, 2)
    assert not shrink_relation_check(12, 2, 3)
    assert not shrink_relation_check(12, 1, 1)


def test_bundled_models_all_load():
    names = bundled_model_names()
    assert "hexagon" in names and "projective_plane" in names
    for name in names:
        model = load_bundled_model(name)
        assert len(model.points) >= 1


def test_random_cover_model_is_valid_and_seeded():
    a = random_cover_model(random.Random(42))
    b = random_cover_model(random.Random(42))
    assert a.points == b.points and a.cover == b.cover
    assert len(a.points) <= 8 and len(a.cover) <= 4
