import random

import pytest

from locco import (AcyclicityError, CoverModel, Integers, PrimeField,
                   Rationals, colimit_scan, is_acyclic, model_hash,
                   random_cover_model, verify_lambda_iso, verify_local_vs_cech)
from locco.cli import load_bundled_model

Q = Rationals()


def test_bundled_profiles_agree():
    expected = {
        "interval": [1, 0],
        "hexagon": [1, 1],
        "z6_arcs": [1, 1],
        "triangle": [1, 0],
    }
    for name, profile in expected.items():
        m = load_bundled_model(name)
        rep = verify_local_vs_cech(m, Q, 1, spot_checks=False)
        assert rep.isomorphic
        assert rep.profiles["local"] == profile
        assert rep.profiles["cech"] == profile
        assert rep.profiles["total"] == profile


def test_contraction_spot_checks_run():
    m = load_bundled_model("hexagon")
    rep = verify_local_vs_cech(m, Q, 1, spot_checks=True, seed=1)
    checks = rep.extras["contraction_checks"]
    assert checks and all(checks.values())


def test_simplicial_profile_matches_on_good_cover():
    m = load_bundled_model("hexagon")
    rep = verify_local_vs_cech(m, Q, 1, spot_checks=False)
    assert rep.profiles["simplicial"] == [1, 1]
    assert all(rep.extras["simplicial_matches"])


def test_is_acyclic_statuses():
    m = load_bundled_model("hexagon")
    one_arc = is_acyclic(m, (0,), Q)
    assert one_arc and not one_arc.empty
    pairwise = is_acyclic(m, (0, 1), Q)
    assert pairwise and pairwise.profile == (1,)
    empty = is_acyclic(m, (0, 1, 2), Q)
    assert empty and empty.empty and empty.profile is None

    whole = CoverModel(points=tuple(range(6)),
                       cover=(frozenset(range(6)),),
                       cover_names=("all",),
                       complex=m.complex, name="whole-cycle")
    status = is_acyclic(whole, (0,), Q)
    assert not status and status.profile == (1, 1)


def test_lambda_iso_on_good_covers():
    hexa = load_bundled_model("hexagon")
    rep = verify_lambda_iso(hexa, Q, 1)
    assert rep.isomorphic
    assert rep.induced_ranks == (1, 1)
    assert rep.extras["chain_map_exact"]
    interval = load_bundled_model("interval")
    rep0 = verify_lambda_iso(interval, Q, 1)
    assert rep0.isomorphic and rep0.induced_ranks == (1, 0)


def test_lambda_iso_gate_raises_on_bad_cover():
    # the one-set cover of the projective plane is rationally fine but has
    # mod-2 cohomology in degrees 1 and 2, so the gate must trip over Z/2
    rp2 = load_bundled_model("projective_plane")
    rep = verify_lambda_iso(rp2, Q, 1)
    assert rep.isomorphic
    with pytest.raises(AcyclicityError):
        verify_lambda_iso(rp2, PrimeField(2), 1)


def test_lambda_iso_over_prime_field():
    hexa = load_bundled_model("hexagon")
    rep = verify_lambda_iso(hexa, PrimeField(5), 1)
    assert rep.isomorphic and rep.induced_ranks == (1, 1)


def test_colimit_scan_stabilizes():
    reports = colimit_scan(12, [1, 2], Q, max_degree=1)
    assert len(reports) == 2
    for rep in reports:
        assert rep.profiles["total"] == [1, 1]
        assert rep.profiles["simplicial"] == [1, 1]
        assert rep.isomorphic
        assert rep.extras["stabilized"]
    small = colimit_scan(6, [1], Q, max_degree=1)
    assert small[0].profiles["total"] == [1, 1]


def test_random_models_three_way_agreement():
    for seed in (0, 1, 2):
        m = random_cover_model(random.Random(seed))
        for system in (Q, PrimeField(5)):
            rep = verify_local_vs_cech(m, system, 1, spot_checks=False)
            assert rep.isomorphic, (seed, system.name, rep.profiles)


def test_integer_profile_comparison():
    m = load_bundled_model("interval")
    rep = verify_local_vs_cech(m, Integers(), 1, spot_checks=False)
    assert rep.isomorphic
    assert rep.profiles["local"] == [(1, ()), (0, ())]


def test_model_hash_is_stable_and_sensitive():
    a = load_bundled_model("hexagon")
    b = load_bundled_model("hexagon")
    assert model_hash(a) == model_hash(b)
    assert model_hash(a) != model_hash(load_bundled_model("interval"))


def test_report_json_shape():
    m = load_bundled_model("interval")
    doc = verify_local_vs_cech(m, Q, 1, spot_checks=False).to_json_dict()
    assert doc["kind"] == "local-vs-cech"
    assert doc["isomorphic"] is True
    assert set(doc["profiles"]) == {"local", "cech", "total", "simplicial"}
