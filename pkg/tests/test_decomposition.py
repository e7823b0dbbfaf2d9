import random

import pytest

from qhecke import coxeter as cx
from qhecke import quiver as qv
from qhecke.algebra import Algebra, Element, PBWMonomial
from qhecke.decomposition import (
    CornerMaps,
    CornerMismatch,
    NotBlockSupported,
    NotInCorner,
    block_embedding,
    cyclo_transport,
    full_decompose,
    orbit_bijection_check,
    profile_identity_report,
    profile_system,
    trivial_system,
)
from qhecke.field import RATIONALS, Field


def two_block_quiver():
    return qv.Quiver(
        ["a", "A", "b", "B"],
        [("a", "A"), ("b", "B")],
        {"a": "A", "A": "a", "b": "B", "B": "b"},
    )


PARTITION = {"a": 1, "A": 1, "b": 2, "B": 2}


def type_b_two_blocks(n=2, seed=None):
    G = two_block_quiver()
    params = qv.Params(G, RATIONALS)
    seed = seed or ("a",) * (n - 1) + ("b",)
    orb = qv.orbit(G, seed, "B")
    return Algebra(G, params, orb, RATIONALS)


def type_a_two_blocks(n=2, seed=None):
    G = qv.Quiver(["a", "c", "b"], [("a", "c")])
    params = qv.Params(G, RATIONALS)
    seed = seed or ("a",) * (n - 1) + ("b",)
    orb = qv.orbit(G, seed, "S")
    return Algebra(G, params, orb, RATIONALS)


A_PARTITION = {"a": 1, "c": 1, "b": 2}


def assert_all(checks):
    failed = [name for name, ok in checks if not ok]
    assert not failed, f"failed: {failed[:12]} ({len(failed)} of {len(checks)})"


def test_trivial_system_validates():
    alg = type_b_two_blocks(2)
    system = trivial_system(alg)
    checks = system.validate()
    # the defining identities all hold for phi_e = psi_e = e ...
    assert_all([c for c in checks if not c[0].startswith("separation")])
    groups = system.fibers()
    assert len(groups) == len(alg.sources)  # J = E for the inert choice
    # ... but the corners do not separate a connected orbit, so the
    # strong-disjointness assumption honestly fails here
    assert dict(checks)["separation_truncated_cap2"] is False


def test_corrupted_system_fails():
    alg = type_b_two_blocks(2)
    system = trivial_system(alg)
    e0 = system.items[0][0]
    system.items[0] = (e0, alg.psi(1) * e0, e0)  # phi_e broken on purpose
    results = dict(system.validate())
    assert not results["phi_psi_e[0]"]


def test_profile_system_identities_type_b_n2():
    alg = type_b_two_blocks(2)
    ps = profile_system(alg, PARTITION)
    assert len(ps.data.profiles) == 2
    assert_all(profile_identity_report(ps))
    assert_all(ps.system().validate())
    assert len(ps.system().fibers()) == 1  # single corner


def test_profile_system_identities_type_b_n3():
    alg = type_b_two_blocks(3)
    ps = profile_system(alg, PARTITION)
    assert len(ps.data.profiles) == 3
    assert_all(profile_identity_report(ps))


def test_profile_system_type_a():
    alg = type_a_two_blocks(2)
    ps = profile_system(alg, A_PARTITION)
    assert_all(profile_identity_report(ps))
    assert_all(ps.system().validate())


def test_corner_maps_inverse_and_multiplicative():
    alg = type_b_two_blocks(2)
    ps = profile_system(alg, PARTITION)
    maps = CornerMaps(ps)
    assert_all(maps.verify_inverse(2, 1))
    assert_all(maps.verify_multiplicative())
    with pytest.raises(CornerMismatch):
        maps.theta(alg.one(), ps.data.profiles[0], ps.data.profiles[0])


def test_corner_maps_n3_sampled():
    alg = type_b_two_blocks(3)
    ps = profile_system(alg, PARTITION)
    maps = CornerMaps(ps)
    rng = random.Random(4)
    assert_all(maps.verify_inverse(2, 1, sample=8, rng=rng))


def test_theta_of_profile_idempotent_is_corner_unit():
    alg = type_b_two_blocks(2)
    ps = profile_system(alg, PARTITION)
    maps = CornerMaps(ps)
    for t in ps.data.profiles:
        assert maps.theta(ps.e_t[t], t, t) == ps.corner_unit()


def test_block_embedding_images_and_relations():
    alg = type_b_two_blocks(2)
    ps = profile_system(alg, PARTITION)
    rho = block_embedding(ps)
    assert [f.n for f in rho.factors] == [1, 1]
    # explicit image shapes
    img = rho.image_psi(1, 0)  # sign generator of the second block
    t2 = cx.evaluate_word(2, [1, 0, 1])
    assert all(m.w == t2 for m in img.terms)
    y_img = rho.image_y(1, 1)
    assert all(m.exponents == (0, 1) for m in y_img.terms)
    assert_all(rho.verify_factor_relations())
    assert_all(rho.verify_cross_commutation())
    assert_all(rho.verify_grading())
    # psi0^(2) squared is the corner unit at lambda = gamma = 0
    sq = img * img
    assert sq == ps.corner_unit()


def test_block_embedding_pbw_matching():
    alg = type_b_two_blocks(2)
    ps = profile_system(alg, PARTITION)
    rho = block_embedding(ps)
    rng = random.Random(9)
    assert_all(rho.verify_pbw_matching(max_len=3, max_ydeg=1, sample=25, rng=rng))


def test_rho_inverse_guards():
    alg = type_b_two_blocks(2)
    ps = profile_system(alg, PARTITION)
    rho = block_embedding(ps)
    off_corner = alg.e(("b", "a"))  # profile (2, 1)
    with pytest.raises(NotInCorner):
        rho.inverse(off_corner)
    r1 = cx.generator(2, 1)
    bad = alg.monomial((0, 0), r1, ("a", "b"))
    with pytest.raises(NotBlockSupported):
        rho.inverse(bad)


def test_full_decompose_type_b_n2():
    alg = type_b_two_blocks(2)
    record = full_decompose(alg, PARTITION)
    assert record.matrix_size == 2
    rng = random.Random(1)
    assert_all(record.verify(rng=rng))
    assert_all(record.verify_composite_on_generators())


def test_full_decompose_type_a():
    alg = type_a_two_blocks(2)
    record = full_decompose(alg, A_PARTITION)
    assert record.matrix_size == 2
    rng = random.Random(2)
    assert_all(record.verify(rng=rng))
    assert_all(record.verify_composite_on_generators())


def test_full_decompose_d1_identity():
    G = qv.Quiver(["a", "A"], [], {"a": "A", "A": "a"})
    alg = Algebra(G, qv.Params(G, RATIONALS), qv.orbit(G, ("a", "a"), "B"), RATIONALS)
    record = full_decompose(alg, {"a": 1, "A": 1})
    assert record.matrix_size == 1
    h = alg.psi(0) * alg.e(("a", "a"))
    t = record.ps.data.sorted_profile
    assert record.maps.theta(h, t, t) == h


def test_cyclo_transport_type_b():
    alg = type_b_two_blocks(2)
    weight = qv.CycWeight({"a": 1, "A": 2, "b": 1, "B": 1})
    checks = cyclo_transport(alg, PARTITION, weight)
    results = dict(checks)
    assert not results["quotient_is_zero_flag"]
    assert_all([c for c in checks if c[0] != "quotient_is_zero_flag"])


def test_cyclo_transport_zero_component_flags():
    alg = type_b_two_blocks(2)
    weight = qv.CycWeight({"a": 2, "A": 2})  # nothing on the second block
    checks = dict(cyclo_transport(alg, PARTITION, weight))
    assert checks["quotient_is_zero_flag"]


def test_cyclo_transport_type_b_n3_and_type_a():
    alg = type_b_two_blocks(3)
    weight = qv.CycWeight({"a": 1, "A": 1, "b": 2, "B": 2})
    assert_all(
        [
            c
            for c in cyclo_transport(alg, PARTITION, weight)
            if c[0] != "quotient_is_zero_flag"
        ]
    )
    alg_a = type_a_two_blocks(2)
    weight_a = qv.CycWeight({"a": 1, "c": 1, "b": 1})
    assert_all(
        [
            c
            for c in cyclo_transport(alg_a, A_PARTITION, weight_a)
            if c[0] != "quotient_is_zero_flag"
        ]
    )


def test_orbit_bijection_checks():
    G = two_block_quiver()
    for n in (0, 1, 2):
        assert_all(orbit_bijection_check(G, PARTITION, n, "B"))
    GA = qv.Quiver(["a", "c", "b"], [("a", "c")])
    assert_all(orbit_bijection_check(GA, A_PARTITION, 2, "S"))
