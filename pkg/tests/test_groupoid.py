"""Finite groupoid models: translation groupoids, configurations,
coverings, equivalences, and the Morita triple construction."""

from collections import Counter

import pytest

from orbconfig.groupoid import (
    CheckResult,
    FiniteGroup,
    FiniteGroupoid,
    GroupAction,
    GroupoidHom,
    InvalidModelError,
    configuration_groupoid,
    forget_map,
    full_subgroupoid,
    group_action_from_json,
    group_from_json,
    groupoid_from_json,
    identity_hom,
    inclusion_hom,
    induced_configuration_hom,
    is_covering_hom,
    is_equivalence,
    morita_triple,
    orbit_space,
    skeleton_inclusion,
    subgroup_covering_hom,
    translation_groupoid,
)


def unit_groupoid(labels):
    trivial = FiniteGroup.cyclic(1)
    return translation_groupoid(
        GroupAction.from_function(trivial, labels, lambda g, x: x)
    )


def negation_groupoid():
    return translation_groupoid(GroupAction.negation_mod(6))


# -- groups -------------------------------------------------------------------


def test_group_constructors():
    assert FiniteGroup.cyclic(5).order == 5
    assert FiniteGroup.klein().order == 4
    d4 = FiniteGroup.dihedral(4)
    assert d4.order == 8
    r, s = (1, 0), (0, 1)
    assert d4.op(s, d4.op(r, s)) == d4.inv(r)


def test_group_rejects_bad_tables():
    with pytest.raises(InvalidModelError):
        FiniteGroup([0, 1], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1}, 0)


def test_subgroup_enumeration_counts():
    assert len(FiniteGroup.cyclic(4).subgroups()) == 3
    assert len(FiniteGroup.klein().subgroups()) == 5
    d4 = FiniteGroup.dihedral(4)
    assert len(d4.subgroups()) == 10
    assert len(d4.normal_subgroups()) == 6


def test_quotient_group():
    c4 = FiniteGroup.cyclic(4)
    quotient, projection = c4.quotient(frozenset({0, 2}))
    assert quotient.order == 2
    assert projection[0] == projection[2] == quotient.identity
    assert projection[1] == projection[3]
    with pytest.raises(InvalidModelError):
        FiniteGroup.dihedral(4).quotient(frozenset({(0, 0), (0, 1)}))


# -- actions ------------------------------------------------------------------


def test_action_validation():
    group = FiniteGroup.cyclic(2)
    with pytest.raises(InvalidModelError):
        GroupAction(group, [0, 1], {(0, 0): 0, (0, 1): 1, (1, 0): 0, (1, 1): 0})


def test_negation_orbits():
    blocks = {tuple(sorted(b)) for b in GroupAction.negation_mod(6).orbits()}
    assert blocks == {(0,), (3,), (1, 5), (2, 4)}


def test_rotation_mod_orbits():
    blocks = {tuple(sorted(b)) for b in GroupAction.rotation_mod(12, 4).orbits()}
    assert blocks == {(0, 3, 6, 9), (1, 4, 7, 10), (2, 5, 8, 11)}
    with pytest.raises(InvalidModelError):
        GroupAction.rotation_mod(10, 4)


def test_quotient_action_of_klein():
    klein = FiniteGroup.klein()
    action = GroupAction.regular(klein)
    quotient, point_proj, group_proj = action.quotient_action(
        frozenset({(0, 0), (1, 0)})
    )
    assert quotient.group.order == 2
    assert len(quotient.points) == 2
    assert point_proj[(0, 0)] == point_proj[(1, 0)]


# -- translation groupoids ----------------------------------------------------


def test_translation_one_point_isotropy():
    groupoid = translation_groupoid(
        GroupAction.from_function(FiniteGroup.cyclic(2), ["p"], lambda g, x: x)
    )
    assert len(groupoid.objects) == 1
    assert len(groupoid.morphisms) == 2
    assert groupoid.verify_axioms().passed


def test_translation_swap():
    swap = GroupAction.from_function(
        FiniteGroup.cyclic(2), ["a", "b"], lambda g, x: x if g == 0 else ("b" if x == "a" else "a")
    )
    groupoid = translation_groupoid(swap)
    assert len(groupoid.objects) == 2
    assert len(groupoid.morphisms) == 4
    assert len(orbit_space(groupoid)) == 1


def test_translation_cyclic_rotation_is_free_and_transitive():
    groupoid = translation_groupoid(GroupAction.rotation_mod(5, 5))
    assert len(groupoid.objects) == 5
    assert len(groupoid.morphisms) == 25
    assert len(orbit_space(groupoid)) == 1
    loops = [m for m in groupoid.morphisms if groupoid.source[m] == groupoid.target[m]]
    assert len(loops) == 5  # identities only: the action is free


def test_negation_translation_counts():
    groupoid = negation_groupoid()
    assert len(groupoid.objects) == 6
    assert len(groupoid.morphisms) == 12
    assert groupoid.verify_axioms().passed


# -- orbit spaces and configurations ------------------------------------------


def test_orbit_space_unit_groupoid():
    assert len(orbit_space(unit_groupoid(["a", "b", "c"]))) == 3


def test_orbit_space_negation():
    blocks = {tuple(sorted(b)) for b in orbit_space(negation_groupoid()).blocks}
    assert blocks == {(0,), (3,), (1, 5), (2, 4)}


def test_configuration_of_unit_groupoid():
    pb2 = configuration_groupoid(unit_groupoid([1, 2]), 2)
    assert sorted(pb2.objects) == [(1, 2), (2, 1)]
    assert len(pb2.morphisms) == 2  # identities only
    assert pb2.warning is None


def test_configuration_with_single_orbit_is_empty():
    swap = GroupAction.from_function(
        FiniteGroup.cyclic(2), ["a", "b"], lambda g, x: x if g == 0 else ("b" if x == "a" else "a")
    )
    pb2 = configuration_groupoid(translation_groupoid(swap), 2)
    assert pb2.objects == ()
    assert pb2.morphisms == ()
    assert "orbits" in pb2.warning


def test_configuration_negation_counts():
    groupoid = negation_groupoid()
    pb2 = configuration_groupoid(groupoid, 2)
    orbits = orbit_space(groupoid)
    expected_objects = [
        (x, y)
        for x in groupoid.objects
        for y in groupoid.objects
        if orbits.of(x) != orbits.of(y)
    ]
    assert len(pb2.objects) == len(expected_objects) == 26
    assert len(pb2.morphisms) == 104
    assert len(orbit_space(pb2)) == 12  # ordered pairs of distinct orbits


def test_configuration_three_coordinates():
    pb3 = configuration_groupoid(negation_groupoid(), 3)
    assert len(pb3.objects) == 72
    assert len(pb3.morphisms) == 576
    assert len(orbit_space(pb3)) == 24  # 4*3*2 ordered orbit triples


# -- the forgetting homomorphism ----------------------------------------------


def test_forget_map_is_a_functor():
    hom = forget_map(negation_groupoid(), 2)
    assert hom.verify().passed
    for m in hom.src.morphisms:
        assert hom.morphism_map[m] == m[:-1]


def test_forget_fiber_counts_match_puncture_formula():
    groupoid = negation_groupoid()
    hom = forget_map(groupoid, 3)
    orbits = orbit_space(groupoid)
    counts = Counter(hom.object_map[obj] for obj in hom.src.objects)
    for base, count in counts.items():
        removed = sum(len(orbits.blocks[orbits.of(x)]) for x in base)
        assert count == 6 - removed


def test_forget_unit_groupoid_has_unique_source_lifts():
    hom = forget_map(unit_groupoid(["a", "b", "c"]), 2)
    lifts = Counter((hom.morphism_map[m], hom.src.source[m]) for m in hom.src.morphisms)
    assert set(lifts.values()) == {1}
    object_fibers = Counter(hom.object_map[obj] for obj in hom.src.objects)
    assert set(object_fibers.values()) == {2}  # 3 - |orbit| = 2 per base point


# -- covering homomorphisms ----------------------------------------------------


def test_subgroup_inclusions_are_coverings():
    models = [
        (GroupAction.negation_mod(6), frozenset({0})),
        (GroupAction.negation_mod(6), frozenset({0, 1})),
        (GroupAction.rotation_mod(12, 4), frozenset({0, 2})),
        (GroupAction.regular(FiniteGroup.dihedral(4)), frozenset({(0, 0), (2, 0)})),
    ]
    for action, subgroup in models:
        report = is_covering_hom(subgroup_covering_hom(action, subgroup))
        assert report.passed, report.first_failure()


def test_identity_is_a_covering():
    assert is_covering_hom(identity_hom(negation_groupoid())).passed


def test_forget_map_is_not_a_covering():
    report = is_covering_hom(forget_map(negation_groupoid(), 2))
    assert not report.passed
    name, detail = report.first_failure()
    assert name == "unique_source_lift"
    assert "104" in detail and "52" in detail


def _pair_groupoid(labels):
    objects = list(labels)
    morphisms = [("m", a, b) for a in objects for b in objects]
    return FiniteGroupoid(
        objects,
        morphisms,
        {m: m[1] for m in morphisms},
        {m: m[2] for m in morphisms},
        {
            (("m", b2, c), ("m", a, b)): ("m", a, c)
            for a in objects
            for b in objects
            for b2 in objects
            for c in objects
            if b == b2
        },
        {x: ("m", x, x) for x in objects},
        {m: ("m", m[2], m[1]) for m in morphisms},
    )


def test_constant_fiber_condition_is_independent():
    # Homomorphism + surjectivity + unique lifts can all hold while the
    # object fibers vary along one base orbit; the fourth check catches it.
    source = unit_groupoid(["a", "b", "c"])
    target = _pair_groupoid(["y1", "y2"])
    assert target.verify_axioms().passed
    f0 = {"a": "y1", "b": "y1", "c": "y2"}
    hom = GroupoidHom(
        source,
        target,
        f0,
        {m: ("m", f0[m[0]], f0[m[0]]) for m in source.morphisms},
        name="uneven",
    )
    report = is_covering_hom(hom)
    assert not report.passed
    failed = [name for name, ok, _ in report.checks if not ok]
    assert failed == ["fiber_constant_on_orbits"]


# -- equivalences ---------------------------------------------------------------


def test_skeleton_inclusion_is_an_equivalence():
    hom = skeleton_inclusion(negation_groupoid())
    assert hom.src.objects == (0, 1, 2, 3)
    assert len(hom.src.morphisms) == 6
    assert is_equivalence(hom).passed


def test_identity_is_an_equivalence():
    assert is_equivalence(identity_hom(negation_groupoid())).passed


def test_non_full_inclusion_fails_condition_two():
    ambient = negation_groupoid()
    skeleton_objects = [0, 1, 2, 3]
    thin = unit_groupoid(skeleton_objects)
    hom = GroupoidHom(
        thin,
        ambient,
        {x: x for x in skeleton_objects},
        {m: ambient.identity[m[0]] for m in thin.morphisms},
        name="thin",
    )
    assert hom.verify().passed
    report = is_equivalence(hom)
    assert not report.passed
    assert dict((n, ok) for n, ok, _ in report.checks)["essentially_surjective"]
    name, _ = report.first_failure()
    assert name == "fully_faithful_bijection"


def test_equivalence_commutes_with_forgetting():
    groupoid = negation_groupoid()
    skeleton = skeleton_inclusion(groupoid)
    induced2 = induced_configuration_hom(skeleton, 2)
    induced1 = induced_configuration_hom(skeleton, 1)
    forget_small = forget_map(skeleton.src, 2)
    forget_big = forget_map(groupoid, 2)
    assert induced2.verify().passed
    for obj in induced2.src.objects:
        via_big = forget_big.object_map[induced2.object_map[obj]]
        via_small = induced1.object_map[forget_small.object_map[obj]]
        assert via_big == via_small


# -- Morita triples --------------------------------------------------------------


def test_morita_klein_factors():
    klein = FiniteGroup.klein()
    action = GroupAction.regular(klein)
    triple = morita_triple(
        action, frozenset({(0, 0), (1, 0)}), frozenset({(0, 0), (0, 1)})
    )
    assert triple.passed
    # N1 n N2 is trivial, so the middle model is G(S, Gamma) itself
    assert len(triple.middle.objects) == 4
    assert len(triple.middle.morphisms) == 16


def test_morita_equal_subgroups_gives_isomorphism():
    action = GroupAction.regular(FiniteGroup.cyclic(4))
    half = frozenset({0, 2})
    triple = morita_triple(action, half, half)
    assert triple.passed
    assert len(triple.middle.objects) == len(triple.to_first.dst.objects) == 2
    assert set(triple.to_first.object_map.values()) == set(triple.to_first.dst.objects)


def test_morita_cyclic_four():
    action = GroupAction.regular(FiniteGroup.cyclic(4))
    triple = morita_triple(action, frozenset({0, 2}), frozenset({0, 1, 2, 3}))
    assert triple.passed
    assert triple.to_json()["pass"] is True


def test_morita_dihedral_center_and_rotations():
    d4 = FiniteGroup.dihedral(4)
    action = GroupAction.regular(d4)
    center = frozenset({(0, 0), (2, 0)})
    rotations = frozenset({(k, 0) for k in range(4)})
    triple = morita_triple(action, center, rotations)
    assert triple.passed


def test_morita_rejects_non_normal_inputs():
    d4 = FiniteGroup.dihedral(4)
    action = GroupAction.regular(d4)
    reflection = frozenset({(0, 0), (0, 1)})  # not normal in D4
    with pytest.raises(InvalidModelError):
        morita_triple(action, reflection, frozenset(d4.elements))


# -- JSON models ------------------------------------------------------------------


def test_group_and_action_from_json():
    group = group_from_json({"kind": "product", "factors": [{"kind": "cyclic", "n": 2}, {"kind": "cyclic", "n": 2}]})
    assert group.order == 4
    action = group_action_from_json({"kind": "regular"}, group)
    assert len(action.points) == 4
    negation = group_action_from_json({"kind": "negation", "n": 6}, group_from_json({"kind": "cyclic", "n": 2}))
    assert len(negation.orbits()) == 4
    with pytest.raises(InvalidModelError):
        group_from_json({"kind": "free"})


def _cyclic3_spec(corrupt=False):
    compose = []
    for a in range(3):
        for b in range(3):
            compose.append([f"g{a}", f"g{b}", f"g{(a + b) % 3}"])
    if corrupt:
        compose = [row for row in compose if row[:2] != ["g2", "g2"]]
        compose.append(["g2", "g2", "g2"])  # should be g1
    return {
        "objects": ["x"],
        "morphisms": [{"id": f"g{k}", "src": "x", "tgt": "x"} for k in range(3)],
        "identities": {"x": "g0"},
        "compose": compose,
        "inverses": {"g0": "g0", "g1": "g2", "g2": "g1"},
    }


def test_groupoid_from_json_roundtrip():
    groupoid = groupoid_from_json(_cyclic3_spec())
    report = groupoid.verify_axioms()
    assert report.passed


def test_corrupted_composition_table_names_the_triple():
    groupoid = groupoid_from_json(_cyclic3_spec(corrupt=True))
    report = groupoid.verify_axioms()
    assert not report.passed
    failures = {name: detail for name, ok, detail in report.checks if not ok}
    assert any("triple" in detail for detail in failures.values())


def test_check_result_json():
    report = negation_groupoid().verify_axioms()
    data = report.to_json()
    assert data["pass"] is True
    assert {row["name"] for row in data["checks"]} >= {"associativity", "inverse_laws"}
