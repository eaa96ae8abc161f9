import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icequiver import (
    Arrow,
    IceQuiver,
    IQPError,
    Quiver,
    check_mutable,
    ice_quiver_isomorphic,
    to_dot,
    validate_ice_quiver,
)


def test_quiver_sorts_and_indexes():
    q = Quiver(["2", "1"], [Arrow("b", "2", "1"), Arrow("a", "1", "2")])
    assert q.vertices == ("1", "2")
    assert [a.id for a in q.arrows] == ["a", "b"]
    assert q.arrow("a").target == "2"
    assert [a.id for a in q.arrows_from("1")] == ["a"]
    assert [a.id for a in q.arrows_into("1")] == ["b"]
    assert q.has_vertex("2") and not q.has_vertex("3")
    assert q.has_arrow("b") and not q.has_arrow("c")


def test_quiver_rejects_bad_input():
    with pytest.raises(IQPError):
        Quiver(["1"], [Arrow("a", "1", "9")])
    with pytest.raises(IQPError):
        Quiver(["1"], [Arrow("a", "1", "1"), Arrow("a", "1", "1")])
    with pytest.raises(IQPError):
        Quiver(["1", "1"], [])


def test_loops_and_two_cycles():
    q = Quiver(
        ["1", "2"],
        [Arrow("l", "1", "1"), Arrow("x", "1", "2"), Arrow("y", "2", "1")],
    )
    assert [a.id for a in q.loops_at("1")] == ["l"]
    assert list(q.loops_at("2")) == []
    pairs = q.two_cycles()
    assert {frozenset(pair) for pair in pairs} == {frozenset(("x", "y"))}


def test_validate_flags_frozen_arrow_with_unfrozen_endpoint():
    q = Quiver(["1", "2"], [Arrow("a", "1", "2")])
    report = validate_ice_quiver(IceQuiver(q, ["1"], ["a"]))
    assert report.violations
    assert "a" in report.violations[0]
    clean = validate_ice_quiver(IceQuiver(q, ["1", "2"], ["a"]))
    assert clean.violations == []


def test_validate_reports_loops_and_two_cycles_per_vertex():
    q = Quiver(
        ["1", "2"],
        [Arrow("l", "1", "1"), Arrow("x", "1", "2"), Arrow("y", "2", "1")],
    )
    report = validate_ice_quiver(IceQuiver(q, [], []))
    assert list(report.loops) == ["1"]
    assert set(report.two_cycles) == {"1", "2"}


def test_check_mutable_unfrozen(triangle):
    status = check_mutable(triangle.ice_quiver, "2")
    assert status.kind == "UnfrozenMutable"
    assert status.mutable


def test_check_mutable_frozen_sink_and_source(triangle, five):
    assert check_mutable(triangle.ice_quiver, "1").kind == "FrozenSink"
    assert check_mutable(triangle.ice_quiver, "3").kind == "FrozenSource"
    assert check_mutable(five.ice_quiver, "3").kind == "FrozenSource"
    assert check_mutable(five.ice_quiver, "4").kind == "FrozenSink"


def test_check_mutable_interior_frozen_vertex_blocked():
    q = Quiver(
        ["u", "v", "w"],
        [Arrow("p", "u", "v"), Arrow("q", "v", "w")],
    )
    ice = IceQuiver(q, ["u", "v", "w"], ["p", "q"])
    status = check_mutable(ice, "v")
    assert status.kind == "NotMutable"
    assert not status.mutable
    assert status.reason


def test_check_mutable_loop_blocks(loop_quiver):
    status = check_mutable(loop_quiver.ice_quiver, "1")
    assert status.kind == "NotMutable"
    assert "loop" in status.reason


def test_check_mutable_two_cycle_blocks():
    q = Quiver(["1", "2"], [Arrow("x", "1", "2"), Arrow("y", "2", "1")])
    status = check_mutable(IceQuiver(q, [], []), "1")
    assert status.kind == "NotMutable"


def test_check_mutable_unknown_vertex(triangle):
    with pytest.raises(IQPError):
        check_mutable(triangle.ice_quiver, "9")


def test_isomorphic_to_relabelled_self(triangle):
    ice = triangle.ice_quiver
    vmap = {"1": "x", "2": "y", "3": "z"}
    amap = {"a": "p", "b": "q", "c": "r"}
    q = Quiver(
        list(vmap.values()),
        [Arrow(amap[a.id], vmap[a.source], vmap[a.target]) for a in ice.quiver.arrows],
    )
    other = IceQuiver(q, [vmap[v] for v in ice.frozen_vertices], [amap[a] for a in ice.frozen_arrows])
    iso = ice_quiver_isomorphic(ice, other)
    assert iso is not None
    assert iso.vertex_map == vmap
    assert iso.arrow_map == amap


def test_isomorphism_respects_frozen_status(triangle):
    ice = triangle.ice_quiver
    thawed = IceQuiver(ice.quiver, ice.frozen_vertices, [])
    assert ice_quiver_isomorphic(ice, thawed) is None


def test_non_isomorphic_pairs(triangle, five):
    assert ice_quiver_isomorphic(triangle.ice_quiver, five.ice_quiver) is None
    q = Quiver(["1", "2", "3"], [Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("c", "1", "3")])
    rewired = IceQuiver(q, ["1", "3"], ["c"])
    assert ice_quiver_isomorphic(triangle.ice_quiver, rewired) is None


@st.composite
def small_ice_quivers(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    vertices = [str(i + 1) for i in range(n)]
    arrow_count = draw(st.integers(min_value=0, max_value=5))
    arrows = []
    for i in range(arrow_count):
        s = draw(st.sampled_from(vertices))
        t = draw(st.sampled_from(vertices))
        arrows.append(Arrow(f"a{i}", s, t))
    q = Quiver(vertices, arrows)
    frozen_vertices = [v for v in vertices if draw(st.booleans())]
    frozen_arrows = [
        a.id
        for a in arrows
        if a.source in frozen_vertices and a.target in frozen_vertices and draw(st.booleans())
    ]
    return IceQuiver(q, frozen_vertices, frozen_arrows)


@given(small_ice_quivers())
@settings(max_examples=60, deadline=None)
def test_isomorphism_is_reflexive_and_survives_relabelling(ice):
    assert ice_quiver_isomorphic(ice, ice) is not None
    vmap = {v: f"v{ord(v[0]) - ord('0'):02d}" for v in ice.quiver.vertices}
    amap = {a.id: f"z{a.id}" for a in ice.quiver.arrows}
    q = Quiver(
        [vmap[v] for v in ice.quiver.vertices],
        [Arrow(amap[a.id], vmap[a.source], vmap[a.target]) for a in ice.quiver.arrows],
    )
    other = IceQuiver(q, [vmap[v] for v in ice.frozen_vertices], [amap[a] for a in ice.frozen_arrows])
    iso = ice_quiver_isomorphic(ice, other)
    assert iso is not None
    for a in ice.quiver.arrows:
        image = iso.arrow_map[a.id]
        assert other.quiver.arrow(image).source == iso.vertex_map[a.source]
        assert other.quiver.arrow(image).target == iso.vertex_map[a.target]


def test_dot_output_is_deterministic(triangle):
    first = to_dot(triangle.ice_quiver)
    second = to_dot(triangle.ice_quiver)
    assert first == second
    assert '"2"' in first and "shape=box" in first
    assert first.strip().startswith("digraph")
