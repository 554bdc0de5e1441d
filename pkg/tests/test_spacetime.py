import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relcommit.spacetime import (
    C_KM_PER_S, SpacetimeEvent, alternating_layout, broadcast_reduction, build_graph, light_time,
    load_scenario, max_commitment_time, reaches,
)


def E(label, x, t):
    return SpacetimeEvent(label, x, t)


def test_reaches_examples():
    assert reaches(E(0, 0, 0), E(1, 1, 1))
    assert not reaches(E(0, 0, 0), E(1, 2, 1))
    assert not reaches(E(0, 0, 0), E(1, 0, -1))


def test_alternating_layout_graph():
    for rounds in range(1, 9):
        g = build_graph(alternating_layout(rounds))
        assert set(g.edges) == {(j, k) for j in range(1, rounds + 1) for k in range(1, rounds + 1) if j + 2 <= k}
        assert g.is_acyclic()


def test_broadcast_reduction_four_rounds():
    s = broadcast_reduction(build_graph(alternating_layout(4)))
    assert s == {1: frozenset(), 2: frozenset(), 3: frozenset({1}), 4: frozenset({1, 2})}


def test_trivial_graphs():
    assert build_graph([E(1, 0, 0)]).edges == frozenset()
    assert build_graph([E(1, 0, 0), E(2, 1, 0), E(3, 2, 0)]).edges == frozenset()
    assert all(not v for v in broadcast_reduction(build_graph([E(1, 0, 0), E(2, 5, 0)])).values())


def test_total_order():
    events = [E(k, 0, k) for k in range(1, 6)]
    s = broadcast_reduction(build_graph(events))
    assert s == {j: frozenset(range(1, j)) for j in range(1, 6)}


def test_coincident_events_in_label_order_only():
    g = build_graph([E(2, 0, 0), E(1, 0, 0)])
    assert set(g.edges) == {(1, 2)}
    assert g.is_acyclic()


def test_window_figures():
    assert max_commitment_time(12742, physical=True).milliseconds == pytest.approx(21.25, abs=0.01)
    chord = 2 * C_KM_PER_S * 0.0156
    assert max_commitment_time(chord, physical=True).milliseconds == pytest.approx(15.6, abs=1e-9)
    assert max_commitment_time(2).natural == 1
    assert light_time(131) == pytest.approx(437e-6, abs=1e-6)
    for bad in (0, -1):
        with pytest.raises(ValueError):
            max_commitment_time(bad)
        with pytest.raises(ValueError):
            max_commitment_time(bad, physical=True)


def test_physical_cone_tolerance():
    # exactly light-like in km/s with rounding noise
    d = 131.0
    t = d / C_KM_PER_S
    assert reaches(E(0, 0.0, 0.0), E(1, d, t * (1 - 1e-12)), c=C_KM_PER_S)
    assert not reaches(E(0, 0.0, 0.0), E(1, d, t * (1 - 1e-6)), c=C_KM_PER_S)


def test_load_scenario(tmp_path):
    path = tmp_path / "events.json"
    path.write_text(json.dumps([{"label": 1, "x": "0", "t": "0"}, {"label": 2, "x": "1", "t": "1", "party": "A"}]))
    events = load_scenario(str(path))
    assert events[1].x == Fraction(1)
    assert set(build_graph(events).edges) == {(1, 2)}


coords = st.fractions(min_value=-10, max_value=10, max_denominator=12)
events = st.lists(st.tuples(coords, coords), min_size=1, max_size=8)


@given(events)
def test_graph_matches_reaches_and_is_acyclic(pts):
    evs = [E(i + 1, x, t) for i, (x, t) in enumerate(pts)]
    g = build_graph(evs)
    assert g.is_acyclic()
    for a in evs:
        for b in evs:
            if a.label == b.label:
                continue
            same_point = a.x == b.x and a.t == b.t
            expected = reaches(a, b) and (not same_point or a.label < b.label)
            assert ((a.label, b.label) in g.edges) == expected
            if (a.label, b.label) in g.edges:
                assert b.t >= a.t


@given(coords, coords, coords, coords, coords, coords)
def test_reaches_transitive(x1, t1, x2, t2, x3, t3):
    a, b, c = E(1, x1, t1), E(2, x2, t2), E(3, x3, t3)
    if reaches(a, b) and reaches(b, c):
        assert reaches(a, c)


@given(coords, coords, coords, coords, st.fractions(min_value=0, max_value=5))
def test_edge_monotone_in_later_time(x1, t1, x2, t2, dt):
    if reaches(E(1, x1, t1), E(2, x2, t2)):
        assert reaches(E(1, x1, t1), E(2, x2, t2 + dt))
