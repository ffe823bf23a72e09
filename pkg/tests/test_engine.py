import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lombardi import (
    Graph, Layout, SolverConfig, TangentFan, build_tangent_fan, chord_frames,
    clockwise_neighbor_order, degree_ordering, farthest_neighbor, local_objective,
    minimize_vertex, rebuild_arcs, rotate_point, run,
)
from lombardi.engine import _scan, _targets
from lombardi.errors import DegenerateGeometryError, GraphError
from lombardi.geometry import arc_from_chord, arc_residuals, bearing, gap_deviation, normalize_angle
from lombardi.metrics import angular_resolution_deviation

from conftest import complete, cycle, path, petersen, random_connected, star, unit_square
from oracles import circle_energy, circle_through_with_tangent

TAU = 2 * math.pi


def fan_layout(center, neighbors):
    """Star graph with vertex 0 at ``center`` and vertices 1..d at ``neighbors``."""
    g = star(len(neighbors))
    return g, Layout([center] + list(neighbors))


def fixed_fan(angles):
    return TangentFan(0, tuple(range(1, len(angles) + 1)), angles[0], tuple(angles))


# --- ordering -------------------------------------------------------------------

def test_degree_ordering_examples():
    assert degree_ordering(star(4)) == [0, 1, 2, 3, 4]
    assert degree_ordering(cycle(5)) == [0, 1, 2, 3, 4]
    assert degree_ordering(path(3)) == [1, 0, 2]


def test_farthest_neighbor_examples():
    g, lay = fan_layout((0, 0), [(1, 0), (0, 3)])
    assert farthest_neighbor(lay, 0, g) == 2
    g, lay = fan_layout((0, 0), [(0, 2), (2, 0)])
    assert farthest_neighbor(lay, 0, g) == 1
    assert farthest_neighbor(Layout([(0, 0), (5, 5)]), 0, Graph.from_edges(2, [(0, 1)])) == 1
    with pytest.raises(GraphError):
        farthest_neighbor(Layout([(0, 0)]), 0, Graph.from_edges(1, []))


def test_clockwise_order_cross():
    g, lay = fan_layout((0, 0), [(1, 0), (0, 1), (-1, 0), (0, -1)])
    order = clockwise_neighbor_order(lay, 0, 1, g)
    assert [bearing((0, 0), lay[u]) for u in order] == pytest.approx(
        [0, 3 * math.pi / 2, math.pi, math.pi / 2])


def test_clockwise_order_two_neighbors():
    g, lay = fan_layout((0, 0), [(1, 2), (-3, 1)])
    assert clockwise_neighbor_order(lay, 0, 2, g) == [2, 1]


def brute_clockwise(bearings, start):
    # the unique ordering from ``start`` whose clockwise offsets strictly increase
    others = [i for i in range(len(bearings)) if i != start]
    for perm in itertools.permutations(others):
        seq = [start, *perm]
        offs = [(bearings[start] - bearings[i]) % TAU for i in seq]
        if all(a < b for a, b in zip(offs, offs[1:])):
            return seq
    raise AssertionError("no clockwise ordering")


def test_clockwise_order_wraparound():
    bearings = [0.1, 6.0, 3.0]
    g, lay = fan_layout((0, 0), [(math.cos(b), math.sin(b)) for b in bearings])
    got = [u - 1 for u in clockwise_neighbor_order(lay, 0, 1, g)]
    assert got == brute_clockwise(bearings, 0) == [0, 1, 2]


@settings(max_examples=100)
@given(st.lists(st.floats(0, TAU - 1e-6), min_size=2, max_size=7, unique=True),
       st.data())
def test_clockwise_order_matches_brute_force(bearings, data):
    # distinct bearings only; equal ones fall to the id tie-break
    if min(abs(a - b) for a, b in itertools.combinations(bearings, 2)) < 1e-6:
        return
    start = data.draw(st.integers(0, len(bearings) - 1))
    radii = data.draw(st.lists(st.floats(0.5, 2), min_size=len(bearings), max_size=len(bearings)))
    g, lay = fan_layout((0, 0), [(r * math.cos(b), r * math.sin(b)) for r, b in zip(radii, bearings)])
    got = [u - 1 for u in clockwise_neighbor_order(lay, 0, start + 1, g)]
    assert got == brute_clockwise([bearing((0, 0), lay[i + 1]) for i in range(len(bearings))], start)


def test_clockwise_order_rejects_coincident_neighbor():
    g, lay = fan_layout((0, 0), [(1, 0), (0, 0)])
    with pytest.raises(DegenerateGeometryError):
        clockwise_neighbor_order(lay, 0, 1, g)


# --- tangent fans ---------------------------------------------------------------

def test_fan_already_resolved_cross():
    g, lay = fan_layout((0, 0), [(2, 0), (0, 1), (-1, 0), (0, -1)])
    fan = build_tangent_fan(lay, 0, g)
    assert fan.neighbors == (1, 4, 3, 2)
    assert fan.angles == pytest.approx((0, 3 * math.pi / 2, math.pi, math.pi / 2))
    for nb, phi in zip(fan.neighbors, fan.angles):
        assert phi == pytest.approx(bearing((0, 0), lay[nb]))


def test_fan_degree_two():
    g, lay = fan_layout((0, 0), [(3, 0), (0, 1)])
    fan = build_tangent_fan(lay, 0, g)
    assert fan.angles == pytest.approx((0, math.pi))


def test_fan_degree_three_progression():
    base = math.pi / 6
    g, lay = fan_layout((0, 0), [(2 * math.cos(base), 2 * math.sin(base)), (0, -1), (-1, 0.2)])
    fan = build_tangent_fan(lay, 0, g)
    expect = [normalize_angle(base - k * TAU / 3) for k in range(3)]
    assert fan.base_angle == pytest.approx(base)
    assert fan.angles == pytest.approx(expect, abs=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_fan_gaps_exact(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 9))
    g, lay = fan_layout(tuple(rng.normal(size=2)), [tuple(p) for p in rng.normal(size=(d, 2))])
    fan = build_tangent_fan(lay, 0, g)
    assert sorted(fan.neighbors) == list(range(1, d + 1))
    assert gap_deviation(fan.angles) < 1e-12
    for k in range(d):
        step = (fan.angles[k] - fan.angles[(k + 1) % d]) % TAU
        assert step == pytest.approx(TAU / d, abs=1e-12)


def test_fan_requires_degree_two():
    g = path(2)
    with pytest.raises(GraphError):
        build_tangent_fan(Layout([(0, 0), (1, 0)]), 0, g)


# --- chord frames and the objective -----------------------------------------------

def test_chord_frames_examples():
    _, lay = fan_layout((0, 0), [(0, 2), (3, 0), (1, 1)])
    fan = fixed_fan([0.0, 0.0, 0.0])
    f = chord_frames((0, 0), fan, lay)
    assert (f[0].chord_r, f[0].D, f[0].theta) == pytest.approx((2, 2, math.pi / 2))
    assert (f[1].chord_r, f[1].D, f[1].theta) == pytest.approx((3, 0, 0))
    assert (f[2].chord_r, f[2].D, f[2].theta) == pytest.approx((math.sqrt(2), 1, math.pi / 4))
    assert math.sin(f[2].theta) == pytest.approx(f[2].D / f[2].chord_r, abs=1e-12)
    with pytest.raises(DegenerateGeometryError):
        chord_frames((3, 0), fan, lay, min_chord=1e-9)


def test_local_objective_examples():
    _, lay = fan_layout((0, 0), [(1, 0)])
    assert local_objective((0, 0), fixed_fan([0.0]), lay) == pytest.approx(1.0)
    _, lay = fan_layout((0, 0), [(0, 2)])
    assert local_objective((0, 0), fixed_fan([0.0]), lay) == pytest.approx(math.pi)
    # arcsin form for the same edge: D * asin(D/r) / (D/r) with D = r = 2
    assert local_objective((0, 0), fixed_fan([0.0]), lay) == pytest.approx(2 * math.asin(1.0))
    _, lay = fan_layout((0, 0), [(1, 0), (-1, 0)])
    assert local_objective((0, 0), fixed_fan([0.0, math.pi]), lay) == pytest.approx(2.0)


def test_local_objective_matches_frames_and_circle_oracle():
    rng = np.random.default_rng(3)
    for _ in range(200):
        d = int(rng.integers(2, 7))
        nbs = [tuple(p) for p in rng.uniform(-1, 1, (d, 2))]
        _, lay = fan_layout((0, 0), nbs)
        fan = fixed_fan(list(rng.uniform(0, TAU, d)))
        cand = tuple(rng.uniform(-1, 1, 2))
        frames = chord_frames(cand, fan, lay)
        if max(fr.theta for fr in frames) > math.pi - 1e-3:
            continue
        e = local_objective(cand, fan, lay)
        assert e == pytest.approx(sum(arc_from_chord(fr.chord_r, fr.theta) for fr in frames),
                                  rel=1e-12)
        assert e == pytest.approx(float(circle_energy(*cand, nbs, fan.angles)), rel=1e-9)


def test_local_objective_barrier_is_finite_and_steep():
    _, lay = fan_layout((0, 0), [(-1, 0)])
    fan = fixed_fan([0.0])
    e = local_objective((0, 0), fan, lay)
    assert math.isfinite(e)
    assert e > local_objective((0, -1e-3), fan, lay) > 1e3


def test_objective_frame_invariance():
    # rotating every position clockwise by phi and every tangent by -phi changes nothing
    rng = np.random.default_rng(5)
    for _ in range(50):
        d = int(rng.integers(2, 6))
        nbs = [tuple(p) for p in rng.uniform(-1, 1, (d, 2))]
        angles = list(rng.uniform(0, TAU, d))
        cand = tuple(rng.uniform(-1, 1, 2))
        phi = float(rng.uniform(0, TAU))
        _, lay = fan_layout((0, 0), nbs)
        _, rlay = fan_layout((0, 0), [rotate_point(p, phi) for p in nbs])
        e = local_objective(cand, fixed_fan(angles), lay)
        er = local_objective(rotate_point(cand, phi), fixed_fan([a - phi for a in angles]), rlay)
        assert er == pytest.approx(e, rel=1e-9)


def test_scan_matches_scalar_objective():
    _, lay = fan_layout((0, 0), [(1, 0.3), (-0.4, 0.8), (0.1, -1)])
    fan = fixed_fan([0.2, 2.0, 4.5])
    X, Y, E = _scan(_targets(fan, lay), (-2, -2), (2, 2), 9, 1e-9)
    for x, y, e in zip(X.flat, Y.flat, E.flat):
        assert e == pytest.approx(local_objective((x, y), fan, lay), rel=1e-12)


# --- the per-vertex minimizer -----------------------------------------------------

def test_minimize_symmetric_cross():
    g, lay = fan_layout((0.05, -0.03), [(1, 0), (-1, 0), (0, 1), (0, -1)])
    fan = TangentFan(0, (1, 4, 2, 3), 0.0, (0.0, 3 * math.pi / 2, math.pi, math.pi / 2))
    p = minimize_vertex(0, fan, lay)
    assert math.hypot(*p) < 1e-6
    assert local_objective(p, fan, lay) == pytest.approx(4.0, abs=1e-12)


def test_minimize_collinear_pair():
    g, lay = fan_layout((0.2, 0.5), [(1, 0), (-1, 0)])
    fan = fixed_fan([0.0, math.pi])
    p = minimize_vertex(0, fan, lay)
    assert abs(p.y) < 1e-4
    assert local_objective(p, fan, lay) == pytest.approx(2.0, abs=1e-6)


@pytest.mark.parametrize("seed", range(15))
def test_minimize_never_increases_energy(seed):
    rng = np.random.default_rng(100 + seed)
    d = int(rng.integers(2, 7))
    g, lay = fan_layout(tuple(rng.uniform(-0.5, 0.5, 2)), [tuple(p) for p in rng.uniform(-1, 1, (d, 2))])
    fan = build_tangent_fan(lay, 0, g)
    e0 = local_objective(lay[0], fan, lay)
    p = minimize_vertex(0, fan, lay)
    assert local_objective(p, fan, lay) <= e0 + 1e-12
    # deterministic
    assert minimize_vertex(0, fan, lay) == p


def test_minimize_single_start_when_restarts_disabled():
    g, lay = fan_layout((0.3, 0.1), [(1, 0), (-1, 0.5), (0, -1)])
    fan = build_tangent_fan(lay, 0, g)
    p = minimize_vertex(0, fan, lay, SolverConfig(restarts=0))
    assert local_objective(p, fan, lay) <= local_objective(lay[0], fan, lay)


def test_minimize_all_degenerate():
    g, lay = fan_layout((0, 0), [(0, 0), (0, 0)])
    fan = fixed_fan([0.0, math.pi])
    with pytest.raises(DegenerateGeometryError):
        minimize_vertex(0, fan, lay)


# --- arc rebuilding ---------------------------------------------------------------

def test_rebuild_resolved_cross_is_straight():
    g, lay = fan_layout((0, 0), [(1, 0), (0, 1), (-1, 0), (0, -1)])
    arcs = rebuild_arcs(0, build_tangent_fan(lay, 0, g), lay)
    assert [a.kind for a in arcs] == ["straight"] * 4
    assert all(a.owner == 0 for a in arcs)


def test_rebuild_degree_two():
    g, lay = fan_layout((0, 0), [(1, 0), (0, 1)])
    fan = build_tangent_fan(lay, 0, g)
    assert fan.neighbors == (1, 2) and fan.angles == pytest.approx((0, math.pi))
    straight, bent = rebuild_arcs(0, fan, lay)
    assert straight.kind == "straight" and straight.v == 1
    c, r = circle_through_with_tangent((0, 0), (0, 1), math.pi)
    assert bent.kind == "circular" and bent.owner_tangent == pytest.approx(math.pi)
    assert tuple(bent.center) == pytest.approx(tuple(c), abs=1e-12)
    assert tuple(c) == pytest.approx((0, 0.5), abs=1e-12)
    assert bent.radius == pytest.approx(r) and r == pytest.approx(0.5)
    assert bent.arc_length == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("seed", range(10))
def test_rebuild_first_edge_straight_and_owned(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 7))
    g, lay = fan_layout((0, 0), [tuple(p) for p in rng.normal(size=(d, 2))])
    fan = build_tangent_fan(lay, 0, g)
    arcs = rebuild_arcs(0, fan, lay)
    assert arcs[0].tangent_chord_angle == 0 and arcs[0].other == fan.neighbors[0]
    assert angular_resolution_deviation(0, arcs) < 1e-12
    for a in arcs:
        if not a.fallback:
            assert arc_residuals(a)["tangent"] < 1e-9


def test_rebuild_falls_back_to_straight_behind_tangent():
    _, lay = fan_layout((0, 0), [(-1, 0)])
    arcs = rebuild_arcs(0, fixed_fan([0.0]), lay)
    assert arcs[0].kind == "straight" and arcs[0].fallback


# --- the outer loop ---------------------------------------------------------------

def test_run_c4_unit_square():
    lay, arcs, rep = run(cycle(4), unit_square())
    assert rep.converged
    assert rep.energy[-1] <= rep.initial_energy
    assert len(rep.energy) == len(rep.max_displacement) == len(rep.diagonal) == rep.passes
    for v, fan in rep.fans.items():
        assert (fan.angles[0] - fan.angles[1]) % TAU == pytest.approx(math.pi, abs=1e-12)


def test_run_k2_never_moves():
    g = Graph.from_edges(2, [(0, 1)])
    init = Layout([(0, 0), (1, 0)])
    lay, arcs, rep = run(g, init)
    assert lay.positions == init.positions
    assert rep.passes == 1 and rep.converged and rep.max_displacement == [0.0]
    assert arcs[0].kind == "straight" and arcs[0].arc_length == 1.0


def test_run_huge_epsilon_one_pass():
    lay, arcs, rep = run(petersen(), _petersen_init(), SolverConfig(epsilon=10))
    assert rep.passes == 1 and rep.converged


def _petersen_init():
    from lombardi.layout_init import initial_layout
    return initial_layout(petersen())[0]


def test_run_leaves_stay_put():
    g = star(5)
    init = Layout([(0.3, 0.2)] + [(math.cos(k), math.sin(k)) for k in range(5)])
    lay, arcs, rep = run(g, init)
    assert lay.positions[1:] == init.positions[1:]
    assert rep.rebuild_deviation[0] < 1e-12


def test_run_deterministic():
    g = random_connected(4)
    from lombardi.layout_init import initial_layout
    init = initial_layout(g)[0]
    a = run(g, init, SolverConfig(max_passes=10))
    b = run(g, init, SolverConfig(max_passes=10))
    assert a[0].positions == b[0].positions
    assert a[1] == b[1]
    assert a[2].to_dict() == b[2].to_dict()


def test_run_perturbs_coincident_neighbors():
    g = complete(4)
    init = Layout([(0, 0), (1, 0), (0.3, 0.4), (0.3, 0.4)])
    lay, arcs, rep = run(g, init, SolverConfig(max_passes=5))
    assert rep.perturbations >= 1
    assert all(p.is_finite() for p in lay.positions)


def test_run_freezes_hopeless_vertex():
    g = path(3)
    init = Layout([(0, 0), (0, 0), (0, 0)])
    lay, arcs, rep = run(g, init, SolverConfig(max_passes=3, min_chord=1.0))
    assert rep.frozen == [1]
    assert rep.perturbations == 2


def test_run_pinned_vertices_keep_position():
    g = complete(4)
    init = Layout([(0, 0), (1, 0), (0.5, 0.9), (0.5, 0.3)])
    lay, arcs, rep = run(g, init, pinned=[0, 1, 2])
    assert lay.positions[:3] == init.positions[:3]
    assert not rep.collapsed


def test_run_rejects_mismatched_layout():
    with pytest.raises(GraphError):
        run(cycle(4), Layout([(0, 0)]))


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(epsilon=0)
    with pytest.raises(ValueError):
        SolverConfig(scan_points=1)
