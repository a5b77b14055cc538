"""Ball generation, word metrics, geodesics, and vertex-map checks."""

import random

import pytest

from nilcay import cayley, pcgroup
from nilcay.cayley import (GenSet, GeodesicCapError, GeodesicPath,
                           check_vertex_map, count_geodesics,
                           enumerate_geodesics, export_distances, export_graph,
                           generate_ball, insert_torsion_edge, standard_genset,
                           torsion_label_bound)
from nilcay.pcgroup import builtin, from_id


@pytest.fixture(scope="module")
def z2_ball8():
    p = builtin("zn", n=2)
    return generate_ball(p, standard_genset(p), 8)


def lattice_count(r):
    """Oracle: enumerate lattice points with |x| + |y| <= r."""
    return sum(1 for x in range(-r, r + 1) for y in range(-r, r + 1)
               if abs(x) + abs(y) <= r)


def test_z2_ball_counts_match_lattice_enumeration():
    p = builtin("zn", n=2)
    S = standard_genset(p)
    for r in range(0, 21):
        ball = generate_ball(p, S, r)
        assert len(ball) == lattice_count(r) == 2 * r * r + 2 * r + 1


def test_ball_counts_monotone_in_radius():
    for fid in ("heisenberg", "klein_bottle", "zxz2"):
        p = from_id(fid)
        S = standard_genset(p)
        sizes = [len(generate_ball(p, S, r)) for r in range(0, 5)]
        assert sizes == sorted(sizes)


def test_radius_zero_and_klein_radius_one():
    p = builtin("heisenberg")
    assert len(generate_ball(p, standard_genset(p), 0)) == 1
    k = builtin("klein_bottle")
    assert len(generate_ball(k, standard_genset(k), 1)) == 5


def test_vertex_budget_enforced():
    p = builtin("zn", n=2)
    with pytest.raises(cayley.BallBudgetError):
        generate_ball(p, standard_genset(p), 10, max_vertices=20)


def test_genset_rules():
    p = builtin("zn", n=2)
    with pytest.raises(ValueError):
        GenSet(p, [(0, 0), (1, 0)])
    asym = GenSet(p, [(1, 0), (0, 1)])
    assert not asym.symmetric
    with pytest.raises(ValueError):
        asym.require_symmetric()


def test_distances(z2_ball8):
    assert z2_ball8.distance((0, 0), (3, 4)) == 7
    assert z2_ball8.distance((0, 0), (0, 0)) == 0
    assert z2_ball8.distance((2, 1), (2, 1)) == 0
    assert z2_ball8.distance((0, 0), (9, 9)) is None  # unknown, never wrong
    with pytest.raises(ValueError):
        z2_ball8.distance((9, 9), (0, 0))


def test_heisenberg_central_distance():
    p = builtin("heisenberg")
    ball = generate_ball(p, standard_genset(p), 4)
    assert ball.distance_from_identity((0, 0, 1)) == 4


def test_bfs_matches_brute_force_words():
    # exhaustive words up to length 4, multiplied out literally
    for fid in ("z2", "klein_bottle", "zxz2", "heisenberg"):
        p = from_id(fid)
        S = standard_genset(p)
        ball = generate_ball(p, S, 4)
        best = {p.identity: 0}
        words = [p.identity]
        for d in range(1, 5):
            words = sorted({p.multiply(u, s) for u in words for s in S.elements})
            for w in words:
                best.setdefault(w, d)
        assert set(best) == set(ball.vertices)
        for v, d in best.items():
            assert ball.distance_from_identity(v) == d


def test_geodesic_enumeration(z2_ball8):
    paths = enumerate_geodesics(z2_ball8, (0, 0), (1, 1))
    assert len(paths) == 2
    assert sorted(p.labels for p in paths) == [((0, 1), (1, 0)), ((1, 0), (0, 1))]
    assert len(enumerate_geodesics(z2_ball8, (0, 0), (2, 0))) == 1
    single = enumerate_geodesics(z2_ball8, (0, 0), (1, 0))
    assert len(single) == 1 and len(single[0]) == 1


def test_geodesic_count(z2_ball8):
    assert count_geodesics(z2_ball8, (0, 0), (2, 1)) == 3
    assert count_geodesics(z2_ball8, (3, 3), (3, 3)) == 1
    assert count_geodesics(z2_ball8, (1, 0), (0, 1)) == 2


def test_count_agrees_with_enumeration_on_random_pairs():
    for fid in ("z2", "klein_bottle", "zxz2"):
        p = from_id(fid)
        ball = generate_ball(p, standard_genset(p), 4)
        rng = random.Random(f"pairs:{fid}")
        checked = 0
        while checked < 200:
            u = rng.choice(ball.vertices)
            v = rng.choice(ball.vertices)
            w = p.multiply(p.inverse(u), v)
            if ball.distance_from_identity(w) is None:
                continue
            checked += 1
            assert count_geodesics(ball, u, v) == \
                len(enumerate_geodesics(ball, u, v))


def test_geodesic_cap(z2_ball8):
    with pytest.raises(GeodesicCapError) as exc:
        enumerate_geodesics(z2_ball8, (0, 0), (4, 4), cap=3)
    assert exc.value.partial_count == 3


def test_left_translation_is_isometric():
    p = builtin("heisenberg")
    S = standard_genset(p)
    big = generate_ball(p, S, 5)
    g = (1, 1, 0)
    dg = big.distance_from_identity(g)
    small = generate_ball(p, S, 5 - dg)
    rng = random.Random(17)
    verts = list(small.vertices)
    for _ in range(200):
        u, v = rng.choice(verts), rng.choice(verts)
        du = small.distance(u, v)
        if du is None:
            continue
        assert big.distance(p.multiply(g, u), p.multiply(g, v)) == du


def test_torsion_label_bound_passes():
    zx = from_id("zxz2")
    S = GenSet(zx, [(1, 0), (-1, 0), (1, 1), (-1, 1), (0, 1)])
    ball = generate_ball(zx, S, 4)
    rep = torsion_label_bound(ball, [(0, 0), (0, 1)])
    assert rep.verdict == "pass"


def test_torsion_label_bound_trivial_subgroup():
    p = builtin("zn", n=2)
    ball = generate_ball(p, standard_genset(p), 3)
    rep = torsion_label_bound(ball, [p.identity])
    assert rep.verdict == "pass"


def test_torsion_label_bound_negative_control():
    # fault injection: corrupting one distance lets a two-torsion-edge path
    # register as a geodesic, which the checker must catch with a witness
    zx = from_id("zxz2")
    ball = generate_ball(zx, standard_genset(zx), 3)
    ball.dist_list[ball.index[(1, 0)]] = 3
    rep = torsion_label_bound(ball, [(0, 0), (0, 1)])
    assert rep.verdict == "fail"
    assert rep.witnesses


def test_torsion_label_bound_rejects_non_normal_set():
    p = builtin("heisenberg")
    ball = generate_ball(p, standard_genset(p), 3)
    with pytest.raises(ValueError):
        torsion_label_bound(ball, [(0, 0, 0), (1, 0, 0)])


def test_insert_torsion_edge():
    zx = from_id("zxz2")
    N = [(0, 0), (0, 1)]
    ball = generate_ball(zx, standard_genset(zx), 5)
    geo = GeodesicPath((0, 0), ((0, 1), (1, 0), (1, 0)))
    paths = insert_torsion_edge(ball, geo, N)
    assert len(paths) == 3
    assert all(len(path) == 3 for path in paths)
    assert len({path.labels for path in paths}) == 3
    end = geo.end(zx)
    assert all(path.end(zx) == end for path in paths)
    # k = 0 returns only the original
    assert len(insert_torsion_edge(ball, GeodesicPath((0, 0), ((0, 1),)), N)) == 1


def test_insert_torsion_edge_flags_non_normal_set():
    h = builtin("heisenberg")
    ball = generate_ball(h, standard_genset(h), 3)
    fake = [(0, 0, 0), (1, 0, 0)]  # not conjugation-stable
    geo = GeodesicPath(h.identity, ((1, 0, 0), (0, 1, 0)))
    with pytest.raises(ValueError, match="not normal"):
        insert_torsion_edge(ball, geo, fake)


def test_insert_torsion_edge_heisenberg_product():
    h2 = from_id("heisenberg_z2")
    N = [(0, 0, 0, 0), (0, 0, 0, 1)]
    ball = generate_ball(h2, standard_genset(h2), 2)
    n = (0, 0, 0, 1)
    labels = (n, (1, 0, 0, 0), (0, 1, 0, 0), (1, 0, 0, 0))
    paths = insert_torsion_edge(ball, GeodesicPath(h2.identity, labels), N)
    assert len(paths) == 4
    assert len({p.labels for p in paths}) == 4


def test_exports_are_deterministic(tmp_path):
    p = builtin("zn", n=1)
    ball = generate_ball(p, standard_genset(p), 2)
    out = tmp_path / "ball.tsv"
    export_graph(ball, out)
    text = out.read_text()
    assert text == (
        "# presentation: Z^1\n"
        "# genset: -1 1\n"
        "# radius: 2\n"
        "-2\t1\t-1\n"
        "-1\t-1\t-2\n"
        "-1\t1\t0\n"
        "0\t-1\t-1\n"
        "0\t1\t1\n"
        "1\t-1\t0\n"
        "1\t1\t2\n"
        "2\t-1\t1\n")
    dout = tmp_path / "dist.tsv"
    export_distances(ball, dout)
    assert "0\t0" in dout.read_text().splitlines()[4]


def test_check_vertex_map_cases(z2_ball8):
    ident = {v: v for v in z2_ball8.vertices}
    assert check_vertex_map(z2_ball8, z2_ball8, ident)
    shear = {v: (v[0], v[1] + v[0]) for v in z2_ball8.vertices}
    res = check_vertex_map(z2_ball8, z2_ball8, shear)
    assert not res and res.witness is not None
    with pytest.raises(cayley.MapError):
        check_vertex_map(z2_ball8, z2_ball8, {(0, 0): (0, 0)})
    p = builtin("zn", n=2)
    other = generate_ball(p, standard_genset(p), 3)
    with pytest.raises(cayley.MapError):
        check_vertex_map(z2_ball8, other, ident)
