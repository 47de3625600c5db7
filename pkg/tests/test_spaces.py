import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from roegap import (DisconnectedComponent, EmptyComponent, amplify,
                    build_space_from_edges, check_monogenic, compose_entourages,
                    extract_net, load_space, r_diagonal, save_space)
from roegap.spaces import Component, Entourage, SpaceFamily

import oracles


def cycle_space(n):
    return build_space_from_edges([(n, [(i, (i + 1) % n) for i in range(n)])])


def path_space(n):
    return build_space_from_edges([(n, [(i, i + 1) for i in range(n - 1)])])


class TestBuildSpace:
    def test_path_distances(self):
        space = path_space(3)
        assert space.components[0].dist[0, 2] == 2

    def test_singleton(self):
        space = build_space_from_edges([(1, [])])
        comp = space.components[0]
        assert comp.diameter == 0
        assert comp.ball_size(0) == 1
        assert comp.ball_size(5) == 1

    def test_four_cycle_against_bfs_oracle(self):
        space = cycle_space(4)
        oracle = oracles.bfs_distances(4, [(i, (i + 1) % 4) for i in range(4)])
        assert np.array_equal(space.components[0].dist, oracle)
        assert space.components[0].dist[0, 2] == 2
        assert space.components[0].ball_size(1) == 3

    def test_disconnected_raises(self):
        with pytest.raises(DisconnectedComponent):
            build_space_from_edges([(4, [(0, 1), (2, 3)])])

    def test_empty_raises(self):
        with pytest.raises(EmptyComponent):
            build_space_from_edges([(0, [])])

    def test_bad_edge_raises(self):
        with pytest.raises(ValueError):
            build_space_from_edges([(3, [(0, 7)])])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=2, max_value=24), st.randoms(use_true_random=False))
    def test_metric_axioms_on_random_connected_graphs(self, size, rnd):
        # random spanning tree plus extra edges; axioms checked exhaustively
        edges = [(rnd.randrange(i), i) for i in range(1, size)]
        for _ in range(size):
            u, v = rnd.randrange(size), rnd.randrange(size)
            if u != v:
                edges.append((min(u, v), max(u, v)))
        comp = build_space_from_edges([(size, edges)]).components[0]
        d = comp.dist
        assert np.array_equal(d, d.T)
        assert ((d == 0) == np.eye(size, dtype=bool)).all()
        for j in range(size):
            assert (d <= d[:, j][:, None] + d[j, :][None, :]).all()

    def test_metric_axioms_on_generated_families(self):
        # exhaustive checks up to the stated 512-point scale
        for space in (cycle_space(64), path_space(33), amplify(cycle_space(6), 4),
                      cycle_space(512)):
            for comp in space.components:
                d = comp.dist
                assert np.array_equal(d, d.T)
                assert ((d == 0) == np.eye(comp.size, dtype=bool)).all()
                for j in range(comp.size):
                    assert (d <= d[:, j][:, None] + d[j, :][None, :]).all()


class TestEntourages:
    def test_r0_is_diagonal(self):
        space = cycle_space(4)
        ent = r_diagonal(space, 0)
        rows, cols = ent.pairs(0)
        assert sorted(zip(rows.tolist(), cols.tolist())) == [(i, i) for i in range(4)]

    def test_four_cycle_r1_has_12_pairs(self):
        space = cycle_space(4)
        ent = r_diagonal(space, 1)
        oracle = oracles.pairs_within(space.components[0].dist, 1)
        assert ent.pair_count == 12
        assert ent.pair_count == len(oracle)

    def test_beyond_diameter_is_full_square(self):
        space = cycle_space(4)
        ent = r_diagonal(space, 99)
        assert ent.pair_count == 16

    def test_nesting_in_radius(self):
        space = path_space(7)
        for r in range(0, 6):
            assert r_diagonal(space, r).is_subset(r_diagonal(space, r + 1))

    def test_compose_delta1_delta1_on_path(self):
        space = path_space(5)
        d1 = r_diagonal(space, 1)
        composed = compose_entourages(d1, d1)
        d2 = r_diagonal(space, 2)
        assert composed.is_subset(d2) and d2.is_subset(composed)

    def test_compose_with_diagonal_is_identity(self):
        space = cycle_space(6)
        e = r_diagonal(space, 2)
        diag = r_diagonal(space, 0)
        out = compose_entourages(e, diag)
        assert out.is_subset(e) and e.is_subset(out)

    def test_compose_contains_larger_diagonal(self):
        space = cycle_space(8)
        a, b = r_diagonal(space, 2), r_diagonal(space, 3)
        composed = compose_entourages(a, b)
        assert r_diagonal(space, 3).is_subset(composed)

    def test_compose_matches_enumeration_oracle(self):
        space = cycle_space(6)
        rng = np.random.default_rng(5)
        d = space.components[0].dist
        all_pairs = [(x, y) for x in range(6) for y in range(6)]
        for _ in range(10):
            pe = {p for p in all_pairs if rng.random() < 0.3}
            pe |= {(y, x) for x, y in pe}
            pf = {p for p in all_pairs if rng.random() < 0.3}
            pf |= {(y, x) for x, y in pf}
            e = Entourage.from_pairs(space, [pe])
            f = Entourage.from_pairs(space, [pf])
            got = compose_entourages(e, f)
            rows, cols = got.pairs(0)
            assert set(zip(rows.tolist(), cols.tolist())) == oracles.compose_pairs(pe, pf, 6)

    def test_compose_associative_exhaustive_small(self):
        space = build_space_from_edges([(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])])
        rng = np.random.default_rng(11)
        ents = []
        for _ in range(3):
            ps = {(x, y) for x in range(5) for y in range(5) if rng.random() < 0.4}
            ps |= {(y, x) for x, y in ps}
            ents.append(Entourage.from_pairs(space, [ps]))
        e, f, g = ents
        left = compose_entourages(compose_entourages(e, f), g)
        right = compose_entourages(e, compose_entourages(f, g))
        assert left.is_subset(right) and right.is_subset(left)

    def test_symmetry_flag(self):
        space = path_space(3)
        asym = Entourage.from_pairs(space, [[(0, 1)]], symmetrize=False)
        assert not asym.symmetric
        with pytest.raises(ValueError):
            check_monogenic(space, asym, r_diagonal(space, 1), 3)
        sym = Entourage.from_pairs(space, [[(0, 1)]])
        assert sym.symmetric

    def test_compose_symmetric_when_equal(self):
        space = cycle_space(5)
        e = r_diagonal(space, 1)
        assert compose_entourages(e, e).symmetric


class TestMonogenic:
    def test_f_equal_e0_gives_one(self):
        space = cycle_space(8)
        e0 = r_diagonal(space, 1)
        assert check_monogenic(space, e0, e0, 5) == 1

    def test_delta3_on_path_needs_three(self):
        space = path_space(8)
        assert check_monogenic(space, r_diagonal(space, 1), r_diagonal(space, 3), 10) == 3

    def test_exact_power_for_every_radius(self):
        space = cycle_space(10)
        e0 = r_diagonal(space, 1)
        for r in range(1, space.components[0].diameter + 1):
            assert check_monogenic(space, e0, r_diagonal(space, r), 12) == r

    def test_diagonal_generates_nothing(self):
        space = path_space(4)
        diag = r_diagonal(space, 0)
        assert check_monogenic(space, diag, r_diagonal(space, 2), 20) is None


class TestNet:
    def test_radius_one_keeps_everything(self):
        space = cycle_space(6)
        net = extract_net(space, 1)
        assert net.space.sizes == (6,)
        assert net.inclusion[0].tolist() == list(range(6))

    def test_eight_cycle_radius_two(self):
        space = cycle_space(8)
        net = extract_net(space, 2)
        assert net.inclusion[0].tolist() == [0, 2, 4, 6]
        d = net.space.components[0].dist
        assert d[0, 1] == 2 and d[0, 2] == 4 and d[1, 3] == 4
        assert oracles.greedy_net(space.components[0].dist, 2) == [0, 2, 4, 6]

    def test_singleton_net(self):
        space = build_space_from_edges([(1, [])])
        net = extract_net(space, 3)
        assert net.space.sizes == (1,)

    def test_separation_and_maximality(self):
        space = amplify(cycle_space(9), 2)
        for radius in (2, 3):
            net = extract_net(space, radius)
            ids = net.inclusion[0]
            d = space.components[0].dist
            for i in range(len(ids)):
                for j in range(i + 1, len(ids)):
                    assert d[ids[i], ids[j]] >= radius
            for x in range(space.components[0].size):
                assert min(d[x, s] for s in ids) <= radius - 1


class TestAmplify:
    def test_single_copy_is_isometric(self):
        space = cycle_space(5)
        amp = amplify(space, 1)
        assert np.array_equal(amp.components[0].dist, space.components[0].dist)

    def test_singleton_times_three_is_path(self):
        amp = amplify(build_space_from_edges([(1, [])]), 3)
        assert amp.components[0].size == 3
        assert amp.components[0].diameter == 2

    def test_metric_formula(self):
        space = cycle_space(4)
        amp = amplify(space, 2)
        comp = amp.components[0]
        d0 = space.components[0].dist
        assert comp.dist[0, 4] == 1  # (0, level 0) to (0, level 1)
        for x in range(4):
            for y in range(4):
                for i in range(2):
                    for j in range(2):
                        assert comp.dist[i * 4 + x, j * 4 + y] == d0[x, y] + abs(i - j)


class TestSpaceFile:
    def test_roundtrip(self, tmp_path):
        space = build_space_from_edges([(4, [(i, (i + 1) % 4) for i in range(4)]),
                                        (1, [])])
        path = tmp_path / "space.txt"
        save_space(space, path)
        loaded = load_space(path)
        assert loaded.sizes == space.sizes
        for a, b in zip(loaded.components, space.components):
            assert np.array_equal(a.dist, b.dist)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("nonsense v9\n")
        with pytest.raises(ValueError):
            load_space(path)

    def test_loader_validates_connectivity(self, tmp_path):
        path = tmp_path / "disc.txt"
        path.write_text("space v1\ncomponent 0 4\nedge 0 1\nedge 2 3\n")
        with pytest.raises(DisconnectedComponent):
            load_space(path)


class TestBallProfile:
    def test_profile_reported_up_to_diameter(self):
        comp = cycle_space(8).components[0]
        assert comp.ball_profile == (1, 3, 5, 7, 8)
        assert comp.ball_size(99) == 8

    def test_family_profile_is_max(self):
        space = SpaceFamily(cycle_space(8).components + cycle_space(4).components)
        assert space.ball_size(2) == 5
