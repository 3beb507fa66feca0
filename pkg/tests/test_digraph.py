import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polycsp import digraph as dg


def random_digraph(rng, max_n=8):
    n = rng.randint(1, max_n)
    edges = [(u, v) for u in range(n) for v in range(n) if rng.random() < 0.3]
    return dg.Digraph(n, edges)


@st.composite
def digraphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n)]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=2 * n))
    return dg.Digraph(n, edges)


class TestBasics:
    def test_edge_validation(self):
        with pytest.raises(ValueError):
            dg.Digraph(2, [(0, 2)])

    def test_text_roundtrip(self):
        g = dg.oriented_path([2, 1, 2])
        assert dg.Digraph.from_text(g.to_text()) == g

    def test_text_comments_ignored(self):
        g = dg.Digraph.from_text("# note\n2\n0 1\n")
        assert g == dg.path(1)


class TestReverse:
    def test_p1(self):
        assert dg.reverse(dg.path(1)) == dg.Digraph(2, [(1, 0)])

    def test_cycle_selfreverse_up_to_iso(self):
        assert dg.is_isomorphic(dg.reverse(dg.cycle(3)), dg.cycle(3))

    @given(digraphs())
    def test_involution(self, g):
        assert dg.reverse(dg.reverse(g)) == g

    def test_involution_random_sweep(self):
        rng = random.Random(7)
        for _ in range(100):
            g = random_digraph(rng)
            assert dg.reverse(dg.reverse(g)) == g


class TestProduct:
    def test_c2_c3_is_c6(self):
        assert dg.is_isomorphic(dg.product(dg.cycle(2), dg.cycle(3)), dg.cycle(6))

    def test_loop_neutral(self):
        g = dg.oriented_path([1, 2])
        assert dg.is_isomorphic(dg.product(g, dg.single_loop()), g)

    def test_edge_count_multiplies(self):
        c23 = dg.disjoint_cycles([2, 3])
        assert len(dg.product(c23, c23).edges) == 25

    def test_commutative_associative_up_to_iso(self):
        rng = random.Random(3)
        for _ in range(20):
            a = random_digraph(rng, max_n=3)
            b = random_digraph(rng, max_n=3)
            assert dg.is_isomorphic(dg.product(a, b), dg.product(b, a))
        for _ in range(5):
            a, b, c = (random_digraph(rng, max_n=2) for _ in range(3))
            assert dg.is_isomorphic(
                dg.product(a, dg.product(b, c)), dg.product(dg.product(a, b), c)
            )


def _levels_oracle(g):
    """Independent BFS with +-1 weights over the undirected graph."""
    lev = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for y in g.successors(x):
                if y not in lev:
                    lev[y] = lev[x] + 1
                    nxt.append(y)
            for y in g.predecessors(x):
                if y not in lev:
                    lev[y] = lev[x] - 1
                    nxt.append(y)
        frontier = nxt
    lo = min(lev.values())
    return sorted(v - lo for v in lev.values())


class TestLevels:
    def test_path(self):
        lm = dg.levels(dg.path(3))
        assert lm.levels == (0, 1, 2, 3) and lm.height == 3

    def test_cycle_not_balanced(self):
        with pytest.raises(dg.NotBalanced):
            dg.levels(dg.cycle(3))

    def test_zigzag_matches_oracle(self):
        zig = dg.oriented_path([2, 1, 2])
        lm = dg.levels(zig)
        assert lm.height == 3
        assert sorted(lm.levels) == _levels_oracle(zig)

    def test_edge_rule_and_min_zero(self):
        rng = random.Random(11)
        found = 0
        while found < 25:
            g = random_digraph(rng, max_n=6)
            if not dg.is_balanced(g):
                continue
            found += 1
            lm = dg.levels(g)
            assert min(lm.levels) == 0
            for u, v in g.edges:
                assert lm.levels[v] == lm.levels[u] + 1


class TestLineGraphStar:
    def test_p1_gives_p2_class(self):
        from polycsp.homsearch import hom_equivalent

        assert hom_equivalent(dg.line_graph_star(dg.path(1)), dg.path(2))

    def test_paths_shift_up(self):
        from polycsp.homsearch import hom_equivalent

        assert hom_equivalent(
            dg.line_graph_star(dg.oriented_path([2, 1, 2])), dg.oriented_path([3, 2, 3])
        )

    def test_cycles_shift_up_even_changes(self):
        from polycsp.homsearch import hom_equivalent

        assert hom_equivalent(
            dg.line_graph_star(dg.oriented_cycle([2, 1])), dg.oriented_cycle([3, 2])
        )

    def test_needs_an_edge(self):
        with pytest.raises(dg.EmptyEdgeSet):
            dg.line_graph_star(dg.Digraph(1, []))


class TestTreeCodes:
    B1 = dg.Digraph(
        12,
        [(0, 7), (1, 0), (2, 1), (3, 0), (3, 4), (4, 5), (5, 6), (8, 7), (8, 10), (9, 8), (10, 11)],
    )

    def test_relabeling_invariance(self):
        rng = random.Random(5)
        perm = list(range(12))
        rng.shuffle(perm)
        relabeled = dg.Digraph(12, [(perm[u], perm[v]) for u, v in self.B1.edges])
        assert dg.tree_canonical_code(relabeled) == dg.tree_canonical_code(self.B1)

    def test_reverse_distinct(self):
        rev = dg.reverse(self.B1)
        assert dg.tree_canonical_code(rev) != dg.tree_canonical_code(self.B1)
        assert not dg.is_isomorphic(self.B1, rev)
        assert dg.tree_code_mod_reversal(rev) == dg.tree_code_mod_reversal(self.B1)

    def test_orientations_distinct(self):
        assert dg.tree_canonical_code(dg.path(2)) != dg.tree_canonical_code(
            dg.oriented_path([1, 1])
        )

    def test_code_agrees_with_isomorphism(self):
        from polycsp.treegen import generate_core_trees

        trees = [t for n in range(2, 9) for t in generate_core_trees(n)]
        codes = [dg.tree_canonical_code(t) for t in trees]
        for i in range(len(trees)):
            for j in range(i + 1, len(trees)):
                same = (codes[i] == codes[j])
                if trees[i].n == trees[j].n and trees[i].n <= 9:
                    assert same == dg.is_isomorphic(trees[i], trees[j])

    def test_not_a_tree(self):
        with pytest.raises(dg.NotATree):
            dg.tree_canonical_code(dg.cycle(3))


class TestIsomorphism:
    def test_c3_reverse(self):
        assert dg.is_isomorphic(dg.cycle(3), dg.reverse(dg.cycle(3)))

    def test_t3_vs_c3(self):
        assert not dg.is_isomorphic(dg.transitive_tournament(3), dg.cycle(3))

    def test_cap(self):
        with pytest.raises(ValueError):
            dg.is_isomorphic(dg.path(13), dg.path(13))

    def test_census_small(self):
        counts = {}
        for g in dg.all_digraphs_up_to_iso(3):
            counts[g.n] = counts.get(g.n, 0) + 1
        assert counts == {0: 1, 1: 2, 2: 10, 3: 104}


class TestShapes:
    def test_is_tree(self):
        assert dg.is_tree(dg.path(4))
        assert not dg.is_tree(dg.cycle(4))
        assert not dg.is_tree(dg.disjoint_union(dg.path(1), dg.path(1)))

    def test_is_triad(self):
        star = dg.Digraph(4, [(0, 1), (0, 2), (0, 3)])
        assert dg.is_triad(star)
        assert not dg.is_triad(dg.path(3))

    def test_is_path_graph(self):
        assert dg.is_path_graph(dg.oriented_path([1, 2, 1]))
        assert not dg.is_path_graph(dg.Digraph(4, [(0, 1), (0, 2), (0, 3)]))
