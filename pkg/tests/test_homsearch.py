import itertools
import random

import pytest

from polycsp import digraph as dg
from polycsp import homsearch as hs


def brute_force_homs(g, h):
    """Reference enumeration of all homomorphisms, no pruning."""
    out = []
    for assign in itertools.product(range(h.n), repeat=g.n):
        if all((assign[u], assign[v]) in h.edges for u, v in g.edges):
            out.append(assign)
    return out


def random_digraph(rng, max_n=5, p=0.3):
    n = rng.randint(1, max_n)
    edges = [(u, v) for u in range(n) for v in range(n) if rng.random() < p]
    return dg.Digraph(n, edges)


class TestArcConsistency:
    def test_k3_into_k2_stays_full_but_no_hom(self):
        k3, k2 = dg.complete(3), dg.complete(2)
        lists = hs.arc_consistency(k3, k2)
        assert lists == [frozenset({0, 1})] * 3
        assert not hs.exists_homomorphism(k3, k2)

    def test_identity_survives(self):
        g = dg.oriented_path([1, 2, 1])
        lists = hs.arc_consistency(g, g)
        for v in range(g.n):
            assert v in lists[v]

    def test_p3_into_t3_singletons(self):
        p3, t3 = dg.path(3), dg.transitive_tournament(3)
        # no homomorphism: the path is longer than the longest chain
        assert hs.arc_consistency(p3, t3) is None
        assert brute_force_homs(p3, t3) == []
        p2 = dg.path(2)
        lists = hs.arc_consistency(p2, t3)
        homs = brute_force_homs(p2, t3)
        assert len(homs) == 1
        assert lists == [frozenset({v}) for v in homs[0]]

    def test_fixed_point_independent_of_edge_order(self):
        rng = random.Random(2)
        for _ in range(200):
            g = random_digraph(rng, max_n=6)
            h = random_digraph(rng, max_n=6)
            base = hs.arc_consistency(g, h)
            edges = g.sorted_edges()
            for _ in range(3):
                rng.shuffle(edges)
                inst = hs.HomInstance(g.n, edges, h.n, h.edges)
                masks = inst.full_lists()
                ok = inst.run_ac(masks)
                if base is None:
                    assert not ok
                else:
                    assert ok
                    assert [hs._from_mask(m) for m in masks] == base

    def test_reject_is_sound(self):
        rng = random.Random(4)
        rejected = 0
        for _ in range(300):
            g = random_digraph(rng, max_n=5)
            h = random_digraph(rng, max_n=4)
            if hs.arc_consistency(g, h) is None:
                rejected += 1
                assert brute_force_homs(g, h) == []
        assert rejected > 10

    def test_preset_lists_respected(self):
        c6, c3 = dg.cycle(6), dg.cycle(3)
        lists = [{0}] + [set(range(3))] * 5
        out = hs.arc_consistency(c6, c3, lists)
        assert out is not None and out[0] == frozenset({0})


class TestFindHomomorphism:
    def test_c6_wraps_onto_c3(self):
        hom = hs.find_homomorphism(dg.cycle(6), dg.cycle(3))
        assert hom is not None
        assert hs.is_valid_homomorphism(dg.cycle(6), dg.cycle(3), hom)

    def test_no_odd_wrap(self):
        assert hs.find_homomorphism(dg.cycle(3), dg.cycle(6)) is None

    def test_agrees_with_brute_force(self):
        rng = random.Random(9)
        for _ in range(200):
            g = random_digraph(rng, max_n=5)
            h = random_digraph(rng, max_n=4)
            hom = hs.find_homomorphism(g, h)
            ref = brute_force_homs(g, h)
            if hom is None:
                assert ref == []
            else:
                assert hs.is_valid_homomorphism(g, h, hom)
                assert ref

    def test_respects_lists(self):
        g = h = dg.cycle(4)
        hom = hs.find_homomorphism(g, h, [{2}, {3}, {0}, {1}])
        assert hom == (2, 3, 0, 1)


class TestCount:
    def test_singletons(self):
        assert hs.count_homomorphisms(dg.path(1), dg.path(1)) == 1
        assert hs.count_homomorphisms(dg.cycle(2), dg.cycle(2)) == 2

    def test_component_product(self):
        c23 = dg.disjoint_cycles([2, 3])
        assert hs.count_homomorphisms(dg.product(c23, c23), c23) == 2700

    def test_matches_brute_force(self):
        rng = random.Random(13)
        for _ in range(100):
            g = random_digraph(rng, max_n=4)
            h = random_digraph(rng, max_n=4)
            assert hs.count_homomorphisms(g, h) == len(brute_force_homs(g, h))


class TestCores:
    def test_p2_core(self):
        assert hs.is_core_tree(dg.path(2))

    def test_out_star_not_core(self):
        assert not hs.is_core_tree(dg.Digraph(3, [(0, 1), (0, 2)]))

    def test_not_a_tree(self):
        with pytest.raises(dg.NotATree):
            hs.is_core_tree(dg.cycle(3))

    def test_rooted_single_vertex(self):
        assert hs.is_rooted_core(dg.RootedTree(dg.Digraph(1, []), 0))

    def test_rooted_star_folds(self):
        star = dg.Digraph(3, [(0, 1), (0, 2)])
        assert not hs.is_rooted_core(dg.RootedTree(star, 0))
        # pinning a leaf instead makes the fold impossible on one side only
        assert not hs.is_rooted_core(dg.RootedTree(star, 1))

    def test_rooted_core_but_not_core(self):
        p1 = dg.path(1)
        assert hs.is_rooted_core(dg.RootedTree(p1, 0))
        assert hs.is_core_tree(p1)

    def test_general_core(self):
        assert hs.is_core(dg.cycle(3))
        assert hs.is_core(dg.cycle(6))
        assert hs.is_core(dg.transitive_tournament(4))
        # the six-cycle wraps onto the three-cycle, so their union folds
        assert not hs.is_core(dg.disjoint_cycles([3, 6]))
        assert not hs.is_core(dg.disjoint_union(dg.cycle(3), dg.cycle(3)))

    def test_ac_witness_extends_on_trees(self):
        # if AC leaves a value in a tree vertex's list, a homomorphism
        # realizing it exists
        from polycsp.treegen import generate_core_trees

        targets = [dg.transitive_tournament(3), dg.oriented_path([2, 1]), dg.cycle(2)]
        trees = [t for n in range(2, 10) for t in generate_core_trees(n)]
        checked = 0
        for t in trees[:40]:
            for h in targets:
                lists = hs.arc_consistency(t, h)
                if lists is None:
                    continue
                for v in range(t.n):
                    for a in lists[v]:
                        hom = hs.find_homomorphism(t, h, [
                            {a} if u == v else set(range(h.n)) for u in range(t.n)
                        ])
                        assert hom is not None and hom[v] == a
                        checked += 1
        assert checked > 100


class TestHomEquivalent:
    def test_double_c3(self):
        assert hs.hom_equivalent(dg.disjoint_union(dg.cycle(3), dg.cycle(3)), dg.cycle(3))

    def test_c2_c4(self):
        assert not hs.hom_equivalent(dg.cycle(2), dg.cycle(4))

    def test_reflexive(self):
        g = dg.oriented_path([3, 1])
        assert hs.hom_equivalent(g, g)


def test_kernel_twins_agree():
    """The compiled kernel and the pure-Python fallback must produce
    identical AC fixed points, search verdicts, and counts."""
    from polycsp import _ac_py
    from polycsp._kernel import make_instance

    rng = random.Random(21)
    for _ in range(150):
        g = random_digraph(rng, max_n=6)
        h = random_digraph(rng, max_n=5)
        esrc = [e[0] for e in g.sorted_edges()]
        edst = [e[1] for e in g.sorted_edges()]
        out_adj, in_adj = hs._adj_masks(h.n, h.edges)
        fast = make_instance(g.n, esrc, edst, out_adj, in_adj)
        slow = _ac_py.Instance(g.n, esrc, edst, out_adj, in_adj)
        full = [(1 << h.n) - 1] * g.n
        mf, ms = list(full), list(full)
        okf, oks = fast.run_ac(mf), slow.run_ac(ms)
        assert okf == oks
        if okf:
            assert mf == ms
        assert (fast.search(list(full)) is None) == (slow.search(list(full)) is None)
        assert fast.count(list(full)) == slow.count(list(full))
