import itertools
import random

import pytest

from polycsp import catalog
from polycsp import conditions as co
from polycsp import digraph as dg
from polycsp import indicator as ind


def sigma(lengths):
    return co.loop_condition(dg.disjoint_cycles(lengths))


def brute_force_satisfies(h, cond):
    """Reference decision by backtracking directly over operation tables
    (no indicator, no arc consistency): does some family of polymorphisms
    of h satisfy the condition?"""
    syms = sorted(cond.symbols)
    tuples = {f: list(itertools.product(range(h.n), repeat=cond.symbols[f])) for f in syms}
    index = {f: {t: i for i, t in enumerate(tuples[f])} for f in syms}
    tables = {f: [-1] * len(tuples[f]) for f in syms}

    # constraints indexed by cell: checked as soon as both ends are set
    per_cell = {(f, i): [] for f in syms for i in range(len(tuples[f]))}
    for f in syms:
        for i, b in enumerate(tuples[f]):
            for j, b2 in enumerate(tuples[f]):
                if i == j:
                    continue
                if all((x, y) in h.edges for x, y in zip(b, b2)):
                    c = ("edge", f, i, f, j)
                    per_cell[(f, i)].append(c)
                    per_cell[(f, j)].append(c)
    for identity in cond.iter_identities():
        for a in itertools.product(range(h.n), repeat=identity.nvars):
            bl = tuple(a[v] for v in identity.left_args)
            br = tuple(a[v] for v in identity.right_args)
            c = ("eq", identity.left_symbol, index[identity.left_symbol][bl],
                 identity.right_symbol, index[identity.right_symbol][br])
            per_cell[(c[1], c[2])].append(c)
            per_cell[(c[3], c[4])].append(c)

    # BFS over the constraint graph keeps related cells adjacent in the
    # assignment order, so dead ends surface early
    all_cells = [(f, i) for f in syms for i in range(len(tuples[f]))]
    neighbors = {cell: set() for cell in all_cells}
    for cell, cons in per_cell.items():
        for kind, fa, ia, fb, ib in cons:
            neighbors[cell].add((fa, ia))
            neighbors[cell].add((fb, ib))
    order = []
    seen = set()
    for start in all_cells:
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            cell = queue.pop(0)
            order.append(cell)
            for nxt in sorted(neighbors[cell]):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)

    def supported(cell, value):
        f, i = cell
        tables[f][i] = value
        ok = True
        for kind, fa, ia, fb, ib in per_cell[cell]:
            va, vb = tables[fa][ia], tables[fb][ib]
            if va < 0 or vb < 0:
                continue
            if kind == "edge":
                if (va, vb) not in h.edges:
                    ok = False
                    break
            elif va != vb:
                ok = False
                break
        tables[f][i] = -1
        return ok

    def violates(cell):
        # the cell itself plus one-step forward checking on its neighbours
        for kind, fa, ia, fb, ib in per_cell[cell]:
            va, vb = tables[fa][ia], tables[fb][ib]
            if va < 0 or vb < 0:
                continue
            if kind == "edge":
                if (va, vb) not in h.edges:
                    return True
            elif va != vb:
                return True
        for nb in neighbors[cell]:
            fn, in_ = nb
            if tables[fn][in_] >= 0:
                continue
            if not any(supported(nb, v) for v in range(h.n)):
                return True
        return False

    def solve(k):
        if k == len(order):
            return True
        f, i = order[k]
        for v in range(h.n):
            tables[f][i] = v
            if not violates((f, i)) and solve(k + 1):
                return True
        tables[f][i] = -1
        return False

    return solve(0)


class TestBuild:
    def test_ind_sigma2_c3(self):
        b = ind.build_indicator(sigma([2]), dg.cycle(3))
        assert b.nclasses == 6
        g = b.graph
        # two disjoint directed 3-cycles
        assert all(len(g.successors(v)) == 1 and len(g.predecessors(v)) == 1 for v in range(6))
        assert dg.is_isomorphic(
            g, dg.Digraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
        )

    def test_ind_sigma2_c2(self):
        b = ind.build_indicator(sigma([2]), dg.cycle(2))
        assert b.nclasses == 3
        loops = [(u, v) for u, v in zip(b.esrc.tolist(), b.edst.tolist()) if u == v]
        assert len(loops) == 1
        # idempotent seeding pins the two diagonal classes
        pinned = {cls for cls, m in b.preset_lists.items()}
        assert len(pinned) == 2

    def test_levelwise_ts2_p1(self):
        b = ind.build_indicator(co.make_condition("TS", 2), dg.path(1), levelwise=True)
        assert b.nclasses == 2
        assert list(zip(b.esrc.tolist(), b.edst.tolist())) == [(0, 1)]

    def test_size_limit(self):
        with pytest.raises(ind.SizeLimit):
            ind.build_indicator(sigma([5, 6]), dg.disjoint_cycles([5, 6]), size_limit=10**6)

    def test_levelwise_needs_balance(self):
        with pytest.raises(dg.NotBalanced):
            ind.build_indicator(co.make_condition("Maltsev"), dg.cycle(3), levelwise=True)


def check_witness(h, cond, witness):
    """Tables must be polymorphisms and satisfy every identity pointwise."""
    for f, table in witness.items():
        k = cond.symbols[f]
        assert set(table) == set(itertools.product(range(h.n), repeat=k))
        for b in table:
            for b2 in table:
                if all((x, y) in h.edges for x, y in zip(b, b2)):
                    assert (table[b], table[b2]) in h.edges
    for ident in cond.iter_identities():
        for a in itertools.product(range(h.n), repeat=ident.nvars):
            bl = tuple(a[v] for v in ident.left_args)
            br = tuple(a[v] for v in ident.right_args)
            assert witness[ident.left_symbol][bl] == witness[ident.right_symbol][br]


class TestSatisfies:
    def test_c3_sigma2_with_witness(self):
        res = ind.satisfies(dg.cycle(3), sigma([2]), mode="full")
        assert res.verdict == "Yes"
        check_witness(dg.cycle(3), sigma([2]), res.witness)

    def test_c3_sigma3(self):
        assert ind.satisfies(dg.cycle(3), sigma([3])).verdict == "No"

    def test_t3(self):
        t3 = dg.transitive_tournament(3)
        assert ind.satisfies(t3, co.make_condition("Maltsev")).verdict == "No"
        for n in (2, 3, 4):
            assert ind.satisfies(t3, sigma([n])).verdict == "Yes"

    def test_tree_c_majority_but_no_binary_symmetric(self):
        tree_c = catalog.load_tree(catalog.TREE_NO_BINARY_SYMMETRIC)
        assert ind.satisfies(tree_c, co.make_condition("Majority"), mode="full").verdict == "Yes"
        assert ind.satisfies(tree_c, co.make_condition("TS", 2), mode="levelwise").verdict == "No"
        assert ind.satisfies(tree_c, co.make_condition("TS", 2), mode="full").verdict == "No"

    def test_levelwise_inconclusive_on_unsound(self):
        tree_d = catalog.load_tree(catalog.TREE_NO_MAJORITY)
        res = ind.satisfies(tree_d, co.make_condition("KK", 5), mode="levelwise")
        assert res.verdict == "Inconclusive"
        assert ind.satisfies(tree_d, co.make_condition("KK", 5), mode="auto").verdict == "Yes"

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            ind.satisfies(dg.cycle(2), sigma([2]), mode="sideways")


class TestWitnessValidity:
    def test_witnesses_are_valid_across_conditions(self):
        conds = [
            sigma([2]),
            co.make_condition("Maltsev"),
            co.make_condition("Majority"),
            co.make_condition("WNU", 3),
            co.make_condition("TS", 2),
            co.make_condition("Siggers4"),
        ]
        targets = [
            dg.cycle(2),
            dg.cycle(3),
            dg.transitive_tournament(3),
            dg.oriented_path([2, 1]),
            dg.disjoint_cycles([2, 3]),
            catalog.small_digraphs()["c2_plus"],
        ]
        checked = 0
        for h in targets:
            for c in conds:
                res = ind.satisfies(h, c, mode="full")
                if res.verdict == "Yes":
                    check_witness(h, c, res.witness)
                    checked += 1
        assert checked >= 12


class TestOracleEquivalence:
    CONDS = None

    @classmethod
    def conds(cls):
        if cls.CONDS is None:
            cls.CONDS = [
                ("Sigma2", sigma([2])),
                ("Sigma3", sigma([3])),
                ("Maltsev", co.make_condition("Maltsev")),
                ("Majority", co.make_condition("Majority")),
                ("WNU3", co.make_condition("WNU", 3)),
            ]
        return cls.CONDS

    def test_all_digraphs_up_to_three_vertices(self):
        for g in dg.all_digraphs_up_to_iso(3):
            if g.n == 0:
                continue
            for name, c in self.conds():
                fast = ind.satisfies(g, c, mode="full").verdict == "Yes"
                slow = brute_force_satisfies(g, c)
                assert fast == slow, (g, name)

    @pytest.mark.tier2
    def test_four_vertex_census_sample(self):
        rng = random.Random(0)
        sample = [g for g in dg.all_digraphs_up_to_iso(4) if g.n == 4]
        rng.shuffle(sample)
        for g in sample[:120]:
            for name, c in self.conds():
                fast = ind.satisfies(g, c, mode="full").verdict == "Yes"
                slow = brute_force_satisfies(g, c)
                assert fast == slow, (g, name)


class TestLevelwiseSoundness:
    def test_levelwise_equals_full_on_flagged_conditions(self):
        rng = random.Random(17)
        conds = [
            co.make_condition("Maltsev"),
            co.make_condition("HM", 2),
            co.make_condition("KMM"),
            co.make_condition("WNU", 3),
            co.make_condition("TS", 2),
            co.make_condition("TS", 3),
        ]
        graphs = []
        from polycsp.treegen import generate_core_trees, generate_trees

        for n in range(2, 8):
            graphs.extend(itertools.islice(generate_trees(n), 6))
        graphs.append(dg.oriented_path([2, 1, 2]))
        checked = 0
        for h in graphs:
            if h.n > 8 or not dg.is_balanced(h):
                continue
            for c in conds:
                lw = ind.satisfies(h, c, mode="levelwise").verdict
                full = ind.satisfies(h, c, mode="full").verdict
                assert lw == full, (h, c.name)
                checked += 1
        assert checked >= 100


class TestReversalInvariance:
    def test_satisfies_invariant_under_reversal(self):
        from polycsp.treegen import generate_core_trees

        conds = [co.make_condition("Majority"), co.make_condition("HM", 2)]
        trees = [t for n in range(2, 11) for t in generate_core_trees(n)]
        assert len(trees) >= 60
        for t in trees:
            r = dg.reverse(t)
            for c in conds:
                assert (
                    ind.satisfies(t, c, mode="auto").verdict
                    == ind.satisfies(r, c, mode="auto").verdict
                )


class TestTsSpecialization:
    def test_ts_builder_matches_generic_quotient(self):
        """The support-set construction is the union-find quotient of the
        tuple construction; verdicts must agree with a generic build that
        goes through the raw identities."""
        targets = [dg.cycle(2), dg.transitive_tournament(3), dg.oriented_path([1, 1, 1]),
                   dg.disjoint_cycles([2, 3])]
        for n in (2, 3):
            cond_ts = co.make_condition("TS", n)
            generic = co.MinorCondition(
                f"rawTS({n})", dict(cond_ts.symbols), tuple(cond_ts.iter_identities())
            )
            for h in targets:
                a = ind.satisfies(h, cond_ts, mode="full").verdict
                b = ind.satisfies(h, generic, mode="full").verdict
                assert a == b, (h, n)
