"""Bundled fixtures (edge lists and pp-gadgets) plus constructors for the
named small digraphs used throughout the experiments."""

from __future__ import annotations

from importlib import resources

from . import digraph as dg
from .digraph import Digraph
from .ppdef import PPFormula, formula_from_text


def _read(name: str) -> str:
    return resources.files("polycsp").joinpath("fixtures").joinpath(name).read_text()


def load_tree(name: str) -> Digraph:
    return Digraph.from_text(_read(name + ".edges"))


def load_gadget(name: str) -> PPFormula:
    return formula_from_text(_read(name + ".gadget"))


def list_fixtures() -> list[str]:
    root = resources.files("polycsp").joinpath("fixtures")
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".edges"))


NL_HARD_12 = [f"tree_nl_hard_12_{i}" for i in range(1, 6)]
NP_HARD_20 = [f"tree_np_hard_20_{i:02d}" for i in range(1, 19)]
NO_KK_18 = [f"tree_no_kk_18_{i:02d}" for i in range(1, 15)]
NP_HARD_TRIADS_22 = ["triad_np_hard_22_1", "triad_np_hard_22_2"]
TREE_NO_MAJORITY = "tree_no_majority_16"
TREE_NO_BINARY_SYMMETRIC = "tree_no_binary_symmetric_19"
CYCLE_NP_HARD = "cycle_np_hard_26"


# ---------------------------------------------------------------------------
# the named digraphs with at most four vertices
# ---------------------------------------------------------------------------

def _t4_minus(missing: tuple[int, int]) -> Digraph:
    return Digraph(4, [e for e in dg.transitive_tournament(4).edges if e != missing])


def small_digraphs() -> dict[str, Digraph]:
    """Named digraphs on at most four vertices from the classification of
    that size range. 'ord2' is the two-element reflexive order."""
    c2_plus = Digraph(3, [(0, 1), (1, 0), (0, 2), (1, 2)])
    c3_plus = Digraph(4, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)])
    c2_plus_plus = Digraph(4, [(0, 1), (1, 0), (0, 2), (1, 2), (2, 3)])
    nck022 = Digraph(4, [(0, 1), (1, 0), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)])
    nck112 = Digraph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 1), (2, 3)])
    t3_plus = Digraph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    return {
        "p0": Digraph(1, []),
        "p1": dg.path(1),
        "p2": dg.path(2),
        "p3": dg.path(3),
        "c1": dg.single_loop(),
        "c2": dg.cycle(2),
        "c3": dg.cycle(3),
        "c4": dg.cycle(4),
        "t3": dg.transitive_tournament(3),
        "t4": dg.transitive_tournament(4),
        "k3": dg.complete(3),
        "k4": dg.complete(4),
        "c13": dg.oriented_cycle([1, 3]),
        "t4_no02": _t4_minus((0, 2)),
        "t4_no03": _t4_minus((0, 3)),
        "t4_no13": _t4_minus((1, 3)),
        "c2_plus": c2_plus,
        "c2_minus": dg.reverse(c2_plus),
        "c2_plus_plus": c2_plus_plus,
        "c2_minus_minus": dg.reverse(c2_plus_plus),
        "c3_plus": c3_plus,
        "c3_minus": dg.reverse(c3_plus),
        "t3_plus": t3_plus,
        "t3_minus": dg.reverse(t3_plus),
        "nck022": nck022,
        "nck202": dg.reverse(nck022),
        "nck112": nck112,
        # T3 with a 2-cycle glued at its source / middle / sink vertex
        "t3_u0_c2": Digraph(4, [(0, 1), (0, 2), (0, 3), (1, 0), (2, 3)]),
        "t3_u1_c2": Digraph(4, [(0, 1), (0, 2), (1, 0), (3, 0), (3, 2)]),
        "t3_u2_c2": Digraph(4, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 2)]),
        "ord2": Digraph(2, [(0, 0), (0, 1), (1, 1)]),
    }


# (source, gadget, target, needs allow_non_core) collapse claims verified by
# the acceptance suite; each is a pp-construction 'source builds target'.
COLLAPSES = [
    ("c2", "phi01", "p1", False),
    ("c3", "phi01", "p1", False),
    ("t3", "phi01", "p1", False),
    ("c2_plus", "phi02", "c2_minus", False),
    ("c3_plus", "phi02", "c3_minus", False),
    ("t3_plus", "phi02", "t3_minus", False),
    ("t3_u0_c2", "phi02", "t3_u2_c2", False),
    ("t4_no02", "phi02", "t4_no13", False),
    ("nck022", "phi02", "nck202", False),
    ("c2_plus_plus", "phi02", "c2_minus_minus", False),
    ("c13", "phi03", "c2", False),
    ("t4_no03", "phi03", "ord2", False),
    ("p3", "phi04", "p2", False),
    ("p2", "phi04", "p1", False),
    ("p1", "phi04", "p0", False),
    ("c3_plus", "phi04", "c3", False),
    ("t4", "phi04", "t3", False),
    ("t3_plus", "phi04", "t3", False),
    ("nck112", "phi04", "c2_minus", False),
    ("nck022", "phi04", "c2_plus", False),
    ("c2_plus_plus", "phi04", "c2_plus", False),
    ("c2_plus", "phi04", "c2", False),
    ("c4", "phi05", "c2", False),
    ("c2", "phi11", "c4", False),
    ("p1", "phi11", "p2", False),
    ("p1", "phi12", "p3", False),
    ("t3_u0_c2", "phi06", "c2_plus", False),
    ("t3_u1_c2", "phi06b", "c2_plus", False),
    ("t3_u1_c2", "phi07", "ord2", False),
    ("t3_u2_c2", "phi07", "ord2", False),
    ("c2_plus", "phi08", "nck112", False),
    ("c13", "phi09", "t3", False),
    ("c2_plus", "phi13", "c13", False),
    ("c2_plus", "phi10", "t4_no02", False),
    ("c3_plus", "phi10", "t4_no02", False),
    ("t4_no02", "phi14", "t4", False),
    # ord2 stands in for the two-element order structure, whose constants
    # are genuine relations; as a bare digraph it is not a core
    ("ord2", "phi16", "t4_no13", True),
    ("ord2", "phi15", "t4_no03", True),
    ("p0", "phi_eq", "c1", False),
]


# Condition verdicts separating the distinct small digraphs; these pin the
# classification table for digraphs with at most four vertices.
SEPARATIONS = [
    ("c2", "HM(1)", "Yes"),
    ("c3", "HM(1)", "Yes"),
    ("t3", "HM(1)", "No"),
    ("c13", "HM(2)", "Yes"),
    ("c3", "HM(2)", "Yes"),
    ("t4", "HM(2)", "No"),
    ("c2_plus_plus", "HM(4)", "Yes"),
    ("c3_plus", "HM(4)", "Yes"),
    ("nck022", "HM(4)", "No"),
    ("ord2", "HM(4)", "No"),
    ("c2_plus_plus", "HM(5)", "Yes"),
    ("c3_plus", "HM(5)", "Yes"),
    ("nck022", "HM(5)", "Yes"),
    ("ord2", "HM(5)", "No"),
    ("t4_no03", "HM(5)", "No"),
    ("c3_plus", "Sigma(2)", "Yes"),
    ("ord2", "Sigma(2)", "Yes"),
    ("c2", "Sigma(2)", "No"),
    ("t3_u1_c2", "Sigma(3)", "Yes"),
    ("t3_u0_c2", "Sigma(3)", "Yes"),
    ("nck022", "Sigma(3)", "Yes"),
    ("c2_plus_plus", "Sigma(3)", "Yes"),
    ("c3", "Sigma(3)", "No"),
    ("c3_plus", "Majority", "Yes"),
    ("t3_u1_c2", "Majority", "Yes"),
    ("t3_u0_c2", "Majority", "Yes"),
    ("c2_plus_plus", "Majority", "No"),
    ("nck022", "Majority", "No"),
    ("t4", "GFS(3)", "Yes"),
    ("c13", "GFS(3)", "Yes"),
    ("c3", "GFS(3)", "No"),
    ("t4_no02", "GFS(3)", "No"),
]


def poset4_census(progress=None):
    """Enumerate digraphs with at most four vertices up to isomorphism and
    report (total, cores, Siggers-satisfying cores). The empty digraph is
    included in the total (matching the reference count) but is not
    considered a core."""
    from . import digraph as _dg
    from .conditions import make_condition
    from .homsearch import is_core
    from .indicator import satisfies

    total = 0
    cores = []
    for g in _dg.all_digraphs_up_to_iso(4):
        total += 1
        if g.n >= 1 and is_core(g):
            cores.append(g)
        if progress and total % 500 == 0:
            progress(total)
    sig = make_condition("Siggers4")
    nsig = sum(1 for g in cores if satisfies(g, sig, mode="full").verdict == "Yes")
    return total, len(cores), nsig


def run_separations():
    """Evaluate every separation verdict; returns list of
    (name, condition, expected, got)."""
    from .conditions import parse_condition
    from .indicator import satisfies

    graphs = small_digraphs()
    out = []
    for name, cond_s, want in SEPARATIONS:
        got = satisfies(graphs[name], parse_condition(cond_s), mode="auto").verdict
        out.append((name, cond_s, want, got))
    return out
