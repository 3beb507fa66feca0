"""Command-line entry points: generate trees and cycles, check conditions,
classify sweeps, the cycle calculus, and the small-digraph census.

Exit codes for `check`: 0 = Yes, 1 = No, 2 = Inconclusive, >2 = error.
Long classification sweeps honour the POLYCSP_BUDGET_SECS environment
variable and emit a resume token (the last emitted canonical tree code)
when the budget runs out.
"""

from __future__ import annotations

import csv
import multiprocessing
import os
import sys
import time

import click

from . import catalog, cycles, treegen
from .conditions import parse_condition
from .digraph import Digraph, tree_canonical_code
from .indicator import SatResult, satisfies


@click.group()
def main():
    """Polymorphism-condition toolkit for finite digraphs."""


def _fail(message: str):
    """Errors exit with a code above the Yes/No/Inconclusive range."""
    click.echo(f"error: {message}", err=True)
    sys.exit(3)


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

@main.command()
@click.argument("n", type=int)
@click.option("--cores-only", is_flag=True, help="emit only core trees")
@click.option("--triads", is_flag=True, help="keep only triads")
@click.option("--cycles", "cycles_", is_flag=True, help="balanced cycles instead of trees")
@click.option("--count-only", is_flag=True, help="print the count instead of edge lists")
@click.option("--out", type=click.File("w"), default="-")
def gen(n, cores_only, triads, cycles_, count_only, out):
    """Stream all trees (or balanced cycles) with N vertices, one edge-list
    block per graph, blocks separated by blank lines."""
    if n < 1:
        _fail("n must be positive")
    if cycles_ and (n % 2 != 0 or n < 4):
        _fail("balanced cycles need an even length >= 4")
    if cycles_:
        stream = treegen.generate_balanced_cycles(n)
    else:
        stream = treegen.generate_trees(n, cores_only=cores_only)
        if triads:
            stream = treegen.filter_triads(stream)
    if count_only:
        click.echo(str(sum(1 for _ in stream)), file=out)
        return
    first = True
    for g in stream:
        if not first:
            click.echo("", file=out)
        first = False
        out.write(g.to_text())


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def _write_witness(res: SatResult, fh):
    w = csv.writer(fh)
    w.writerow(["symbol", "args", "value"])
    for sym in sorted(res.witness):
        for args in sorted(res.witness[sym]):
            w.writerow([sym, " ".join(str(a) for a in args), res.witness[sym][args]])


@main.command()
@click.argument("graph_file", type=click.File("r"))
@click.argument("condition")
@click.option("--mode", type=click.Choice(["auto", "levelwise", "full"]), default="auto")
@click.option("--witness", type=click.File("w"), default=None, help="write witness tables as CSV")
def check(graph_file, condition, mode, witness):
    """Decide whether the digraph in GRAPH_FILE satisfies CONDITION
    (e.g. Majority, HM(4), TS(2), Sigma(2,5))."""
    try:
        g = Digraph.from_text(graph_file.read())
        cond = parse_condition(condition)
    except ValueError as exc:
        _fail(str(exc))
    res = satisfies(g, cond, mode=mode)
    click.echo(res.verdict)
    if witness is not None and res.witness:
        _write_witness(res, witness)
    sys.exit({"Yes": 0, "No": 1, "Inconclusive": 2}[res.verdict])


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

_WORKER_CONDS = None


def _classify_init(cond_strings):
    global _WORKER_CONDS
    _WORKER_CONDS = [(s, parse_condition(s)) for s in cond_strings]


def _classify_one(arg):
    code_hex, text = arg
    g = Digraph.from_text(text)
    t0 = time.time()
    verdicts = {s: satisfies(g, c, mode="auto").verdict for s, c in _WORKER_CONDS}
    return code_hex, g.n, verdicts, time.time() - t0


@main.command()
@click.argument("n", type=int)
@click.argument("conditions", nargs=-1, required=True)
@click.option("--parallel", "jobs", type=int, default=1, help="worker processes")
@click.option("--out", type=click.File("w"), default="-")
@click.option("--resume", default=None, help="resume after this canonical code")
def classify(n, conditions, jobs, out, resume):
    """One record per core tree with N vertices: canonical code, vertex
    count, and a Yes/No/Inconclusive verdict per condition; a summary
    histogram per condition follows. Records are sorted by canonical code."""
    cond_strings = list(conditions)
    try:
        for s in cond_strings:
            parse_condition(s)  # fail fast on bad names
    except ValueError as exc:
        _fail(str(exc))
    budget = float(os.environ.get("POLYCSP_BUDGET_SECS", "inf"))
    started = time.time()

    items = []
    for t in treegen.generate_core_trees(n):
        items.append((tree_canonical_code(t).hex(), t.to_text()))
    items.sort()
    if resume:
        items = [it for it in items if it[0] > resume]

    writer = csv.writer(out)
    writer.writerow(["# polycsp classify v1"])
    writer.writerow(["tree", "n"] + cond_strings + ["seconds"])
    tally = {s: {"Yes": 0, "No": 0, "Inconclusive": 0} for s in cond_strings}
    emitted = 0
    last_code = None

    def handle(row):
        nonlocal emitted, last_code
        code_hex, nn, verdicts, secs = row
        writer.writerow([code_hex, nn] + [verdicts[s] for s in cond_strings] + [f"{secs:.3f}"])
        for s in cond_strings:
            tally[s][verdicts[s]] += 1
        emitted += 1
        last_code = code_hex

    exhausted = False
    if jobs > 1:
        with multiprocessing.Pool(jobs, _classify_init, (cond_strings,)) as pool:
            for row in pool.imap(_classify_one, items, chunksize=8):
                handle(row)
                if time.time() - started > budget:
                    exhausted = True
                    pool.terminate()
                    break
    else:
        _classify_init(cond_strings)
        for it in items:
            handle(_classify_one(it))
            if time.time() - started > budget:
                exhausted = emitted < len(items)
                break

    for s in cond_strings:
        writer.writerow(["# summary", s] + [f"{k}={v}" for k, v in tally[s].items()])
    if exhausted:
        writer.writerow(["# resume", last_code or ""])
        click.echo(f"error: budget exceeded; resume token {last_code}", err=True)
        sys.exit(3)


# ---------------------------------------------------------------------------
# cycles
# ---------------------------------------------------------------------------

def _parse_cs(text):
    return cycles.cycle_set(int(x) for x in text.split(","))


@main.command("cycles")
@click.argument("subcommand", type=click.Choice(["implies", "ppleq", "decompose", "meet", "join"]))
@click.argument("args", nargs=-1, required=True)
def cycles_cmd(subcommand, args):
    """Cyclic-loop-condition calculus on comma-separated cycle sets,
    e.g. `polycsp cycles decompose 6,20`."""
    try:
        sets = [_parse_cs(a) for a in args]
    except ValueError as exc:
        _fail(str(exc))
    if subcommand == "decompose":
        (c,) = sets
        parts = sorted(sorted(p) for p in cycles.pcl_decomposition(c))
        click.echo(" | ".join(",".join(str(x) for x in p) for p in parts))
        return
    if len(sets) != 2:
        _fail(f"{subcommand} needs two cycle sets")
    a, b = sets
    if subcommand == "implies":
        click.echo(str(cycles.clc_implies(a, b)).lower())
    elif subcommand == "ppleq":
        click.echo(str(cycles.cycles_ppleq(a, b)).lower())
    elif subcommand == "meet":
        click.echo(",".join(str(x) for x in sorted(cycles.clc_meet(a, b))))
    else:
        click.echo(",".join(str(x) for x in sorted(cycles.clc_join(a, b))))


# ---------------------------------------------------------------------------
# poset4
# ---------------------------------------------------------------------------

@main.command()
def poset4():
    """Census of digraphs with at most four vertices plus the separation
    verdicts for the named representatives."""
    total, ncores, nsig = catalog.poset4_census()
    click.echo(f"digraphs up to iso: {total}")
    click.echo(f"cores: {ncores}")
    click.echo(f"cores with a Siggers polymorphism: {nsig}")
    failures = 0
    for name, cond_s, want, got in catalog.run_separations():
        status = "ok" if want == got else "MISMATCH"
        if want != got:
            failures += 1
        click.echo(f"{name:16s} {cond_s:10s} expected {want:3s} got {got:3s} {status}")
    if failures:
        _fail(f"{failures} separation mismatches")


if __name__ == "__main__":
    main()
