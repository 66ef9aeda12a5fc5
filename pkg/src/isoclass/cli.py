"""``isoclass`` command line.

Algebra arguments accept a JSON record (file path, ``-`` for stdin, or the
record inline) or ``pls:<square>`` for the ring of a partial Latin square over
``--field``. Output is JSON on stdout unless noted; errors go to stderr.

Exit codes: 0 decided true / success, 1 decided false, 2 error, 3 undecided.
``ISOCLASS_BUDGET`` caps both engines: oracle search size and Groebner
S-polynomial count.
"""

from __future__ import annotations

import functools
import json
import os
import re
import sys

import click

from . import acceptance, oracle
from .algebra import Algebra, IsotopismTriple, LinearMap, verify_isomorphism, verify_isotopism
from .colorgraph import BudgetExceeded, canonical_certificate, signature
from .functor import build_graph, predicted_signature
from .groebner import GroebnerBudgetExceeded, isomorphism_ideal, isotopism_ideal, standard_monomial_count
from .latin import LatinError, format_pls, parse_pls, pls_isotopism_classes, ring_of
from .pipeline import ENGINES, RELATIONS, choose_engine, classify_lie, classify_quasigroup_rings, exact_equivalence
from .tables import TABLES, emit_table, format_cell

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2, 3


def _budget() -> int | None:
    env = os.environ.get("ISOCLASS_BUDGET")
    if not env:
        return None
    try:
        return int(env)
    except ValueError:
        raise click.UsageError(f"ISOCLASS_BUDGET must be an integer, got {env!r}") from None


_FLAT_LIST = re.compile(r"\[\s*([^\[\]{}\"]*?)\s*\]")


def _dumps(data) -> str:
    # keep number rows (matrix rows, tuples) on one line
    text = json.dumps(data, indent=2, default=_json_default)
    return _FLAT_LIST.sub(lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text)


def _emit(data) -> None:
    click.echo(_dumps(data))


def _json_default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _guarded(fn):
    """Map library failures onto exit codes 2 (error) and 3 (undecided)."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except (oracle.Undecided, GroebnerBudgetExceeded, BudgetExceeded) as exc:
            _emit({"decided": False, "reason": str(exc)})
            sys.exit(EXIT_UNDECIDED)
        except (ValueError, KeyError, OSError, LatinError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ERROR)
        sys.exit(code or 0)

    return wrapper


def _read_json(source: str):
    if source == "-":
        return json.load(sys.stdin)
    if source.lstrip().startswith("{"):
        return json.loads(source)
    with open(source, encoding="utf-8") as fh:
        return json.load(fh)


def load_algebra(source: str, field: int | None) -> Algebra:
    if source.startswith("pls:"):
        if field is None:
            raise ValueError("--field is required for pls: algebras")
        return ring_of(parse_pls(source[4:]), field)
    A = Algebra.from_json(_read_json(source))
    if field is not None and A.p != field:
        raise ValueError(f"algebra {source!r} is over F{A.p}, but --field {field} was given")
    return A


def _pair(a: str, b: str, field: int | None) -> tuple[Algebra, Algebra]:
    A = load_algebra(a, field)
    B = load_algebra(b, field if field is not None else A.p)
    return A, B


def _write_out(path: str | None, data) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_dumps(data) + "\n")


common_field = click.option("--field", "field", type=int, default=None, help="Prime p of F_p.")
jobs_option = click.option("--jobs", type=int, default=None, help="Worker processes (default: available cores).")


def _jobs(jobs: int | None) -> int:
    return jobs if jobs is not None else (len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity")
                                          else os.cpu_count() or 1)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Decide isotopism and isomorphism of finite-dimensional algebras over F_p."""


@main.command()
@click.option("--algebra", "algebra", required=True, help="Algebra record or pls:<square>.")
@common_field
@click.option("--graph", type=click.Choice(["g1", "g2", "both"]), default="both")
@click.option("--predicted", is_flag=True, help="Also report the closed-form vertex and edge counts.")
@click.option("--certificate", is_flag=True, help="Include the canonical certificate (hex).")
@_guarded
def invariants(algebra, field, graph, predicted, certificate):
    """Graph signatures of an algebra."""
    A = load_algebra(algebra, field)
    out = {"algebra": A.to_json()}
    for which in (["g1", "g2"] if graph == "both" else [graph]):
        G = build_graph(A, which)
        rec = signature(G).to_json()
        if predicted:
            rec["predicted"] = predicted_signature(A, which).to_json()
        if certificate:
            rec["certificate"] = canonical_certificate(G).hex()
        out[which] = rec
    _emit(out)


def _decide(relation: str, a, b, field, engine, count) -> int:
    A, B = _pair(a, b, field)
    budget = _budget()
    used = choose_engine(engine, relation, A)
    w = exact_equivalence(A, B, relation, used, budget)
    out = {"relation": relation, "engine": used, "decided": True, "equivalent": w is not None,
           "p": A.p, "dim": A.n}
    if w is not None:
        out["witness"] = {"f": w.f.as_tuple()} if relation == "isomorphism" else w.to_json()
    if count:
        if used == "groebner":
            builder = isomorphism_ideal if relation == "isomorphism" else isotopism_ideal
            out["count"] = standard_monomial_count(builder(A, B).groebner(budget))
        elif relation == "isomorphism":
            out["count"] = oracle.count_isomorphisms(A, B)
        else:
            out["count"] = oracle.count_isotopisms(A, B)
    _emit(out)
    return EXIT_TRUE if w is not None else EXIT_FALSE


def _relation_command(relation: str, doc: str):
    @click.option("--a", "a", required=True, help="First algebra (record or pls:<square>).")
    @click.option("--b", "b", required=True, help="Second algebra.")
    @click.option("--engine", type=click.Choice(ENGINES), default="auto")
    @common_field
    @click.option("--count", is_flag=True, help="Also count all equivalences A -> B.")
    @_guarded
    def command(a, b, engine, field, count):
        return _decide(relation, a, b, field, engine, count)

    command.__doc__ = doc
    return command


main.command("isotopic")(_relation_command(
    "isotopism", "Decide whether A and B are isotopic; print a witness triple (f, g, h)."))
main.command("isomorphic")(_relation_command(
    "isomorphism", "Decide whether A and B are isomorphic; print a witness map f."))


@main.command()
@click.option("--a", "a", required=True)
@click.option("--b", "b", required=True)
@click.option("--witness", required=True, help="Witness JSON (file, '-', or inline); output of isotopic/isomorphic.")
@common_field
@_guarded
def verify(a, b, witness, field):
    """Re-check a printed witness against A and B."""
    A, B = _pair(a, b, field)
    data = _read_json(witness)
    data = data.get("witness", data)
    if not isinstance(data, dict) or "f" not in data:
        raise ValueError("no witness found (expected keys f [, g, h])")
    if "g" in data:
        t = IsotopismTriple.from_json(data, A.p)
        ok, relation = verify_isotopism(A, B, t), "isomorphism" if t.is_isomorphism else "isotopism"
    else:
        ok, relation = verify_isomorphism(A, B, LinearMap(data["f"], A.p)), "isomorphism"
    _emit({"valid": ok, "relation": relation})
    return EXIT_TRUE if ok else EXIT_FALSE


@main.command()
@click.option("--a", "a", required=True)
@click.option("--b", "b", required=True)
@click.option("--relation", type=click.Choice(RELATIONS), default="isotopism")
@click.option("--order", type=click.Choice(["degrevlex", "lex"]), default="degrevlex")
@click.option("--no-det", is_flag=True, help="Drop the nonsingularity equations.")
@click.option("--field-equations", is_flag=True, help="List the field equations with the basis.")
@common_field
@_guarded
def groebner(a, b, relation, order, no_det, field_equations, field):
    """Reduced Groebner basis of the equivalence ideal and its point count."""
    A, B = _pair(a, b, field)
    builder = isomorphism_ideal if relation == "isomorphism" else isotopism_ideal
    system = builder(A, B, with_det=not no_det, order=order)
    gb = system.groebner(_budget())
    basis = gb.with_field_equations() if field_equations else list(gb)
    _emit({
        "relation": relation,
        "order": order,
        "with_det": not no_det,
        "variables": list(system.ring.names),
        "field_equations": "listed" if field_equations else "implicit (x^p = x)",
        "basis": [str(g) for g in basis],
        "standard_monomials": standard_monomial_count(gb),
    })


@main.command("classify-pls")
@click.option("--order", "n", type=click.IntRange(1, 3), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guarded
def classify_pls(n, out):
    """Isotopism classes of partial Latin squares of order n."""
    reps = [format_pls(L) for L in pls_isotopism_classes(n)]
    data = {"order": n, "class_count": len(reps), "representatives": reps}
    _write_out(out, data)
    _emit(data if not out else {"order": n, "class_count": len(reps), "out": out})


def _report_exit(report) -> int:
    return EXIT_TRUE if report.exact else EXIT_UNDECIDED


def _summary(report, out) -> dict:
    data = {"relation": report.relation, "census_size": report.census_size, "class_count": len(report),
            "exact": report.exact, "stats": report.stats.to_json()}
    if out:
        data["out"] = out
    return data


@main.command("classify-rings")
@click.option("--order", "n", type=click.IntRange(1, 3), required=True)
@common_field
@click.option("--engine", type=click.Choice(ENGINES), default="auto")
@click.option("--no-invariants", is_flag=True, help="All-pairs baseline without graph filtering.")
@click.option("--labels", type=click.Choice(["table", "canonical"]), default="table",
              help="Name order-3 classes by the stored table's squares or by canonical form.")
@jobs_option
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guarded
def classify_rings(n, field, engine, no_invariants, labels, jobs, out):
    """Isotopism classes of partial quasigroup rings from each PLS class."""
    report = classify_quasigroup_rings(n, field or 2, engine, not no_invariants, _jobs(jobs), labels)
    data = report.to_json()
    data["merged_pairs"] = [list(x) for x in report.merged_label_pairs()]
    _write_out(out, data)
    summary = _summary(report, out)
    summary["merged_pairs"] = data["merged_pairs"]
    _emit(summary if out else data)
    return _report_exit(report)


@main.command("classify-lie")
@click.option("--dim", "n", type=click.IntRange(1, 3), default=3)
@common_field
@click.option("--relation", type=click.Choice(RELATIONS), default="isomorphism")
@click.option("--engine", type=click.Choice(ENGINES), default="auto")
@jobs_option
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guarded
def classify_lie_cmd(n, field, relation, engine, jobs, out):
    """Classify Lie algebras on F_p^n up to isomorphism or isotopism."""
    report = classify_lie(n, field or 2, relation, engine, _jobs(jobs))
    data = report.to_json()
    _write_out(out, data)
    summary = _summary(report, out)
    summary["invariant_groups"] = report.invariant_groups
    _emit(summary if out else data)
    return _report_exit(report)


@main.command()
@click.argument("name", type=click.Choice(sorted(TABLES)))
@click.option("--csv", "as_csv", is_flag=True, help="CSV instead of JSON.")
@_guarded
def tables(name, as_csv):
    """Recompute a stored invariant table; exit 1 when any row differs."""
    t = emit_table(name)
    if as_csv:
        click.echo(t.to_csv(), nl=False)
    else:
        rows = [{"row": r.key, "ok": r.ok, "error": r.error,
                 "computed": {f"F{p} {q}": format_cell(v) for (p, q), v in r.computed.items()},
                 "stored": {f"F{p} {q}": format_cell(v) for (p, q), v in r.golden.items()}}
                for r in t.rows]
        _emit({"table": name, "ok": t.ok, "mismatches": t.diff(), "rows": rows})
    return EXIT_TRUE if t.ok else EXIT_FALSE


@main.command()
@click.option("--only", multiple=True, type=click.Choice(sorted(acceptance.CRITERIA)),
              help="Run only these criteria (repeatable).")
@click.option("--cases", type=int, default=acceptance.DEFAULT_CASES, help="Random cases per property suite.")
@click.option("--seed", type=int, default=0, help="Seed for the randomized property suites.")
@_guarded
def selftest(only, cases, seed):
    """Run the acceptance checks; one PASS/FAIL line each."""
    failed = 0
    for r in acceptance.run_checks(set(only) or None, cases, seed):
        click.echo(r.line())
        failed += not r.passed
    click.echo(f"{failed} failing" if failed else "all passed")
    return EXIT_FALSE if failed else EXIT_TRUE


if __name__ == "__main__":
    main()
