"""Command-line front end.

    ganea COMMAND (--space PATH | --map PATH) [budgets] [--format text|json-like] [--output PATH]

A space or map argument is a file in the format of :mod:`ganea.serialize`,
or ``corpus:NAME`` for a built-in model.  Exit codes: 0 ok, 2 parse error,
3 validation failure, 4 budget exhausted (partial report still written),
5 internal invariant violated.
"""
from __future__ import annotations

import argparse
import hashlib
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from . import constructions as cx
from .cohomology import DEFAULT_PRIMES, CohomologyRing, cup_length, zero_divisor_cup_length
from .corpus import CORPUS
from .cover import cat_cover, consistency_harness, secat_cover, tc_cover
from .homology import homology
from .secat import SecatReport, SectionBudget, cat, fmt_value, gsecat, tc
from .serialize import ParseError, ValidationError, dump_map, dump_sset, dumps, load_map, load_sset, report_text
from .sset import BudgetExceeded, SimplicialMap, SimplicialSet
from .tower import GaneaTower

__all__ = ["JobSpec", "run", "main", "EXIT_OK", "EXIT_PARSE", "EXIT_VALIDATION", "EXIT_BUDGET", "EXIT_INVARIANT"]

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4, 5
COMMANDS = ("validate", "homology", "cup", "cat", "tc", "secat", "ganea", "oracle", "consistency")


class InvariantViolation(RuntimeError):
    pass


@dataclass
class JobSpec:
    command: str
    space: str | None = None
    map: str | None = None
    model: str | None = None
    output: str | None = None
    format: str = "text"
    invariant: str | None = None
    engine: str = "both"
    max_stage: int = 1
    ex_iterations: int = 1
    subdivisions: int = 2
    budget_homotopy: int = 2
    nodes: int = 200000
    family: str = "stars"
    n_max: int = 3
    piece_checks: int = 2000
    cover_nodes: int = 20000
    primes: tuple = DEFAULT_PRIMES
    threads: int = 1

    def validate(self) -> list[str]:
        out = []
        if self.command not in COMMANDS:
            out.append(f"unknown command {self.command!r}")
        for name in ("ex_iterations", "budget_homotopy", "nodes", "n_max", "piece_checks", "cover_nodes", "threads"):
            if getattr(self, name) <= 0:
                out.append(f"--{name.replace('_', '-')} must be positive")
        for name in ("max_stage", "subdivisions"):
            if getattr(self, name) < 0:
                out.append(f"--{name.replace('_', '-')} must be non-negative")
        if any(p < 2 for p in self.primes):
            out.append("--primes must be primes")
        if self.command == "secat" and not self.map:
            out.append("secat needs --map")
        if self.command in ("homology", "cup", "cat", "tc") and not self.space:
            out.append(f"{self.command} needs --space")
        if self.command in ("validate", "ganea", "oracle", "consistency") and not (self.space or self.map):
            out.append(f"{self.command} needs --space or --map")
        if self.command in ("oracle", "consistency") and self.space and self.invariant not in ("cat", "tc"):
            out.append(f"{self.command} on a space needs --invariant cat or tc")
        if self.command == "ganea" and self.space and self.invariant not in ("cat", "tc"):
            out.append("ganea on a space needs --invariant cat or tc")
        return out

    def budgets(self) -> dict:
        """Every budget in force; threads, format and output never change a report and are left out."""
        d = asdict(self)
        for k in ("command", "space", "map", "model", "output", "format", "threads"):
            d.pop(k)
        d["primes"] = list(self.primes)
        return d

    def section_budget(self) -> SectionBudget:
        return SectionBudget(self.subdivisions, self.budget_homotopy, self.nodes, self.ex_iterations)


# -- inputs ---------------------------------------------------------------------


def _read(arg: str) -> str:
    try:
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {arg}: {e.strerror}") from e


def load_space(arg: str) -> SimplicialSet:
    if arg.startswith("corpus:"):
        name = arg.split(":", 1)[1]
        if name not in CORPUS:
            raise ParseError(f"no corpus model {name!r}; known: {', '.join(sorted(CORPUS))}")
        return CORPUS[name]()
    return load_sset(_read(arg))


def load_morphism(arg: str) -> SimplicialMap:
    return load_map(_read(arg))


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# -- engines --------------------------------------------------------------------


def _pointed(X: SimplicialSet) -> SimplicialSet:
    return X if X.basepoint is not None else X.pointed(0)


def _tower(job: JobSpec, inv: str, obj) -> SecatReport:
    kw = dict(max_stage=job.max_stage, K=job.ex_iterations, budget=job.section_budget())
    if inv == "cat":
        return cat(_pointed(obj), **kw)
    if inv == "tc":
        return tc(obj, **kw)
    return gsecat(obj, **kw)


def _oracle(job: JobSpec, inv: str, obj, model=None) -> SecatReport:
    kw = dict(n_max=job.n_max, j_max=job.subdivisions, budget=job.section_budget(), family=job.family,
              checks_limit=job.piece_checks, nodes=job.cover_nodes)
    if inv == "cat":
        return cat_cover(obj, **kw)
    if inv == "tc":
        return tc_cover(obj, model=model, **kw)
    return secat_cover(obj, **kw)


def _engines(job: JobSpec, inv: str, obj, model, which: tuple[str, ...]) -> dict[str, SecatReport]:
    calls = {"tower": (_tower, (job, inv, obj)), "oracle": (_oracle, (job, inv, obj, model))}
    calls = {k: calls[k] for k in which}
    if job.threads > 1 and len(calls) > 1:
        with ProcessPoolExecutor(max_workers=min(job.threads, len(calls))) as pool:
            futs = {k: pool.submit(fn, *args) for k, (fn, args) in calls.items()}
            return {k: futs[k].result() for k in calls}
    return {k: fn(*args) for k, (fn, args) in calls.items()}


def combine(invariant: str, reports: dict[str, SecatReport]) -> dict:
    lower = max(r.lower for r in reports.values())
    upper = min(r.upper for r in reports.values())
    out = {"invariant": invariant, "lower": fmt_value(lower), "upper": fmt_value(upper), "exact": lower == upper}
    for k, r in reports.items():
        out[k] = r.to_dict()
    if "tower" in reports and "oracle" in reports:
        out["consistency"] = consistency_harness(reports["tower"], reports["oracle"])
    if lower > upper:
        raise InvariantViolation(f"{invariant}: lower bound {fmt_value(lower)} exceeds upper bound {fmt_value(upper)}")
    return out


def _summary(d: dict) -> str:
    if d["exact"]:
        return f"{d['invariant']}: exact {d['lower']}"
    return f"{d['invariant']}: between {d['lower']} and {d['upper']}"


def _budget_limited(obj) -> bool:
    if isinstance(obj, dict):
        if obj.get("verdict") == "Unknown":
            return True
        return any(_budget_limited(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_budget_limited(v) for v in obj)
    if isinstance(obj, str):
        return "budget" in obj
    return False


# -- commands -------------------------------------------------------------------


def _cmd_validate(job, X, f):
    if f is not None:
        return {"valid": True, "source_counts": list(f.source.counts), "target_counts": list(f.target.counts),
                "injective": f.is_injective(), "surjective": f.is_surjective()}, "valid map"
    chi = sum((-1) ** n * c for n, c in enumerate(X.counts))
    return {"valid": True, "counts": list(X.counts), "dim": X.dim, "components": len(X.components()),
            "basepoint": X.basepoint, "euler_characteristic": chi}, f"valid, counts {list(X.counts)}"


def _cmd_homology(job, X, f):
    H = homology(X, range(max(X.dim, 0) + 1), generators=False)
    rows = [{"degree": n, "betti": b, "torsion": list(t)} for n, (b, t) in enumerate(H.table())]
    return {"homology": rows}, "H_* = (" + ", ".join(H.groups[n].describe() for n in sorted(H.groups)) + ")"


def _cmd_cup(job, X, f):
    rows = []
    for p in job.primes:
        R = CohomologyRing(X, p)
        rows.append({"prime": p, "betti": R.betti(), "cup_length": cup_length(X, (p,)).to_dict(),
                     "zero_divisor_cup_length": zero_divisor_cup_length(X, (p,)).to_dict()})
    best = cup_length(X, job.primes)
    zcl = zero_divisor_cup_length(X, job.primes)
    return {"rings": rows}, (f"cup length {fmt_value(best.value)}, zero-divisor cup length {fmt_value(zcl.value)} "
                             f"(best over primes {list(job.primes)})")


def _invariant_report(job, inv, obj, model, which):
    d = combine(inv, _engines(job, inv, obj, model, which))
    return d, _summary(d)


def _cmd_ganea(job, X, f):
    if f is None:
        f = cx.vertex_inclusion(_pointed(X)) if job.invariant == "cat" else _diag(X)
    T = GaneaTower(f, job.ex_iterations)
    stages, partial = [], None
    for n in range(job.max_stage + 1):
        try:
            st = T.stage(n)
        except BudgetExceeded as e:
            partial = f"stage {n}: {e}"
            break
        Y = st.obj
        top = Y.dim_bound - 1 if Y.truncated else max(Y.dim, 0)
        H = homology(Y, range(top + 1), generators=False)
        stages.append({**st.summary(), "homology": [[b, list(t)] for b, t in H.table()],
                       "homology_degrees": top})
    out = {"stages": stages}
    if T._fac is not None:
        out["factorization"] = T.factorization.to_dict()
    if partial:
        out["partial"] = partial
    return out, f"{len(stages)} stage(s) built" + (f", stopped: budget at {partial}" if partial else "")


def _diag(X):
    from .secat import diagonal
    return diagonal(X)


def run(job: JobSpec) -> tuple[int, str]:
    """Execute a job; returns (exit status, rendered report)."""
    problems = job.validate()
    if problems:
        return EXIT_PARSE, _render(job, {"error": "invalid arguments", "problems": problems}, "invalid arguments")
    inputs = {}
    X = f = model = None
    try:
        if job.space:
            X = load_space(job.space)
            inputs["space"] = {"name": job.space if job.space.startswith("corpus:") else X.name,
                               "sha256": _digest(dump_sset(X))}
        if job.map:
            f = load_morphism(job.map)
            inputs["map"] = {"sha256": _digest(dump_map(f))}
        if job.model:
            model = load_morphism(job.model)
            inputs["model"] = {"sha256": _digest(dump_map(model))}
    except ParseError as e:
        return EXIT_PARSE, _render(job, {"error": "parse", "detail": str(e)}, f"parse error: {e}", inputs)
    except ValidationError as e:
        return EXIT_VALIDATION, _render(job, {"error": "validation", "problems": e.problems},
                                        f"validation failed: {e}", inputs)
    if model is not None:
        if X is None:
            return EXIT_PARSE, _render(job, {"error": "--model needs --space"}, "--model needs --space", inputs)
        # the model's target must be the space itself
        if dump_sset(model.target) != dump_sset(X):
            return EXIT_VALIDATION, _render(job, {"error": "validation", "problems": ["model target differs from the space"]},
                                            "validation failed: model target differs from the space", inputs)
        model = SimplicialMap(model.source, X, model.images, name=model.name)
    try:
        cmd = job.command
        if cmd == "validate":
            body, line = _cmd_validate(job, X, f)
        elif cmd == "homology":
            body, line = _cmd_homology(job, X, f)
        elif cmd == "cup":
            body, line = _cmd_cup(job, X, f)
        elif cmd in ("cat", "tc"):
            _check_space(cmd, X)
            which = ("tower", "oracle") if job.engine == "both" else (job.engine,)
            body, line = _invariant_report(job, cmd, X, model, which)
        elif cmd == "secat":
            which = ("tower", "oracle") if job.engine == "both" else (job.engine,)
            body, line = _invariant_report(job, "secat", f, None, which)
        elif cmd == "ganea":
            body, line = _cmd_ganea(job, X, f)
        elif cmd in ("oracle", "consistency"):
            inv = job.invariant if X is not None else "secat"
            obj = X if X is not None else f
            if X is not None:
                _check_space(inv, X)
            which = ("oracle",) if cmd == "oracle" else ("tower", "oracle")
            body, line = _invariant_report(job, inv, obj, model, which)
            if cmd == "consistency":
                h = body["consistency"]
                line = f"consistency {inv}: {'pass' if h['pass'] else 'FAIL'} (tower {h['tower']}, oracle {h['oracle']})"
                if not h["pass"]:
                    return EXIT_INVARIANT, _render(job, body, line, inputs)
    except ValidationError as e:
        return EXIT_VALIDATION, _render(job, {"error": "validation", "problems": e.problems}, f"validation failed: {e}", inputs)
    except (InvariantViolation, AssertionError) as e:
        return EXIT_INVARIANT, _render(job, {"error": "invariant", "detail": str(e)}, f"internal invariant violated: {e}", inputs)
    status = EXIT_OK
    if body.get("partial") or (job.command in ("cat", "tc", "secat", "oracle", "consistency") and not body.get("exact")
                               and _budget_limited(body)):
        status = EXIT_BUDGET
    return status, _render(job, body, line, inputs)


def _check_space(inv: str, X) -> None:
    if X.is_empty or (inv == "cat" and not X.is_connected()):
        raise ValidationError([f"{inv} needs a nonempty{' connected' if inv == 'cat' else ''} space"])


def _render(job: JobSpec, body: dict, line: str, inputs: dict | None = None) -> str:
    doc = {"command": job.command, "inputs": inputs or {}, "budgets": job.budgets(), "summary": line, "report": body}
    if job.format == "json-like":
        return dumps(doc)
    head = [f"# ganea {job.command}", "# budgets: " + ", ".join(f"{k}={v}" for k, v in sorted(job.budgets().items()))]
    for k, v in sorted((inputs or {}).items()):
        head.append(f"# {k}: " + ", ".join(f"{a}={b}" for a, b in sorted(v.items())))
    return "\n".join(head + [line, "", report_text(body)]) + "\n"


def _parser() -> argparse.ArgumentParser:
    d = JobSpec("validate")
    p = argparse.ArgumentParser(prog="ganea", description="Sectional category, LS-category and topological complexity "
                                                          "of finite simplicial sets.")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--space", help="simplicial set file, or corpus:NAME")
    src.add_argument("--map", help="simplicial map file")
    p.add_argument("--model", help="for tc: map file M -> X, a weak equivalence; covers are built on M x M")
    p.add_argument("--invariant", choices=("cat", "tc"), help="invariant for oracle/consistency/ganea on a space")
    p.add_argument("--engine", choices=("both", "tower", "oracle"), default=d.engine)
    p.add_argument("--max-stage", type=int, default=d.max_stage, help=f"highest Ganea stage (default {d.max_stage})")
    p.add_argument("--ex-iterations", type=int, default=d.ex_iterations, help=f"K for Ex^K (default {d.ex_iterations})")
    p.add_argument("--subdivisions", type=int, default=d.subdivisions,
                   help=f"largest j for Sd^j, in sections and covers (default {d.subdivisions})")
    p.add_argument("--budget-homotopy", type=int, default=d.budget_homotopy,
                   help=f"longest homotopy zigzag (default {d.budget_homotopy})")
    p.add_argument("--nodes", type=int, default=d.nodes, help=f"search nodes per attempt (default {d.nodes})")
    p.add_argument("--family", choices=("stars", "all"), default=d.family)
    p.add_argument("--n-max", type=int, default=d.n_max, help=f"largest n for covers by n+1 pieces (default {d.n_max})")
    p.add_argument("--piece-checks", type=int, default=d.piece_checks)
    p.add_argument("--cover-nodes", type=int, default=d.cover_nodes)
    p.add_argument("--primes", type=int, nargs="+", default=list(d.primes))
    p.add_argument("--threads", type=int, default=d.threads, help="worker processes; never changes the report")
    p.add_argument("--format", choices=("text", "json-like"), default=d.format)
    p.add_argument("--output", help="also write the report here")
    return p


def main(argv=None) -> int:
    p = _parser()
    try:
        a = p.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    job = JobSpec(a.command, a.space, a.map, a.model, a.output, a.format, a.invariant, a.engine, a.max_stage,
                  a.ex_iterations, a.subdivisions, a.budget_homotopy, a.nodes, a.family, a.n_max, a.piece_checks,
                  a.cover_nodes, tuple(a.primes), a.threads)
    status, text = run(job)
    sys.stdout.write(text)
    if job.output:
        with open(job.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
