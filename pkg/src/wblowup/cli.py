"""Batch front-end: run verification jobs described by a JSON document.

A job names a base ring, a weighted centre, a twist window, truncation
parameters, and a command; the runner executes the selected checks and
emits a machine-readable report (or an aligned table).  Exit codes are a
pure function of the verdict multiset: 0 all PASS, 1 at least one FAIL,
2 inconclusive only, 3 malformed input.

Job schema (exact keys):

    {"base_ring": {"vars": [...], "relations": [...]},
     "centre": [{"poly": "...", "weight": 1}, ...],
     "twist_window": [r_min, r_max],
     "truncation": {"initial": 2, "step": 1, "max": 9},
     "command": "...", "format": "json"|"table"}

The rees-verify command additionally reads the extension keys
"presentation" ([{"name", "poly", "degree"}...]) and "max_degree".

Reports are deterministic: same job, byte-identical output modulo the
per-check "seconds" timing fields.  --threads is accepted for interface
stability but execution is sequential; it never affects output.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .cohomology import (pushforward_structure_check, spectral_cech_agreement,
                         weighted_proj_cohomology_cech, weighted_proj_cohomology_formula)
from .pieces import clear_piece_cache
from .rees import (WeightedCentre, extended_rees_presentation, rees_generators,
                   verify_presentation_against_rees)
from .rings import GradedRing, ParseError, Variable, print_polynomial
from .sod import deformed_regularity_check, regularity_gate, sod_report
from .stab import FAIL, INCONCLUSIVE, PASS, Truncation, combine_verdicts

COMMANDS = ("koszul-check", "rees-gens", "rees-verify", "proj-coh", "blowup-coh",
            "pushforward-check", "sod-verify", "all")


class JobError(Exception):
    """Malformed job document; message carries the diagnostic."""


# ---------------------------------------------------------------------------
# job parsing
# ---------------------------------------------------------------------------


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise JobError(message)


class JobSpec:
    def __init__(self, raw: dict):
        _require(isinstance(raw, dict), "job document must be a JSON object")
        required = {"base_ring", "centre", "twist_window", "truncation", "command", "format"}
        allowed = required | {"presentation", "max_degree"}
        missing = sorted(required - set(raw))
        _require(not missing, f"missing job keys: {', '.join(missing)}")
        unknown = sorted(set(raw) - allowed)
        _require(not unknown, f"unknown job keys: {', '.join(unknown)}")

        ring_doc = raw["base_ring"]
        _require(isinstance(ring_doc, dict) and set(ring_doc) <= {"vars", "relations"},
                 "base_ring must be an object with keys vars, relations")
        names = ring_doc.get("vars", [])
        _require(isinstance(names, list) and all(isinstance(n, str) for n in names),
                 "base_ring.vars must be a list of strings")
        variables = tuple(Variable(n, 0) for n in names)
        free = GradedRing(variables)
        relations = []
        for text in ring_doc.get("relations", []):
            _require(isinstance(text, str), "base_ring.relations entries must be strings")
            relations.append(self._parse(free, text, "base_ring.relations"))
        self.base = GradedRing(variables, relations) if relations else free

        centre_doc = raw["centre"]
        _require(isinstance(centre_doc, list) and centre_doc,
                 "centre must be a nonempty list")
        entries = []
        for item in centre_doc:
            _require(isinstance(item, dict) and set(item) == {"poly", "weight"},
                     "centre entries must be objects with keys poly, weight")
            _require(isinstance(item["weight"], int) and item["weight"] >= 1,
                     f"centre weight {item['weight']!r} must be an integer >= 1")
            entries.append((self._parse(self.base, item["poly"], "centre.poly"),
                            item["weight"]))
        try:
            self.centre = WeightedCentre(self.base, entries)
        except ValueError as exc:
            raise JobError(str(exc))

        window = raw["twist_window"]
        _require(isinstance(window, list) and len(window) == 2
                 and all(isinstance(v, int) for v in window),
                 "twist_window must be [r_min, r_max]")
        _require(window[0] <= window[1], "twist_window needs r_min <= r_max")
        self.twist_window = (window[0], window[1])

        tr = raw["truncation"]
        _require(isinstance(tr, dict) and set(tr) == {"initial", "step", "max"},
                 "truncation must be an object with keys initial, step, max")
        for key in ("initial", "step", "max"):
            _require(isinstance(tr[key], int) and tr[key] >= 0,
                     f"truncation.{key} must be a nonnegative integer")
        _require(tr["step"] >= 1, "truncation.step must be >= 1")
        _require(tr["initial"] <= tr["max"], "truncation needs initial <= max")
        self.truncation = Truncation(bound=tr["initial"], step=tr["step"],
                                     max_bound=tr["max"])

        _require(raw["command"] in COMMANDS,
                 f"unknown command {raw['command']!r}; expected one of {', '.join(COMMANDS)}")
        self.command = raw["command"]
        _require(raw["format"] in ("json", "table"),
                 "format must be 'json' or 'table'")
        self.format = raw["format"]

        self.presentation: Optional[List[Tuple[str, object, int]]] = None
        if "presentation" in raw:
            pres_doc = raw["presentation"]
            _require(isinstance(pres_doc, list) and pres_doc,
                     "presentation must be a nonempty list")
            pres = []
            for item in pres_doc:
                _require(isinstance(item, dict) and set(item) == {"name", "poly", "degree"},
                         "presentation entries must be objects with keys name, poly, degree")
                _require(isinstance(item["degree"], int) and item["degree"] >= 1,
                         "presentation degrees must be integers >= 1")
                pres.append((item["name"],
                             self._parse(self.base, item["poly"], "presentation.poly"),
                             item["degree"]))
            self.presentation = pres
        self.max_degree = raw.get("max_degree", 6)
        _require(isinstance(self.max_degree, int) and self.max_degree >= 1,
                 "max_degree must be an integer >= 1")

        self.echo = raw

    @staticmethod
    def _parse(ring: GradedRing, text: str, where: str):
        try:
            return ring.parse(text)
        except ParseError as exc:
            raise JobError(f"{where}: {exc}")

    def trunc_for(self, twist: int) -> Truncation:
        """Truncation with the window floor needed at twist r.

        Checks at twist r need an initial bound of at least 1 + |r|, so
        that the extreme monomials (s^-r, or x_i^r on the section side)
        are representable; starting below that stabilizes a false state
        instead of returning INCONCLUSIVE.
        """
        base = self.truncation
        initial = max(base.bound, 2, 1 + abs(twist))
        max_bound = max(base.max_bound, initial + 2 * base.step)
        return Truncation(bound=initial, step=base.step, max_bound=max_bound)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


class CheckResult:
    def __init__(self, name: str, verdict: str, cells, witness=None, seconds: float = 0.0):
        self.name = name
        self.verdict = verdict
        self.cells = cells
        self.witness = witness
        self.seconds = seconds

    def to_dict(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict, "cells": self.cells,
               "seconds": round(self.seconds, 3)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _timed(name: str, fn) -> CheckResult:
    start = time.perf_counter()
    verdict, cells, witness = fn()
    return CheckResult(name, verdict, cells, witness, time.perf_counter() - start)


def _stab_cell(cell) -> dict:
    return cell.to_dict()


def _run_koszul(job: JobSpec) -> List[CheckResult]:
    def raw():
        report = regularity_gate(job.centre, job.truncation)
        return report.verdict, report.to_dict()["cells"], report.witness

    def deformed():
        report = deformed_regularity_check(job.centre, job.truncation)
        return report.verdict, report.to_dict()["cells"], report.witness

    return [_timed("koszul-regularity", raw),
            _timed("koszul-regularity-deformed", deformed)]


def _run_rees_gens(job: JobSpec) -> List[CheckResult]:
    top = max(1, job.twist_window[1])

    def gens():
        cells = []
        states = []
        for degree in range(1, top + 1):
            result = rees_generators(job.centre, degree)
            states.append(result.verdict)
            cells.append({
                "degree": degree,
                "generators": [print_polynomial(g) for g in result.generators],
                "exponents": [list(a) for a in result.exponents],
            })
        return combine_verdicts(states), cells, None

    return [_timed("rees-generators", gens)]


def _run_rees_verify(job: JobSpec) -> List[CheckResult]:
    if job.presentation is None:
        raise JobError("rees-verify needs the 'presentation' job key")

    def verify():
        check = verify_presentation_against_rees(
            job.centre, job.presentation, job.max_degree
        )
        cells = [{"degree": d, "verdict": cmp.verdict}
                 for d, cmp in sorted(check.per_degree.items())]
        witness = None
        bad = check.first_unequal_degree()
        if bad is not None:
            witness = {"first_unequal_degree": bad}
        return check.verdict, cells, witness

    return [_timed("rees-presentation", verify)]


def _agree(formula_row: Dict[int, int], cech_row) -> str:
    states = []
    for i in sorted(set(formula_row) | set(cech_row)):
        cell = cech_row.get(i)
        want = formula_row.get(i, 0)
        if cell is None:
            states.append(PASS if want == 0 else FAIL)
        elif not cell.stable:
            states.append(INCONCLUSIVE)
        else:
            states.append(PASS if cell.value == want else FAIL)
    return combine_verdicts(states)


def _run_proj_coh(job: JobSpec) -> List[CheckResult]:
    # the counting route is defined over the rationals, so the comparison
    # runs on P(weights) itself regardless of the job's base ring
    weights = job.centre.weights
    rationals = GradedRing(())

    def coh():
        cells = []
        states = []
        for r in range(job.twist_window[0], job.twist_window[1] + 1):
            formula_row = weighted_proj_cohomology_formula(weights, r)
            cech_row = weighted_proj_cohomology_cech(
                rationals, weights, r, job.trunc_for(r)
            )
            verdict = _agree(formula_row, cech_row)
            states.append(verdict)
            cells.append({
                "twist": r,
                "formula": {str(i): v for i, v in sorted(formula_row.items())},
                "cech": {str(i): _stab_cell(c) for i, c in sorted(cech_row.items())},
                "verdict": verdict,
            })
        return combine_verdicts(states), cells, None

    return [_timed("proj-cohomology", coh)]


def _run_blowup_coh(job: JobSpec) -> List[CheckResult]:
    blowup = extended_rees_presentation(job.centre)

    def coh():
        cells = []
        states = []
        for r in range(job.twist_window[0], job.twist_window[1] + 1):
            agreement = spectral_cech_agreement(blowup, r, job.trunc_for(r))
            states.append(agreement.verdict)
            cells.append({
                "twist": r,
                "higher": {str(i): {"spectral": _stab_cell(a), "cech": _stab_cell(b)}
                           for i, (a, b) in sorted(agreement.higher.items())},
                "restriction_stable": agreement.restriction.stable,
                "verdict": agreement.verdict,
            })
        return combine_verdicts(states), cells, None

    return [_timed("blowup-cohomology", coh)]


def _run_pushforward(job: JobSpec) -> List[CheckResult]:
    def push():
        check = pushforward_structure_check(job.centre, job.trunc_for(0))
        return check.verdict, check.to_dict(), None

    return [_timed("pushforward-structure", push)]


def _run_sod(job: JobSpec) -> List[CheckResult]:
    def verify():
        report = sod_report(job.centre, job.truncation)
        doc = report.to_dict()
        witness = doc["regularity"].get("witness")
        return report.verdict, doc, witness

    return [_timed("sod-verify", verify)]


RUNNERS = {
    "koszul-check": _run_koszul,
    "rees-gens": _run_rees_gens,
    "rees-verify": _run_rees_verify,
    "proj-coh": _run_proj_coh,
    "blowup-coh": _run_blowup_coh,
    "pushforward-check": _run_pushforward,
    "sod-verify": _run_sod,
}


def run_job(job: JobSpec) -> List[CheckResult]:
    clear_piece_cache()
    if job.command == "all":
        order = ["koszul-check", "rees-gens", "proj-coh", "blowup-coh",
                 "pushforward-check", "sod-verify"]
        if job.presentation is not None:
            order.insert(2, "rees-verify")
        results: List[CheckResult] = []
        for name in order:
            results.extend(RUNNERS[name](job))
        return results
    return RUNNERS[job.command](job)


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------


def exit_code(verdicts: Sequence[str]) -> int:
    if any(v == FAIL for v in verdicts):
        return 1
    if any(v == INCONCLUSIVE for v in verdicts):
        return 2
    return 0


def render_json(job: JobSpec, results: List[CheckResult]) -> str:
    doc = {
        "version": __version__,
        "job": job.echo,
        "checks": [r.to_dict() for r in results],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_table(job: JobSpec, results: List[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"wblowup {__version__}  command: {job.command}"]
    for r in results:
        lines.append(f"  {r.name.ljust(width)}  {r.verdict:<12}  {r.seconds:8.3f}s")
        if r.witness is not None:
            lines.append(f"  {' ' * width}  witness: {json.dumps(r.witness, sort_keys=True)}")
    overall = combine_verdicts(r.verdict for r in results)
    lines.append(f"  {'overall'.ljust(width)}  {overall}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="wblowup",
        description="verify weighted blowup structure from a JSON job description",
    )
    parser.add_argument("--job", required=True, help="path to the JSON job document")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "table"),
                        help="override the job's output format")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker hint; affects speed only, never output")
    args = parser.parse_args(argv)

    try:
        with open(args.job, "r") as fh:
            raw = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read job file: {exc}", file=sys.stderr)
        return 3
    except json.JSONDecodeError as exc:
        print(f"error: {args.job}: line {exc.lineno}, column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return 3

    try:
        job = JobSpec(raw)
        if args.threads < 1:
            raise JobError("--threads must be >= 1")
        results = run_job(job)
    except JobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    fmt = args.format or job.format
    text = render_json(job, results) if fmt == "json" else render_table(job, results)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code([r.verdict for r in results])


if __name__ == "__main__":
    sys.exit(main())
