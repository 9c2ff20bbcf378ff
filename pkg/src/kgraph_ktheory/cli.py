"""Command-line entry point.

Subcommands
-----------
compute   run the spectral pipeline on explicit instances
expected  evaluate the closed-form tables (ranks 3 and 4)
verify    run both paths and compare, instance by instance
sweep     verify over a parameter grid given as per-color ranges
lemmas    brute-force the gcd identities over ranges

Input is a JSON document (``--input FILE`` or stdin).  ``--format table``
prints human-readable 8-column tables; ``--format structured`` emits one
JSON document per instance with machine-checkable provenance (certificates
and extension outcomes), which round-trips back to an equal table.

Exit codes: 0 success, 1 input error, 2 verification mismatch, 3 unknown
convergence encountered with --strict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Any, Optional, Sequence

from .abgroup import ExtensionCertificate, ExtensionOutcome, FinAbGroup
from .families import FamilyInvariants, closed_form, expected_table
from .kgraph import (
    ColorKind,
    ColorSpec,
    GraphSpec,
    InvalidGraphError,
    Involution,
    UnsupportedRankError,
)
from .spectral import (
    CertificateKind,
    ConvergenceCertificate,
    ExtensionRecord,
    KTheoryTable,
    Part,
    PipelineResult,
    compute_ktheory,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MISMATCH = 2
EXIT_UNKNOWN = 3

HARD_MAX_RANK = 6
SWEEP_GUARD = 10**6


class InputError(ValueError):
    """Malformed input document; the message names the offending field."""


class Command(Enum):
    COMPUTE = "compute"
    EXPECTED = "expected"
    VERIFY = "verify"
    SWEEP = "sweep"
    LEMMAS = "lemmas"


class OutputFormat(Enum):
    TABLE = "table"
    STRUCTURED = "structured"


@dataclass(frozen=True)
class JobSpec:
    command: Command
    document: Any
    output_format: OutputFormat = OutputFormat.TABLE
    jobs: int = 1
    max_rank: int = 4
    strict: bool = False


@dataclass(frozen=True)
class RunResult:
    exit_code: int
    output: str


# ---------------------------------------------------------------------------
# input parsing


def _parse_color(doc: Any, where: str) -> ColorSpec:
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected an object with kind and size")
    kind = doc.get("kind")
    if kind not in ("D", "T"):
        raise InputError(f'{where}.kind: expected "D" or "T", got {kind!r}')
    size = doc.get("size")
    if not isinstance(size, int) or isinstance(size, bool) or size < 1:
        raise InputError(f"{where}.size: expected a positive integer, got {size!r}")
    return ColorSpec(ColorKind(kind), size)


def _parse_involution(doc: Any, where: str) -> Involution:
    value = doc.get("involution", "trivial")
    if value not in ("trivial", "swap"):
        raise InputError(f'{where}.involution: expected "trivial" or "swap", got {value!r}')
    return Involution(value)


def parse_spec(doc: Any, where: str = "spec") -> GraphSpec:
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected an object")
    colors = doc.get("colors")
    if not isinstance(colors, list) or not colors:
        raise InputError(f"{where}.colors: expected a non-empty list")
    parsed = tuple(
        _parse_color(c, f"{where}.colors[{i}]") for i, c in enumerate(colors)
    )
    return GraphSpec(parsed, _parse_involution(doc, where))


def parse_instances(doc: Any) -> list[GraphSpec]:
    if isinstance(doc, dict) and "instances" in doc:
        items = doc["instances"]
        if not isinstance(items, list) or not items:
            raise InputError("instances: expected a non-empty list")
        return [parse_spec(item, f"instances[{i}]") for i, item in enumerate(items)]
    return [parse_spec(doc)]


def _size_range(value: Any, where: str) -> range:
    if isinstance(value, int) and not isinstance(value, bool):
        if value < 1:
            raise InputError(f"{where}: sizes must be positive")
        return range(value, value + 1)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        lo, hi = value
        if lo < 1 or hi < lo:
            raise InputError(f"{where}: expected 1 <= lo <= hi, got {value}")
        return range(lo, hi + 1)
    raise InputError(f"{where}: expected an integer or [lo, hi], got {value!r}")


def expand_sweep(doc: Any) -> list[GraphSpec]:
    """Expand a ranged document into the full (bounded) instance grid."""
    if not isinstance(doc, dict):
        raise InputError("sweep document: expected an object")
    colors = doc.get("colors")
    if not isinstance(colors, list) or not colors:
        raise InputError("colors: expected a non-empty list")
    kinds = []
    ranges = []
    for i, c in enumerate(colors):
        where = f"colors[{i}]"
        if not isinstance(c, dict) or c.get("kind") not in ("D", "T"):
            raise InputError(f'{where}.kind: expected "D" or "T"')
        kinds.append(ColorKind(c["kind"]))
        ranges.append(_size_range(c.get("size"), f"{where}.size"))
    inv_value = doc.get("involution", "both")
    if inv_value == "both":
        involutions = [Involution.TRIVIAL, Involution.SWAP]
    elif inv_value in ("trivial", "swap"):
        involutions = [Involution(inv_value)]
    else:
        raise InputError(f'involution: expected "trivial", "swap" or "both", got {inv_value!r}')

    total = len(involutions)
    for r in ranges:
        total *= len(r)
        if total > SWEEP_GUARD:
            raise InputError(f"sweep grid exceeds the {SWEEP_GUARD} instance guard")
    grid = []
    for sizes in product(*ranges):
        for inv in involutions:
            grid.append(
                GraphSpec(tuple(ColorSpec(k, s) for k, s in zip(kinds, sizes)), inv)
            )
    grid.sort(key=_instance_sort_key)
    return grid


def _instance_sort_key(spec: GraphSpec) -> tuple:
    return (
        tuple(c.kind.value for c in spec.colors),
        tuple(c.size for c in spec.colors),
        spec.involution.value,
    )


def _check_rank(spec: GraphSpec, max_rank: int, where: str) -> None:
    if spec.rank > min(max_rank, HARD_MAX_RANK):
        raise InputError(
            f"{where}: rank {spec.rank} exceeds the maximum {min(max_rank, HARD_MAX_RANK)}"
        )


# ---------------------------------------------------------------------------
# serialization


def group_to_doc(group: Optional[FinAbGroup]) -> Optional[dict]:
    if group is None:
        return None
    return {"free_rank": group.free_rank, "torsion": list(group.torsion)}


def group_from_doc(doc: Any) -> Optional[FinAbGroup]:
    if doc is None:
        return None
    return FinAbGroup(doc["free_rank"], tuple(doc["torsion"]))


def spec_to_doc(spec: GraphSpec) -> dict:
    return {
        "colors": [{"kind": c.kind.value, "size": c.size} for c in spec.colors],
        "involution": spec.involution.value,
    }


def _certificate_to_doc(cert: ConvergenceCertificate) -> dict:
    return {
        "kind": cert.kind.value,
        "r": cert.page,
        "p": cert.p,
        "q": cert.q,
        "part": cert.part.value,
    }


def _certificate_from_doc(doc: dict) -> ConvergenceCertificate:
    return ConvergenceCertificate(
        CertificateKind(doc["kind"]), doc["r"], doc["p"], doc["q"], Part(doc["part"])
    )


def _extension_to_doc(rec: ExtensionRecord) -> dict:
    out = rec.outcome
    return {
        "part": rec.part.value,
        "degree": rec.degree,
        "sub_position": list(rec.sub_position),
        "quotient_position": list(rec.quotient_position),
        "certificate": out.certificate.value,
        "resolved": out.resolved,
        "sub": group_to_doc(out.sub),
        "quotient": group_to_doc(out.quotient),
        "group": group_to_doc(out.group),
    }


def _extension_from_doc(doc: dict) -> ExtensionRecord:
    outcome = ExtensionOutcome(
        resolved=doc["resolved"],
        group=group_from_doc(doc["group"]),
        sub=group_from_doc(doc["sub"]),
        quotient=group_from_doc(doc["quotient"]),
        certificate=ExtensionCertificate(doc["certificate"]),
    )
    return ExtensionRecord(
        part=Part(doc["part"]),
        degree=doc["degree"],
        sub_position=tuple(doc["sub_position"]),
        quotient_position=tuple(doc["quotient_position"]),
        outcome=outcome,
    )


def table_to_doc(table: KTheoryTable) -> dict:
    certificates = []
    extensions = []
    for note in table.resolution_notes:
        if isinstance(note, ConvergenceCertificate):
            certificates.append(_certificate_to_doc(note))
        elif isinstance(note, ExtensionRecord):
            extensions.append(_extension_to_doc(note))
    return {
        "ko": [group_to_doc(g) for g in table.ko],
        "ku": [group_to_doc(g) for g in table.ku],
        "certificates": certificates,
        "extensions": extensions,
        "resolved": table.fully_resolved,
    }


def table_from_doc(doc: dict) -> KTheoryTable:
    notes: list[object] = [_certificate_from_doc(c) for c in doc.get("certificates", [])]
    notes.extend(_extension_from_doc(e) for e in doc.get("extensions", []))
    return KTheoryTable(
        ko=tuple(group_from_doc(g) for g in doc["ko"]),
        ku=tuple(group_from_doc(g) for g in doc["ku"]),
        resolution_notes=tuple(notes),
    )


def _invariants_doc(spec: GraphSpec) -> Optional[dict]:
    try:
        inv = closed_form(spec)
    except UnsupportedRankError:
        return None
    return {
        "g": inv.g,
        "h": inv.h,
        "k": inv.k,
        "case": {"rank": inv.case.rank, "number": inv.case.number, "order": list(inv.case.order)},
    }


# ---------------------------------------------------------------------------
# text rendering


def _group_str(group: Optional[FinAbGroup]) -> str:
    return "?" if group is None else str(group)


def _spec_str(spec: GraphSpec) -> str:
    colors = " ".join(f"{c.kind.value}{c.size}" for c in spec.colors)
    return f"{colors}  involution={spec.involution.value}"


def render_table(spec: GraphSpec, table: KTheoryTable, inv: Optional[FamilyInvariants]) -> str:
    lines = [f"spec: {_spec_str(spec)}"]
    if inv is not None:
        lines.append(
            f"case: rank-{inv.case.rank} case ({inv.case.number})   "
            f"g={inv.g} h={inv.h} k={inv.k}"
        )
    ko = [_group_str(g) for g in table.ko]
    ku = [_group_str(g) for g in table.ku]
    width = max(5, *(len(s) for s in ko + ku))
    header = "n    " + " ".join(f"{i:>{width}}" for i in range(8))
    lines.append(header)
    lines.append("KO_n " + " ".join(f"{s:>{width}}" for s in ko))
    lines.append("KU_n " + " ".join(f"{s:>{width}}" for s in ku))
    interesting = [
        n
        for n in table.resolution_notes
        if isinstance(n, ConvergenceCertificate)
        and n.kind in (CertificateKind.REAL_SHADOW_C, CertificateKind.UNKNOWN)
    ]
    for cert in interesting:
        lines.append(
            f"certificate: d_{cert.page} {cert.part.value} at (p={cert.p}, q={cert.q}): "
            f"{cert.kind.value}"
        )
    for n in table.resolution_notes:
        if isinstance(n, ExtensionRecord) and not n.outcome.resolved:
            lines.append(
                f"unresolved extension: {n.part.value} degree {n.degree}: "
                f"{n.outcome.sub} by {n.outcome.quotient}"
            )
    return "\n".join(lines)


def _unknown_message(result: PipelineResult) -> str:
    cert = result.convergence.unknown[0]
    return (
        f"unknown differential at (r={cert.page}, p={cert.p}, q={cert.q}, "
        f"part={cert.part.value})"
    )


# ---------------------------------------------------------------------------
# command handlers


def _structured_instance(
    spec: GraphSpec,
    result: Optional[PipelineResult],
    expected: Optional[KTheoryTable],
    verdict: Optional[str] = None,
) -> dict:
    doc: dict[str, Any] = {"spec": spec_to_doc(spec), "invariants": _invariants_doc(spec)}
    if result is not None:
        doc["status"] = result.status
        if result.table is not None:
            doc.update(table_to_doc(result.table))
        else:
            doc["unknown"] = [_certificate_to_doc(c) for c in result.convergence.unknown]
            doc["resolved"] = False
    if expected is not None:
        doc["expected"] = table_to_doc(expected)
    if verdict is not None:
        doc["verdict"] = verdict
    return doc


def _run_compute(job: JobSpec) -> RunResult:
    specs = parse_instances(job.document)
    out = []
    saw_unknown = False
    for i, spec in enumerate(specs):
        _check_rank(spec, job.max_rank, f"instances[{i}]")
        result = compute_ktheory(spec)
        saw_unknown = saw_unknown or not result.convergence.converged
        if job.output_format is OutputFormat.STRUCTURED:
            out.append(json.dumps(_structured_instance(spec, result, None), sort_keys=True))
        else:
            if result.table is None:
                out.append(f"spec: {_spec_str(spec)}\nstatus: {_unknown_message(result)}")
            else:
                out.append(render_table(spec, result.table, _safe_closed_form(spec)))
    code = EXIT_UNKNOWN if (saw_unknown and job.strict) else EXIT_OK
    return RunResult(code, "\n\n".join(out) + "\n")


def _safe_closed_form(spec: GraphSpec) -> Optional[FamilyInvariants]:
    try:
        return closed_form(spec)
    except (UnsupportedRankError, InvalidGraphError):
        return None


def _run_expected(job: JobSpec) -> RunResult:
    specs = parse_instances(job.document)
    out = []
    for i, spec in enumerate(specs):
        try:
            table = expected_table(spec)
        except UnsupportedRankError as exc:
            raise InputError(f"instances[{i}]: {exc}") from exc
        if job.output_format is OutputFormat.STRUCTURED:
            doc = _structured_instance(spec, None, None)
            doc.update(table_to_doc(table))
            out.append(json.dumps(doc, sort_keys=True))
        else:
            out.append(render_table(spec, table, _safe_closed_form(spec)))
    return RunResult(EXIT_OK, "\n\n".join(out) + "\n")


def _verify_one(spec: GraphSpec) -> tuple[str, dict]:
    """Worker for verify/sweep; returns (verdict, structured doc)."""
    expected = expected_table(spec)
    result = compute_ktheory(spec)
    if result.table is None:
        verdict = "unknown"
    elif not result.table.fully_resolved:
        verdict = "unresolved"
    elif result.table.groups_equal(expected):
        verdict = "match"
    else:
        verdict = "mismatch"
    return verdict, _structured_instance(spec, result, expected, verdict)


def _render_verdict_line(spec: GraphSpec, verdict: str) -> str:
    inv = _safe_closed_form(spec)
    suffix = f"  (g={inv.g} h={inv.h} k={inv.k})" if inv else ""
    return f"{_spec_str(spec)}: {verdict}{suffix}"


def _run_verify(job: JobSpec, specs: list[GraphSpec]) -> RunResult:
    for i, spec in enumerate(specs):
        _check_rank(spec, job.max_rank, f"instances[{i}]")
        if spec.rank not in (3, 4):
            raise InputError(
                f"instances[{i}]: verification needs a closed form; rank {spec.rank} has none"
            )
    if job.jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=job.jobs) as pool:
            results = list(pool.map(_verify_one, specs, chunksize=16))
    else:
        results = [_verify_one(spec) for spec in specs]

    lines = []
    mismatches = 0
    for spec, (verdict, doc) in zip(specs, results):
        if verdict != "match":
            mismatches += 1
        if job.output_format is OutputFormat.STRUCTURED:
            lines.append(json.dumps(doc, sort_keys=True))
        else:
            lines.append(_render_verdict_line(spec, verdict))
    if job.output_format is OutputFormat.TABLE:
        if mismatches == 0:
            lines.append(f"all {len(specs)} instances match")
        else:
            lines.append(f"{mismatches} of {len(specs)} instances FAILED")
    code = EXIT_OK if mismatches == 0 else EXIT_MISMATCH
    return RunResult(code, "\n".join(lines) + "\n")


def _run_lemmas(job: JobSpec) -> RunResult:
    from .numtheory import lemma_equal_gcds, lemma_hk_coprime

    doc = job.document if isinstance(job.document, dict) else {}
    plans = []
    for field, arity in (("pairs", 2), ("triples", 3), ("quadruples", 4)):
        if field in doc:
            rng = _size_range(doc[field], field)
            if rng.start < 2:
                raise InputError(f"{field}: lemma entries must be >= 2")
            plans.append((field, arity, rng))
    if not plans:
        raise InputError('lemmas document: expected at least one of "pairs", "triples", "quadruples"')

    lines = []
    failures = 0
    for field, arity, rng in plans:
        checked = 0
        bad = 0
        for tup in product(rng, repeat=arity):
            eq = lemma_equal_gcds(tup)
            hk = lemma_hk_coprime(tup)
            checked += 1
            if not (eq.ok and hk.ok):
                bad += 1
        failures += bad
        lines.append(
            f"{field} over [{rng.start}, {rng.stop - 1}]: {checked} tuples checked, "
            f"{bad} violations"
        )
    verdict = "all lemma checks passed" if failures == 0 else "LEMMA VIOLATIONS FOUND"
    lines.append(verdict)
    if job.output_format is OutputFormat.STRUCTURED:
        payload = {"checks": lines[:-1], "ok": failures == 0}
        return RunResult(
            EXIT_OK if failures == 0 else EXIT_MISMATCH,
            json.dumps(payload, sort_keys=True) + "\n",
        )
    return RunResult(EXIT_OK if failures == 0 else EXIT_MISMATCH, "\n".join(lines) + "\n")


def run(job: JobSpec) -> RunResult:
    """Execute a job; never raises for malformed input, returns exit 1 instead."""
    try:
        if job.command is Command.COMPUTE:
            return _run_compute(job)
        if job.command is Command.EXPECTED:
            return _run_expected(job)
        if job.command is Command.VERIFY:
            return _run_verify(job, parse_instances(job.document))
        if job.command is Command.SWEEP:
            return _run_verify(job, expand_sweep(job.document))
        return _run_lemmas(job)
    except InputError as exc:
        return RunResult(EXIT_INPUT, f"input error: {exc}\n")
    except InvalidGraphError as exc:
        return RunResult(EXIT_INPUT, f"input error: {exc}\n")


# ---------------------------------------------------------------------------
# argv plumbing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgraph-ktheory",
        description="Exact K-theory tables for two-vertex rank-k graph algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("compute", "run the spectral pipeline"),
        ("expected", "evaluate closed-form tables"),
        ("verify", "pipeline vs closed form on explicit instances"),
        ("sweep", "verify over a parameter grid"),
        ("lemmas", "brute-force the gcd identities"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", help="input JSON file (default: stdin)")
        p.add_argument(
            "--format",
            choices=[f.value for f in OutputFormat],
            default=OutputFormat.TABLE.value,
        )
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
        p.add_argument(
            "--max-rank",
            type=int,
            default=4,
            help=f"largest rank to compute (hard cap {HARD_MAX_RANK})",
        )
        p.add_argument(
            "--strict",
            action="store_true",
            help="exit 3 when a differential cannot be certified",
        )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.input:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            print(f"input error: cannot read {args.input}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        raw = sys.stdin.read()
    try:
        document = json.loads(raw)
    except json.JSONDecodeError as exc:
        print(f"input error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_INPUT
    job = JobSpec(
        command=Command(args.command),
        document=document,
        output_format=OutputFormat(args.format),
        jobs=max(1, args.jobs),
        max_rank=args.max_rank,
        strict=args.strict,
    )
    result = run(job)
    try:
        sys.stdout.write(result.output)
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream consumer (head, etc.) closed the pipe; not our error
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
