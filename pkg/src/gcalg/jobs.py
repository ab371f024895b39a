"""Job dispatch and report rendering, shared by the CLI and the HTTP service.

A job is a command name plus a parsed input document and options.  Reports are
deterministic: identical input and seed produce byte-identical output (timing
is only attached when explicitly requested).  Every report embeds the version
of the multiplicative-to-additive convention table so results stay auditable.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .cend import MUTATIONS, cend_product, check_cend_associativity, conformal_shift
from .cohomology import coboundary_of, cocycle_consequences, find_trivializing_cochain
from .conformal import cur
from .errors import (
    InputError,
    KernelError,
    NotAssociative,
)
from .iofmt import Document, parse_document
from .poly import LAMBDA, MU
from .structure import (
    conformal_simplicity_suite,
    decompose_semisimple_graded,
    is_graded_simple,
    radical_fd,
    recover_fine_structure,
)

CONVENTIONS_VERSION = "additive-affine-line/v1"

CONVENTION_TABLE = (
    ("group G0", "the affine line (Q, +); regular functions are Q[T]"),
    ("product in G0", "addition; inverse is negation; identity is 0"),
    ("sigma action", "lambda^sigma(a) becomes sigma(a) * lambda"),
    ("shift operator", "(L_c h)(T) = h(T + c)"),
    ("cocycle condition", "phi(ab,c) + sigma(c) phi(a,b) = phi(a,bc) + phi(b,c)"),
    ("coboundary", "(d tau)(a,b) = sigma(b) tau(a) + tau(b) - tau(ab)"),
    (
        "left coefficient rule",
        "h(T) on a degree-a factor contributes h(-sigma(a)(lambda + phi(a, a^-1)))",
    ),
    (
        "right coefficient rule",
        "h(T) on the right factor shifts to h(T + sigma(ab) lambda + phi(a^-1, ab))",
    ),
    (
        "re-bracketing parameter",
        "nu = sigma(a)(mu - lambda - phi(b^-1, a^-1))",
    ),
)

COMMANDS = (
    "validate",
    "check-axioms",
    "construct-cur",
    "cend-assoc",
    "trivialize",
    "decompose",
    "recover",
    "simplicity",
)


@dataclass
class JobSpec:
    command: str
    document: dict
    options: dict = field(default_factory=dict)


@dataclass
class CheckRecord:
    name: str
    verdict: str               # pass | fail | info | error | inconclusive
    detail: dict = field(default_factory=dict)


@dataclass
class JobReport:
    command: str
    verdict: str               # pass | fail | error | inconclusive
    exit_code: int             # 0 pass, 1 mathematical failure, 2 input error
    seed: int
    records: list[CheckRecord]
    certificate: dict | None = None
    conventions: str = CONVENTIONS_VERSION
    elapsed_ms: int | None = None


def _frac_str(x: Fraction) -> str:
    return str(x)


def _option_int(options: dict, key: str, default: int) -> int:
    try:
        return int(options.get(key, default))
    except (TypeError, ValueError):
        raise InputError(f"option {key!r} must be an integer")


def run(job: JobSpec) -> JobReport:
    """Execute a job; never raises for mathematical or input failures."""
    if job.command not in COMMANDS:
        return JobReport(
            job.command,
            "error",
            2,
            _option_int(job.options, "seed", 0) if isinstance(job.options, dict) else 0,
            [CheckRecord("command", "error", {"message": f"unknown command {job.command!r}"})],
        )
    seed = _option_int(job.options, "seed", 0)
    started = time.perf_counter()
    try:
        doc = parse_document(job.document)
        doc.options.update(job.options or {})
        records, verdict, certificate = _dispatch(job.command, doc, seed)
        exit_code = {"pass": 0, "inconclusive": 0, "fail": 1}[verdict]
        report = JobReport(job.command, verdict, exit_code, seed, records, certificate)
    except InputError as exc:
        detail = {"message": str(exc)}
        location = getattr(exc, "location", None)
        if location is not None:
            detail["location"] = str(location)
        report = JobReport(
            job.command, "error", 2, seed,
            [CheckRecord("input", "error", detail)],
        )
    except KernelError as exc:
        detail = {"message": str(exc), "kind": type(exc).__name__}
        certificate = getattr(exc, "certificate", None)
        cert_dict = {"data": _stringify(certificate)} if certificate is not None else None
        report = JobReport(
            job.command, "fail", 1, seed,
            [CheckRecord("kernel", "fail", detail)], cert_dict,
        )
    if bool((job.options or {}).get("timing")):
        report.elapsed_ms = int((time.perf_counter() - started) * 1000)
    return report


def _stringify(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_stringify(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _stringify(v) for k, v in value.items()}
    return str(value)


def _dispatch(command: str, doc: Document, seed: int):
    records: list[CheckRecord] = []
    certificate = None

    if command == "validate":
        for note in doc.validation_notes:
            records.append(CheckRecord("validate", "pass", {"note": note}))
        cocycle_consequences(doc.ctx)
        records.append(
            CheckRecord("validate", "pass", {"note": "phi consequence identities hold"})
        )
        if doc.algebra is not None and not doc.algebra.is_associative():
            records.append(
                CheckRecord("algebra-associativity", "fail", {"note": "algebra is not associative"})
            )
            return records, "fail", None
        return records, "pass", None

    if command in ("check-axioms", "construct-cur"):
        if doc.conformal is not None:
            C = doc.conformal
        elif doc.algebra is not None:
            if command == "construct-cur":
                try:
                    C = cur(doc.algebra, doc.ctx, require_associative=True)
                except NotAssociative as exc:
                    records.append(CheckRecord("construct-cur", "fail", {"message": str(exc)}))
                    return records, "fail", None
            else:
                C = cur(doc.algebra, doc.ctx)
        else:
            raise InputError("command needs a 'conformal' or 'algebra' section")
        report = C.check_axioms()
        if command == "construct-cur":
            structure = {}
            for i in range(C.n):
                for j in range(C.n):
                    row = [str(c) for c in C.structure[i][j]]
                    if any(s != "0" for s in row):
                        structure[f"{i + 1},{j + 1}"] = row
            records.append(
                CheckRecord(
                    "structure-constants",
                    "info",
                    {"degrees": [C.ctx.group.elements[d] for d in C.degrees], "structure": structure},
                )
            )
        records.append(
            CheckRecord(
                "axioms",
                "pass" if report.ok else "fail",
                {
                    "checked": report.checked,
                    **(
                        {
                            "first_violation": {
                                "kind": report.first.kind,
                                "indices": list(report.first.indices),
                                "detail": report.first.detail,
                            }
                        }
                        if report.first
                        else {}
                    ),
                },
            )
        )
        return records, ("pass" if report.ok else "fail"), None

    if command == "cend-assoc":
        if doc.cend_degrees is None:
            raise InputError("command needs a 'cend' section with degree labels")
        degree_bound = _option_int(doc.options, "degree_bound", 2)
        mutation = doc.options.get("mutation")
        if mutation is not None and mutation not in MUTATIONS:
            raise InputError(f"unknown mutation {mutation!r}; choose from {MUTATIONS}")
        rep = check_cend_associativity(
            doc.ctx, doc.cend_degrees, max_degree=degree_bound, mutation=mutation
        )
        detail = {"checked": rep.checked, "degree_bound": degree_bound}
        if mutation:
            detail["mutation"] = mutation
        if rep.failures:
            detail["first_failure"] = {
                "indices": list(rep.failures[0][0]),
                "entries": list(rep.failures[0][1:]),
            }
        records.append(CheckRecord("cend-associativity", "pass" if rep.ok else "fail", detail))
        ok = rep.ok
        supplied = [m for m in doc.cend_matrices if not m.is_zero()]
        if supplied:
            failures = 0
            for a in supplied:
                for b in supplied:
                    nu = conformal_shift(doc.ctx, a.degree(), b.degree())
                    for c in supplied:
                        lhs = cend_product(
                            cend_product(a, b, LAMBDA, mutation), c, MU, mutation
                        )
                        rhs = cend_product(
                            a, cend_product(b, c, nu, mutation), LAMBDA, mutation
                        )
                        if lhs != rhs:
                            failures += 1
            records.append(
                CheckRecord(
                    "cend-associativity-supplied",
                    "pass" if failures == 0 else "fail",
                    {"triples": len(supplied) ** 3, "failures": failures},
                )
            )
            ok = ok and failures == 0
        return records, ("pass" if ok else "fail"), None

    if command == "trivialize":
        tau = find_trivializing_cochain(doc.ctx)
        delta = coboundary_of(tau, doc.ctx)
        ok = delta == doc.ctx.phi
        records.append(
            CheckRecord(
                "trivialize",
                "pass" if ok else "fail",
                {
                    "tau": {
                        doc.group.elements[i]: _frac_str(v)
                        for i, v in enumerate(tau.values)
                        if v != 0
                    },
                    "verified_round_trip": ok,
                },
            )
        )
        return records, ("pass" if ok else "fail"), None

    if command == "decompose":
        if doc.algebra is None:
            raise InputError("command needs an 'algebra' section")
        rad = radical_fd(doc.algebra)
        if rad:
            records.append(
                CheckRecord("radical", "fail", {"dimension": len(rad)})
            )
            certificate = {"radical_basis": _stringify(rad)}
            return records, "fail", certificate
        records.append(CheckRecord("radical", "pass", {"dimension": 0}))
        blocks = decompose_semisimple_graded(doc.algebra)
        for idx, block in enumerate(blocks):
            records.append(
                CheckRecord(
                    f"block-{idx + 1}",
                    "info",
                    {
                        "dimension": block.dim,
                        "degrees": [doc.group.elements[d] for d in block.degrees],
                        "graded_simple": is_graded_simple(block),
                    },
                )
            )
        records.append(CheckRecord("decompose", "pass", {"blocks": len(blocks)}))
        return records, "pass", None

    if command == "recover":
        if doc.endv_basis is None:
            raise InputError("command needs an 'endv' section")
        fs = recover_fine_structure(doc.group, doc.endv_degrees, doc.endv_basis, seed=seed)
        chi_entries = {}
        for a in range(doc.group.order):
            for b in range(doc.group.order):
                v = fs.chi.value(a, b)
                if v != 0 and v != 1:
                    chi_entries[f"{doc.group.elements[a]},{doc.group.elements[b]}"] = _frac_str(v)
        records.append(
            CheckRecord(
                "recover",
                "pass",
                {
                    "gamma1": [doc.group.elements[g] for g in fs.fine.gamma1],
                    "reps": [doc.group.elements[g] for g in fs.fine.reps],
                    "sizes": list(fs.sizes()),
                    "chi_nontrivial": chi_entries,
                    "iota": {
                        doc.group.elements[g]: _stringify(m) for g, m in sorted(fs.iota.items())
                    },
                },
            )
        )
        return records, "pass", None

    if command == "simplicity":
        if doc.conformal is not None:
            C, source = doc.conformal, None
        elif doc.algebra is not None:
            C, source = cur(doc.algebra, doc.ctx), doc.algebra
        else:
            raise InputError("command needs a 'conformal' or 'algebra' section")
        rep = conformal_simplicity_suite(C, cur_source=source)
        verdict = {"simple": "pass", "not_simple": "fail", "inconclusive": "inconclusive"}[rep.verdict]
        records.append(
            CheckRecord(
                "simplicity",
                verdict,
                {"result": rep.verdict, "details": rep.details, "scope_note": rep.scope_note},
            )
        )
        if rep.certificate is not None:
            certificate = {"ideal_generators": str(rep.certificate)}
        return records, verdict, certificate

    raise InputError(f"unhandled command {command!r}")


# -- rendering ------------------------------------------------------------------


def report_to_dict(report: JobReport) -> dict:
    return {
        "command": report.command,
        "verdict": report.verdict,
        "exit_code": report.exit_code,
        "seed": report.seed,
        "conventions": report.conventions,
        "version": __version__,
        "records": [
            {"name": r.name, "verdict": r.verdict, "detail": r.detail} for r in report.records
        ],
        "certificate": report.certificate,
        **({"elapsed_ms": report.elapsed_ms} if report.elapsed_ms is not None else {}),
    }


def render_machine(report: JobReport) -> str:
    """Line-delimited JSON: header, one line per check, summary."""
    lines = [
        json.dumps(
            {
                "record": "header",
                "command": report.command,
                "seed": report.seed,
                "conventions": report.conventions,
                "version": __version__,
            },
            sort_keys=True,
        )
    ]
    for r in report.records:
        lines.append(
            json.dumps(
                {"record": "check", "name": r.name, "verdict": r.verdict, "detail": r.detail},
                sort_keys=True,
            )
        )
    if report.certificate is not None:
        lines.append(json.dumps({"record": "certificate", **report.certificate}, sort_keys=True))
    summary = {
        "record": "summary",
        "verdict": report.verdict,
        "exit_code": report.exit_code,
        "checks": len(report.records),
    }
    if report.elapsed_ms is not None:
        summary["elapsed_ms"] = report.elapsed_ms
    lines.append(json.dumps(summary, sort_keys=True))
    return "\n".join(lines) + "\n"


def render_human(report: JobReport) -> str:
    width = 26
    lines = [
        f"command      : {report.command}",
        f"conventions  : {report.conventions}",
        f"seed         : {report.seed}",
        "-" * 64,
    ]
    for r in report.records:
        detail = json.dumps(r.detail, sort_keys=True)
        if len(detail) > 90:
            detail = detail[:87] + "..."
        lines.append(f"{r.name:<{width}} {r.verdict:<13} {detail}")
    if report.certificate is not None:
        lines.append("-" * 64)
        lines.append("certificate:")
        lines.append(json.dumps(report.certificate, sort_keys=True, indent=2))
    lines.append("-" * 64)
    lines.append(f"verdict      : {report.verdict} (exit {report.exit_code})")
    if report.elapsed_ms is not None:
        lines.append(f"elapsed_ms   : {report.elapsed_ms}")
    return "\n".join(lines) + "\n"
