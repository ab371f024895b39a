"""Batch CLI, a thin client of the job runner.

The default mode executes in process through exactly the same dispatch the
HTTP service uses; `--server URL` posts the job to a running service instead.
`gcalg serve` starts the service.  Exit codes: 0 pass, 1 mathematical failure
(with certificate), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .jobs import COMMANDS, JobReport, CheckRecord, JobSpec, render_human, render_machine, run


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcalg",
        description="Exact kernel for finite graded associative conformal algebras "
        "over the affine line.",
    )
    sub = parser.add_subparsers(dest="mode")

    job = sub.add_parser("run", help="run a batch command against an input file")
    job.add_argument("--input", required=True, help="path to a JSON input document")
    job.add_argument("--command", required=True, choices=COMMANDS)
    job.add_argument("--degree-bound", type=int, default=2, dest="degree_bound")
    job.add_argument("--seed", type=int, default=0)
    job.add_argument("--format", choices=("human", "machine"), default="human")
    job.add_argument("--server", default=None, help="POST the job to a running service")
    job.add_argument("--timing", action="store_true", help="append elapsed time (non-deterministic)")
    job.add_argument("--mutation", default=None, help="planted sign mutation for cend-assoc")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8023)
    return parser


def _run_job(args) -> int:
    try:
        with open(args.input) as handle:
            document = json.load(handle)
    except FileNotFoundError:
        print(f"input file {args.input!r} does not exist", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"invalid JSON in {args.input!r}: line {exc.lineno}, column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return 2
    options = {"degree_bound": args.degree_bound, "seed": args.seed}
    if args.timing:
        options["timing"] = True
    if args.mutation:
        options["mutation"] = args.mutation
    if args.server:
        report = _post_to_server(args.server, args.command, document, options)
    else:
        report = run(JobSpec(args.command, document, options))
    text = render_human(report) if args.format == "human" else render_machine(report)
    sys.stdout.write(text)
    return report.exit_code


def _post_to_server(server: str, command: str, document: dict, options: dict) -> JobReport:
    import httpx

    response = httpx.post(
        server.rstrip("/") + "/jobs",
        json={"command": command, "document": document, "options": options},
        timeout=300.0,
    )
    response.raise_for_status()
    data = response.json()
    return JobReport(
        command=data["command"],
        verdict=data["verdict"],
        exit_code=data["exit_code"],
        seed=data["seed"],
        records=[CheckRecord(r["name"], r["verdict"], r.get("detail") or {}) for r in data["records"]],
        certificate=data.get("certificate"),
        conventions=data["conventions"],
        elapsed_ms=data.get("elapsed_ms"),
    )


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # allow flag-only invocation without the explicit "run" word
    if argv and argv[0] not in ("run", "serve", "-h", "--help"):
        argv = ["run"] + argv
    args = _build_parser().parse_args(argv)
    if args.mode == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    if args.mode == "run":
        return _run_job(args)
    _build_parser().print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
