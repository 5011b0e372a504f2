"""Command line: ``supercong sweep``, ``supercong check`` and ``supercong eval``."""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from importlib import resources
from pathlib import Path
from typing import Iterator, Sequence, TextIO

from . import check_dsl
from .exact_arith import SuperCongError
from .kernel import BACKEND
from .sweep import EXIT_ERROR, ReportWriter, SweepSpec, run_sweep


def builtin_checks() -> list[Path]:
    """The shipped check files, one per catalog statement."""
    root = resources.files("supercong") / "checks"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".chk"))


def _expand(paths: Sequence[str | Path]) -> list[Path]:
    out: list[Path] = []
    for raw in paths:
        p = Path(raw)
        out.extend(sorted(p.glob("*.chk")) if p.is_dir() else [p])
    return out


def run_checks(paths: Sequence[str | Path], out: TextIO, fmt: str = "jsonl", timestamp: bool = True,
               overrides: dict[str, int] | None = None, err: TextIO | None = None) -> int:
    """Parse and evaluate check files; exit code 0 ok, 1 failure, 2 error."""
    err = err or sys.stderr
    files = _expand(paths)
    parsed = []
    for path in files:
        try:
            text = path.read_text(encoding="utf-8")
            parsed.append((path, check_dsl.parse_file(text, str(path))))
        except check_dsl.ParseError as exc:
            print(f"parse error: {exc}", file=err)
            return EXIT_ERROR
        except OSError as exc:
            print(f"cannot read {path}: {exc}", file=err)
            return EXIT_ERROR
    writer = ReportWriter(out, fmt, timestamp)
    writer.header(kind="check", files=[str(p) for p in files])
    for path, cf in parsed:
        label = path.stem
        pairs = cf.assertions()
        for i, (env, assertion) in enumerate(pairs):
            name = label if len(pairs) == 1 else f"{label}#{i + 1}"
            env.update(overrides or {})
            try:
                rec = check_dsl.evaluate(assertion, env, name).to_record()
            except (SuperCongError, ZeroDivisionError) as exc:
                line, col = assertion.pos
                rec = {"statement": name, "params": env,
                       "error": f"{path}:{line}:{col}: {type(exc).__name__}: {exc}"}
            writer.record(rec)
    writer.summary()
    return writer.exit_code()


def run_eval(text: str, out: TextIO, bindings: dict[str, int]) -> int:
    """Evaluate a bare expression, or a snippet containing assertions."""
    stripped = text.lstrip()
    if stripped.startswith(("assert", "let")):
        cf = check_dsl.parse_file(text, "<eval>")
        code = 0
        for i, (env, assertion) in enumerate(cf.assertions()):
            env.update(bindings)
            rep = check_dsl.evaluate(assertion, env, f"eval#{i + 1}")
            out.write(json.dumps(rep.to_record()) + "\n")
            code = max(code, 0 if rep.passed else 1)
        return code
    node = check_dsl.parse_expr(text, set(bindings))
    value = check_dsl.Evaluator(bindings).value(node)
    out.write(("inf" if isinstance(value, float) else str(value)) + "\n")
    return 0


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _m_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO:HI, e.g. -10:10") from None


def _binding(text: str) -> tuple[str, int]:
    name, eq, value = text.partition("=")
    if not eq:
        raise argparse.ArgumentTypeError("expected NAME=INT")
    try:
        return name.strip(), int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer") from None


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["jsonl", "csv"], default=None)
    p.add_argument("--out", help="write reports here instead of standard output")
    p.add_argument("--no-timestamp", action="store_true",
                   help="leave the timestamp out of the header (for byte comparison)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="supercong", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {_version()} ({BACKEND} kernel)")
    sub = ap.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run built-in verifiers over parameter grids")
    sw.add_argument("--spec", help="JSON file with SweepSpec fields; flags override it")
    sw.add_argument("--statements", help="comma-separated ids, or 'all'")
    sw.add_argument("--primes", type=_ints, help="explicit odd primes, e.g. 3,5,7")
    sw.add_argument("--J", type=int, dest="J", help="h offsets: h = h0 + j p with |j| <= J")
    sw.add_argument("--m-range", type=_m_range, help="LO:HI, zero excluded")
    for name in ("n", "a", "alpha", "l", "s", "t", "d", "pa"):
        sw.add_argument(f"--{name}-max", type=int)
    sw.add_argument("--d-policy", choices=["all", "interior"])
    sw.add_argument("--jobs", type=int)
    sw.add_argument("--guard", type=int, help="extra valuation headroom for the modular kernel")
    sw.add_argument("--seed", type=int, help="seed for --sample")
    sw.add_argument("--sample", type=int, help="run a random subset of this many tuples")
    sw.add_argument("--mutate", action="store_true", help="add one to every right-hand side")
    _add_output(sw)

    ck = sub.add_parser("check", help="evaluate check files")
    ck.add_argument("paths", nargs="*", help="files or directories of *.chk")
    ck.add_argument("--builtin", action="store_true", help="include the shipped corpus")
    ck.add_argument("--set", type=_binding, action="append", default=[], metavar="NAME=INT",
                    help="override a let binding in every file")
    _add_output(ck)

    ev = sub.add_parser("eval", help="evaluate one expression or assertion")
    ev.add_argument("text")
    ev.add_argument("--set", type=_binding, action="append", default=[], metavar="NAME=INT")
    return ap


def _version() -> str:
    from . import __version__

    return __version__


def _spec_from_args(args: argparse.Namespace) -> SweepSpec:
    data: dict = {}
    if args.spec:
        with open(args.spec, encoding="utf-8") as fh:
            data = json.load(fh)
    spec = SweepSpec.from_json(data)
    if args.statements:
        spec.statements = [s.strip() for s in args.statements.split(",") if s.strip()]
    for key in ("primes", "J", "m_range", "n_max", "a_max", "alpha_max", "l_max", "s_max",
                "t_max", "d_max", "pa_max", "d_policy", "jobs", "guard", "seed", "sample", "format"):
        val = getattr(args, key)
        if val is not None:
            setattr(spec, key, val)
    spec.mutate = spec.mutate or args.mutate
    return spec


@contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            spec = _spec_from_args(args)
            spec.validate()
            with _output(args.out) as out:
                return run_sweep(spec, out, timestamp=not args.no_timestamp)
        if args.command == "check":
            paths = list(args.paths) + (builtin_checks() if args.builtin else [])
            with _output(args.out) as out:
                return run_checks(paths, out, args.format or "jsonl", not args.no_timestamp,
                                  dict(args.set))
        return run_eval(args.text, sys.stdout, dict(args.set))
    except (SuperCongError, OSError, ValueError, ZeroDivisionError) as exc:
        print(f"supercong: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
