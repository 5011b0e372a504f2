"""Parameter grids and the batch runner behind ``supercong sweep``."""
from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Iterator, TextIO

from . import __version__
from .exact_arith import ParameterError, SuperCongError, is_prime
from .kernel import BACKEND
from .verifiers import STATEMENTS, CongruenceReport, verify

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def odd_primes(limit: int) -> list[int]:
    return [q for q in range(3, limit + 1) if is_prime(q)]


def half_class(p: int, J: int) -> list[int]:
    """h = h0 + j p with 2 h0 = 1 (mod p), |j| <= J."""
    h0 = (p + 1) // 2
    return [h0 + j * p for j in range(-J, J + 1)]


@dataclass
class SweepSpec:
    """Statement selection plus parameter ranges.

    Unset (None) ranges fall back to each statement's default grid, which
    reproduces the acceptance grids.  A set range applies to every selected
    statement that reads that parameter.
    """

    statements: list[str] = field(default_factory=lambda: ["all"])
    primes: list[int] | None = None
    J: int | None = None
    m_range: tuple[int, int] | None = None
    n_max: int | None = None
    a_max: int | None = None
    alpha_max: int | None = None
    l_max: int | None = None
    s_max: int | None = None
    t_max: int | None = None
    d_max: int | None = None
    pa_max: int | None = None
    d_policy: str = "all"
    format: str = "jsonl"
    jobs: int = 1
    guard: int = 0
    seed: int | None = None
    sample: int | None = None
    mutate: bool = False

    def selected(self) -> list[str]:
        if self.statements in (["all"], ["ALL"], []):
            return list(STATEMENTS)
        bad = [s for s in self.statements if s not in STATEMENTS]
        if bad:
            raise ParameterError(f"unknown statement(s): {', '.join(bad)}")
        # catalog order, duplicates dropped
        return [s for s in STATEMENTS if s in self.statements]

    def validate(self) -> None:
        self.selected()
        if self.primes is not None:
            bad = [q for q in self.primes if q < 3 or not is_prime(q)]
            if bad:
                raise ParameterError(f"not odd primes: {bad}")
        if self.d_policy not in ("all", "interior"):
            raise ParameterError("d-policy must be 'all' or 'interior'")
        if self.format not in ("jsonl", "csv"):
            raise ParameterError("format must be 'jsonl' or 'csv'")
        if self.jobs < 1:
            raise ParameterError("jobs must be >= 1")
        if self.m_range is not None and self.m_range[0] > self.m_range[1]:
            raise ParameterError("empty m range")

    @classmethod
    def from_json(cls, data: dict) -> "SweepSpec":
        data = dict(data)
        if "m_range" in data and data["m_range"] is not None:
            data["m_range"] = tuple(data["m_range"])
        if isinstance(data.get("statements"), str):
            data["statements"] = [s.strip() for s in data["statements"].split(",")]
        try:
            return cls(**data)
        except TypeError as exc:
            raise ParameterError(f"bad sweep spec: {exc}") from None


def _pick(value, default):
    return default if value is None else value


def _ms(spec: SweepSpec, default=(-10, 10)) -> list[int]:
    lo, hi = _pick(spec.m_range, default)
    return [m for m in range(lo, hi + 1) if m != 0]


def _grid(sid: str, spec: SweepSpec) -> Iterator[dict[str, int]]:
    P = lambda default: _pick(spec.primes, default)  # noqa: E731
    J = _pick(spec.J, 3)
    if sid == "PS06":
        for p in P(odd_primes(31)):
            top = p if spec.d_policy == "all" else p - 1
            for d in range(top + 1):
                yield dict(p=p, d=d)
    elif sid == "ST10":
        for p in P(odd_primes(13)):
            for a in range(1, _pick(spec.a_max, 4) + 1):
                yield dict(p=p, a=a)
    elif sid in ("E11", "E14"):
        for p in P(odd_primes(13 if sid == "E11" else 31)):
            for m in _ms(spec):
                yield dict(p=p, m=m)
    elif sid in ("E12", "E13"):
        for p in P(odd_primes(13)):
            for m in _ms(spec):
                for n in range(1, _pick(spec.n_max, 12) + 1):
                    yield dict(p=p, m=m, n=n)
    elif sid == "E15":
        for p in P(odd_primes(13)):
            hs = sorted(set(range(-10, 11)) | set(half_class(p, J)))
            for h in hs:
                for a in range(1, _pick(spec.a_max, 2) + 1):
                    yield dict(p=p, h=h, a=a)
    elif sid == "T11a":
        pa_max = _pick(spec.pa_max, 30000)
        for p in P(odd_primes(31)):
            for h in half_class(p, J):
                for a in range(1, _pick(spec.a_max, 3) + 1):
                    if p**a <= pa_max:
                        yield dict(p=p, h=h, a=a)
    elif sid == "T11b":
        for p in P([3, 5, 7, 11, 13]):
            for h in half_class(p, J):
                for n in range(1, _pick(spec.n_max, 243) + 1):
                    yield dict(p=p, h=h, n=n)
    elif sid == "T12":
        for p in P([3, 5, 7, 11, 13]):
            for m in _ms(spec):
                for n in range(1, _pick(spec.n_max, 50) + 1):
                    yield dict(p=p, m=m, n=n)
    elif sid == "L21":
        for p in P([3, 5, 7]):
            for n in range(1, _pick(spec.n_max, 12) + 1):
                for alpha in range(1, _pick(spec.alpha_max, 2) + 1):
                    for k in range(1, 2 * p * p + 1):
                        yield dict(p=p, n=n, alpha=alpha, k=k)
    elif sid == "L22":
        top = _pick(spec.a_max, 6)
        rs = _pick(spec.s_max, 3)
        for p in P([3, 5, 7]):
            for a in range(1, top + 1):
                for b in range(1, top + 1):
                    for r in range(1, rs + 1):
                        for s in range(1, rs + 1):
                            if p**s * b <= p**r * a:
                                yield dict(p=p, a=a, b=b, r=r, s=s)
    elif sid in ("L23a", "L23b", "L23c", "L23d"):
        tm = _pick(spec.t_max, 5)
        for p in P([3, 5, 7]):
            for m in sorted(4 + p * t for t in range(-tm, tm + 1) if t):
                if sid == "L23d":
                    for a in range(1, _pick(spec.a_max, 3) + 1):
                        yield dict(p=p, m=m, a=a)
                else:
                    for n in range(1, _pick(spec.n_max, 81) + 1):
                        yield dict(p=p, m=m, n=n)
    elif sid in ("L24a", "L24b", "L24c"):
        for p in P([3, 5, 7]):
            for h in half_class(p, J):
                for alpha in range(_pick(spec.alpha_max, 3) + 1):
                    for l in range(_pick(spec.l_max, 20) + 1):
                        if sid == "L24c" and l % 3 != 1:
                            continue
                        yield dict(p=p, h=h, alpha=alpha, l=l)
    elif sid == "L25":
        for p in P([3, 5, 7]):
            for m in _ms(spec, (-8, 8)):
                if m % p == 0:
                    continue
                for s in range(1, _pick(spec.s_max, 3) + 1):
                    for l in range(_pick(spec.l_max, 12) + 1):
                        yield dict(p=p, m=m, s=s, l=l)
    elif sid == "L26":
        for p in P([3, 5, 7, 11]):
            for h in half_class(p, J):
                for a in range(1, _pick(spec.a_max, 3) + 1):
                    yield dict(p=p, h=h, a=a)
    elif sid == "E47":
        for p in P([3, 5]):
            for d in range(1, _pick(spec.d_max, 4) + 1):
                if d % p == 0:
                    continue
                for a in range(1, _pick(spec.a_max, 3) + 1):
                    for s in range(a):
                        for k in range(p ** (a - s) * d):
                            yield dict(p=p, d=d, a=a, s=s, k=k)
    elif sid == "SN3":
        for n in range(1, _pick(spec.n_max, 2000) + 1):
            yield dict(n=n)
    elif sid == "UDIV":
        for p in P(odd_primes(50)):
            for A in range(-6, 7):
                for B in range(-6, 7):
                    if B % p:
                        yield dict(p=p, A=A, B=B)
    else:  # pragma: no cover - catalog and grids are kept in sync by tests
        raise ParameterError(f"no grid for {sid}")


def grid(sid: str, spec: SweepSpec) -> list[dict[str, int]]:
    """Parameter tuples for one statement in lexicographic order."""
    names = STATEMENTS[sid].params
    points = sorted(_grid(sid, spec), key=lambda d: tuple(d[k] for k in names))
    return points


def tasks(spec: SweepSpec) -> list[tuple[str, dict[str, int]]]:
    out = [(sid, params) for sid in spec.selected() for params in grid(sid, spec)]
    if spec.sample is not None and spec.sample < len(out):
        rng = random.Random(spec.seed)
        keep = sorted(rng.sample(range(len(out)), spec.sample))
        out = [out[i] for i in keep]
    return out


def _run_one(job: tuple[str, dict[str, int], bool, int]) -> dict:
    sid, params, mutate, guard = job
    try:
        return verify(sid, params, mutate=mutate, guard=guard).to_record()
    except SuperCongError as exc:
        return {"statement": sid, "params": params, "error": f"{type(exc).__name__}: {exc}"}


def run_records(jobs: Iterable[tuple[str, dict[str, int]]], n_jobs: int = 1,
                mutate: bool = False, guard: int = 0) -> Iterator[dict]:
    """Yield report records in input order, running on ``n_jobs`` processes."""
    work = [(sid, params, mutate, guard) for sid, params in jobs]
    if n_jobs <= 1 or len(work) < 2:
        yield from map(_run_one, work)
        return
    chunk = max(1, len(work) // (n_jobs * 16))
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        yield from pool.map(_run_one, work, chunksize=chunk)


class ReportWriter:
    """Writes header, records and summary as JSONL or CSV."""

    CSV_FIELDS = ["statement", "params", "modulus", "lhs", "rhs", "pass", "skipped", "reason",
                  "valuation_measured", "valuation_required", "witness", "note", "error"]

    def __init__(self, out: TextIO, fmt: str = "jsonl", timestamp: bool = True):
        self.out = out
        self.fmt = fmt
        self.timestamp = timestamp
        self.counts = {"pass": 0, "skip": 0, "fail": 0, "error": 0}
        self._csv = csv.DictWriter(out, self.CSV_FIELDS, lineterminator="\n") if fmt == "csv" else None

    def header(self, **info) -> None:
        head = {"type": "header", "tool": "supercong", "version": __version__, **info}
        if self.timestamp:
            head["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        if self._csv is None:
            self.out.write(json.dumps(head) + "\n")
        else:
            self.out.write("# " + json.dumps(head) + "\n")
            self._csv.writeheader()

    def record(self, rec: dict) -> None:
        if "error" in rec:
            self.counts["error"] += 1
        elif rec.get("skipped"):
            self.counts["skip"] += 1
        elif rec.get("pass"):
            self.counts["pass"] += 1
        else:
            self.counts["fail"] += 1
        if self._csv is None:
            self.out.write(json.dumps(rec) + "\n")
        else:
            row = dict(rec)
            row["params"] = ";".join(f"{k}={v}" for k, v in rec["params"].items())
            self._csv.writerow(row)

    def summary(self) -> None:
        if self._csv is None:
            self.out.write(json.dumps({"type": "summary", **self.counts}) + "\n")
        else:
            self.out.write("# summary " + " ".join(f"{k}={v}" for k, v in self.counts.items()) + "\n")

    def exit_code(self) -> int:
        if self.counts["error"]:
            return EXIT_ERROR
        return EXIT_FAIL if self.counts["fail"] else EXIT_OK


def run_sweep(spec: SweepSpec, out: TextIO, timestamp: bool = True) -> int:
    """Run every (statement, tuple) of ``spec`` and stream reports to ``out``."""
    spec.validate()
    work = tasks(spec)
    writer = ReportWriter(out, spec.format, timestamp)
    info = {k: v for k, v in asdict(spec).items() if k not in ("jobs", "format")}
    writer.header(kind="sweep", backend=BACKEND, spec=info)
    for rec in run_records(work, spec.jobs, spec.mutate, spec.guard):
        writer.record(rec)
    writer.summary()
    return writer.exit_code()


def sweep_to_string(spec: SweepSpec, timestamp: bool = False) -> tuple[int, str]:
    buf = io.StringIO()
    code = run_sweep(spec, buf, timestamp)
    return code, buf.getvalue()


def reports(spec: SweepSpec) -> Iterator[CongruenceReport]:
    """In-process convenience for tests: the reports themselves."""
    spec.validate()
    for sid, params in tasks(spec):
        yield verify(sid, params, mutate=spec.mutate, guard=spec.guard)
