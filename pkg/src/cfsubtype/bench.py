"""Timing harness: run subtyping checks over a suite and keep one CSV row per pair."""

from __future__ import annotations

import csv
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO

from .gen import GenConfig, pairs
from .subtype import Budget, Verdict, check
from .syntax import parse_type, print_type
from .types import Type, ast_size

CSV_VERSION = "cfsubtype-bench v1"
COLUMNS = ("id", "nodes", "verdict", "micros", "visits")


@dataclass(frozen=True)
class BenchRecord:
    id: str
    nodes: int
    verdict: Verdict
    micros: int
    visits: int

    @property
    def kind(self) -> str:
        return self.id.rsplit("-", 1)[0]


@dataclass(frozen=True)
class BenchCase:
    id: str
    left: Type
    right: Type


# Suites ------------------------------------------------------------------

def read_suite(path: str | Path, kind: str = "pair") -> list[BenchCase]:
    """Read ``T <: U`` lines; blank lines and ``#`` comments are skipped."""
    cases = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            left, sep, right = line.partition(" <: ")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'T <: U'")
            cases.append(BenchCase(f"{kind}-{len(cases):05d}", parse_type(left), parse_type(right)))
    return cases


def format_pair(t: Type, u: Type) -> str:
    return f"{print_type(t)} <: {print_type(u)}"


def generated_suite(cfg: GenConfig, count: int, max_nodes: Optional[int] = None) -> list[BenchCase]:
    """``count`` valid then ``count`` invalid generated pairs."""
    cases = []
    for kind, valid in (("valid", True), ("invalid", False)):
        for i, (t, u) in enumerate(pairs(cfg, count, valid, min_size=1, max_nodes=max_nodes)):
            cases.append(BenchCase(f"{kind}-{i:05d}", t, u))
    return cases


# Running -----------------------------------------------------------------

def run_case(case: BenchCase, timeout: float, max_visits: int = 10**6) -> BenchRecord:
    start = time.perf_counter()
    outcome = check(case.left, case.right, Budget(max_visits, timeout))
    seconds = time.perf_counter() - start
    verdict = outcome.verdict
    # A verdict that arrives after the deadline counts as a timeout.
    if seconds > timeout:
        verdict = Verdict.UNKNOWN
    nodes = ast_size(case.left) + ast_size(case.right)
    return BenchRecord(case.id, nodes, verdict, round(seconds * 1e6), outcome.visits)


def _run_packed(args) -> BenchRecord:
    return run_case(*args)


def run_bench(cases: Sequence[BenchCase], timeout: float = 30.0, max_visits: int = 10**6,
              workers: int = 1) -> list[BenchRecord]:
    """Check every case; records come back in input order."""
    jobs = [(c, timeout, max_visits) for c in cases]
    if workers <= 1 or len(jobs) <= 1:
        return [_run_packed(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_packed, jobs, chunksize=max(1, len(jobs) // (workers * 8))))


# CSV ---------------------------------------------------------------------

def write_csv(records: Iterable[BenchRecord], out: TextIO) -> None:
    out.write(f"# {CSV_VERSION}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([r.id, r.nodes, r.verdict.value, r.micros, r.visits])


def read_csv(src: TextIO) -> list[BenchRecord]:
    first = src.readline().strip()
    if first != f"# {CSV_VERSION}":
        raise ValueError(f"not a bench CSV (expected header '# {CSV_VERSION}')")
    reader = csv.DictReader(src)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError(f"unexpected columns {reader.fieldnames}")
    return [BenchRecord(row["id"], int(row["nodes"]), Verdict(row["verdict"]),
                        int(row["micros"]), int(row["visits"])) for row in reader]


# Summary -----------------------------------------------------------------

@dataclass(frozen=True)
class GroupSummary:
    kind: str
    count: int
    true: int
    false: int
    timeouts: int
    median_us: Optional[float]
    p90_us: Optional[float]
    p99_us: Optional[float]


def _percentile(xs: list[int], q: int) -> Optional[float]:
    if not xs:
        return None
    if len(xs) == 1:
        return float(xs[0])
    return statistics.quantiles(xs, n=100, method="inclusive")[q - 1]


def summarize(records: Sequence[BenchRecord]) -> list[GroupSummary]:
    """One row per kind (in first-seen order) plus an ``all`` row."""
    kinds = list(dict.fromkeys(r.kind for r in records))
    groups = [(k, [r for r in records if r.kind == k]) for k in kinds]
    groups.append(("all", list(records)))
    out = []
    for kind, rs in groups:
        # Timing statistics cover decided checks only; timeouts are counted apart.
        times = sorted(r.micros for r in rs if r.verdict is not Verdict.UNKNOWN)
        out.append(GroupSummary(
            kind, len(rs),
            sum(r.verdict is Verdict.TRUE for r in rs),
            sum(r.verdict is Verdict.FALSE for r in rs),
            sum(r.verdict is Verdict.UNKNOWN for r in rs),
            statistics.median(times) if times else None,
            _percentile(times, 90), _percentile(times, 99)))
    return out


def format_summary(rows: Sequence[GroupSummary]) -> str:
    def us(v):
        return "-" if v is None else f"{v:.0f}"
    lines = [f"{'kind':<10}{'count':>7}{'true':>7}{'false':>7}{'timeout':>9}"
             f"{'median_us':>12}{'p90_us':>10}{'p99_us':>10}"]
    for r in rows:
        lines.append(f"{r.kind:<10}{r.count:>7}{r.true:>7}{r.false:>7}{r.timeouts:>9}"
                     f"{us(r.median_us):>12}{us(r.p90_us):>10}{us(r.p99_us):>10}")
    return "\n".join(lines)
