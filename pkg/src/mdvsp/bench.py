"""Benchmark harness: run heuristics over an instance directory, write CSV.

Percent errors are exact fractions; the CSV shows them rounded half-up to
two decimals.
"""

from __future__ import annotations

import csv
import io
import logging
import signal
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Mapping

from . import heuristics
from .backends import load_backend
from .errors import (
    BackendTimeoutError,
    BackendUnavailableError,
    DecompositionError,
    InfeasibleError,
    InstanceFormatError,
    InvalidInstanceError,
    UnrepairableSubtourError,
)
from .instances import read_instance
from .reference import BEST_KNOWN

log = logging.getLogger(__name__)

CSV_COLUMNS = ("name", "heuristic", "z", "z0", "pct_error", "time_s", "seed", "status")
STATUSES = ("ok", "infeasible", "unrepairable", "invalid", "disabled", "timeout", "error")


def percent_error(z: int, z0: int) -> Fraction:
    """``100 * (z - z0) / z0`` as an exact fraction."""
    if z0 <= 0:
        raise ValueError(f"best-known value must be positive, got {z0}")
    return Fraction(100 * (int(z) - int(z0)), int(z0))


def format_percent(p: Fraction, places: int = 2) -> str:
    """Round half away from zero to ``places`` decimals, exactly."""
    scale = 10 ** places
    scaled = abs(p) * scale
    q = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    sign = "-" if p < 0 and q else ""
    whole, frac = divmod(q, scale)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


@dataclass(frozen=True)
class BenchmarkRecord:
    name: str
    heuristic: str
    z: int | None
    z0: int | None
    time_s: float
    seed: int | None
    status: str

    @property
    def pct(self) -> Fraction | None:
        if self.z is None or self.z0 is None:
            return None
        return percent_error(self.z, self.z0)

    def row(self) -> list[str]:
        pct = self.pct
        return [
            self.name,
            self.heuristic,
            "" if self.z is None else str(self.z),
            "" if self.z0 is None else str(self.z0),
            "" if pct is None else format_percent(pct),
            f"{self.time_s:.3f}",
            "" if self.seed is None else str(self.seed),
            self.status,
        ]


@dataclass(frozen=True)
class BenchConfig:
    heuristics: tuple[str, ...] = ("h1",)
    seeds: tuple[int, ...] = (0,)
    pool_size: int = 10
    backend: str | None = None
    backend_config: str | None = None
    timeout: float | None = 3600.0
    workers: int = 1
    max_rounds: int = 200
    best_known: Mapping[str, int] = field(default_factory=lambda: dict(BEST_KNOWN))
    # optional overrides: heuristic -> callable(instance, seed) returning an objective
    runners: Mapping[str, Callable] = field(default_factory=dict)


class _Timeout(Exception):
    pass


def _alarm(signum, frame):
    raise _Timeout()


def _solve(inst, heuristic: str, seed: int | None, cfg: BenchConfig) -> int:
    if heuristic in cfg.runners:
        result = cfg.runners[heuristic](inst, seed)
        return int(getattr(result, "objective", result))
    if heuristic == "h1":
        return heuristics.h1(inst).objective
    if heuristic == "h2":
        return heuristics.h2(inst, cfg.pool_size, seed or 0).objective
    if heuristic == "h3":
        backend = load_backend(cfg.backend, cfg.backend_config)
        return heuristics.h3(inst, backend, max_rounds=cfg.max_rounds).objective
    raise ValueError(f"unknown heuristic {heuristic!r}")


def run_task(path: str, heuristic: str, seed: int | None, cfg: BenchConfig) -> BenchmarkRecord:
    """Run one heuristic on one file; every failure becomes a status."""
    name = Path(path).stem
    z0 = cfg.best_known.get(name)
    t0 = time.perf_counter()
    use_alarm = bool(cfg.timeout) and threading.current_thread() is threading.main_thread()
    if use_alarm:
        old = signal.signal(signal.SIGALRM, _alarm)
        signal.setitimer(signal.ITIMER_REAL, cfg.timeout)
    z = None
    try:
        inst = read_instance(path)
        z = _solve(inst, heuristic, seed, cfg)
        status = "ok"
    except _Timeout:
        status = "timeout"
    except BackendTimeoutError:
        status = "timeout"
    except BackendUnavailableError as exc:
        log.warning("%s %s disabled: %s", name, heuristic, exc)
        status = "disabled"
    except (InstanceFormatError, InvalidInstanceError) as exc:
        log.warning("%s: %s", name, exc)
        status = "invalid"
    except InfeasibleError:
        status = "infeasible"
    except (UnrepairableSubtourError, DecompositionError):
        status = "unrepairable"
    except Exception as exc:  # recorded, never fatal for the batch
        log.warning("%s %s failed: %r", name, heuristic, exc)
        status = "error"
    finally:
        if use_alarm:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)
    return BenchmarkRecord(name, heuristic, z, z0, time.perf_counter() - t0, seed, status)


def instance_files(directory: str | Path) -> list[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise NotADirectoryError(f"not a directory: {d}")
    return sorted(p for p in d.iterdir() if p.is_file() and not p.name.startswith("."))


def _tasks(files: Iterable[Path], cfg: BenchConfig):
    for p in files:
        for h in cfg.heuristics:
            if h == "h2":
                for s in cfg.seeds:
                    yield str(p), h, s
            else:
                yield str(p), h, None


def _run_star(args):
    return run_task(*args)


def run_benchmark(directory: str | Path, cfg: BenchConfig | None = None) -> list[BenchmarkRecord]:
    """One record per (instance, heuristic), and per seed for h2, sorted."""
    cfg = cfg or BenchConfig()
    tasks = [(*t, cfg) for t in _tasks(instance_files(directory), cfg)]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            records = list(ex.map(_run_star, tasks))
    else:
        records = [run_task(*t) for t in tasks]
    return sorted(records, key=lambda r: (r.name, r.heuristic, -1 if r.seed is None else r.seed))


def records_csv(records: Iterable[BenchmarkRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def write_csv(records: Iterable[BenchmarkRecord], path: str | Path) -> None:
    Path(path).write_text(records_csv(records), encoding="utf-8")
