"""Stage orchestration: task lists, a process pool, checkpoints and canonical output.

Tasks are pure functions of their arguments, so the certificate file produced by
a stage depends only on the stage configuration, never on the worker count or
on how often the run was interrupted.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field

from sympy import primerange

from .certificates import SieveCertificate, write_certificates
from .errors import ConfigError, FibsiftError, NoWitness

log = logging.getLogger(__name__)

STAGES = ("oracle", "irred", "three-curve", "m1", "kraus", "linforms", "binom", "final")
DEFAULT_M0 = {"three-curve": (2, -2, -1), "m1": (2, -2, -1), "kraus": (2, -2, -1),
              "binom": (-2, -1), "final": (-2, -1)}


class WorkerPanic(FibsiftError):
    def __init__(self, task_id, cause):
        super().__init__(f"task {task_id} failed twice: {cause!r}")
        self.task_id = task_id


@dataclass
class StageConfig:
    stage: str
    p_min: int = 5
    p_max: int = 100
    m0: tuple = ()
    workers: int = 1
    checkpoint: str | None = None
    precision: int = 256
    k_bound: int = 2000
    fixtures: str | None = None
    k_max: int = 200
    steps: int = 2
    ells: tuple = (3, 5, 7)
    checkpoint_every: int = 1000

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ConfigError(f"unknown stage {self.stage!r}")
        env = os.environ.get("FIBSIFT_WORKERS")
        if env:
            try:
                self.workers = int(env)
            except ValueError as exc:
                raise ConfigError(f"FIBSIFT_WORKERS={env!r} is not an integer") from exc
        if self.workers < 1:
            raise ConfigError("worker count must be >= 1")
        if self.p_min > self.p_max:
            raise ConfigError(f"empty p-range [{self.p_min}, {self.p_max}]")
        if not self.m0:
            self.m0 = DEFAULT_M0.get(self.stage, ())
        self.m0 = tuple(self.m0)
        if self.stage == "oracle" and self.k_max < 9:
            raise ConfigError("k_max >= 9 required")

    def fingerprint(self) -> str:
        """Hash of everything that determines the output (worker count and paths excluded)."""
        d = asdict(self)
        for k in ("workers", "checkpoint", "checkpoint_every"):
            d.pop(k)
        return hashlib.sha256(json.dumps(d, sort_keys=True, default=list).encode()).hexdigest()[:16]


# ---------------------------------------------------------------- tasks

def build_tasks(cfg: StageConfig) -> list[tuple]:
    s = cfg.stage
    primes = [p for p in primerange(max(cfg.p_min, 5), cfg.p_max + 1)]
    if s == "oracle":
        return [("oracle", cfg.k_max)]
    if s == "irred":
        from .galois_sieve import m_set
        ms = m_set()
        chunks = [tuple(ms[i:i + 60]) for i in range(0, len(ms), 60)]
        return [("irred-small", p) for p in (5, 7, 13)] + [("irred-res", c) for c in chunks]
    if s == "three-curve":
        return [("three-curve", m0) for m0 in cfg.m0]
    if s == "m1":
        return [("m1", m0, i) for m0 in cfg.m0 for i in range(1, cfg.steps + 1)]
    if s == "kraus":
        return [("kraus", p, m0, cfg.k_bound) for p in primes for m0 in cfg.m0]
    if s == "linforms":
        from .linforms import _PIPELINES
        return [("linforms", name, cfg.precision) for name in _PIPELINES]
    if s == "binom":
        return [("binom", p, m0) for p in primes for m0 in cfg.m0]
    if s == "final":
        return [("final", p, m0, tuple(cfg.ells), cfg.fixtures) for p in primes for m0 in cfg.m0]
    raise ConfigError(s)


def task_id(task: tuple) -> str:
    return json.dumps(list(task), default=list)


def execute(task: tuple) -> list[dict]:
    """Run one task; returns certificate records (picklable, schema-encoded)."""
    t0 = time.perf_counter()
    certs = _execute(task)
    ms = int((time.perf_counter() - t0) * 1000)
    out = []
    for c in certs:
        c.runtime_ms = ms
        out.append(c.to_record())
    return out


def _execute(task: tuple) -> list[SieveCertificate]:
    kind = task[0]
    if kind == "oracle":
        from .oracle import oracle_certificate
        return [oracle_certificate(task[1])]
    if kind == "irred-small":
        from .galois_sieve import irreducibility_small_p
        return [irreducibility_small_p(task[1])]
    if kind == "irred-res":
        from .errors import BadGcd
        from .galois_sieve import irreducibility_resultant
        out = []
        for m in task[1]:
            try:
                out.append(irreducibility_resultant(m))
            except BadGcd as exc:
                out.append(SieveCertificate("irreducibility-resultant", None, m, None, [],
                                            f"survives:{exc.factors}", {}))
        return out
    if kind == "three-curve":
        from .galois_sieve import three_curve_certificate
        return [three_curve_certificate(task[1])]
    if kind == "m1":
        from .galois_sieve import m1_enlarge
        try:
            return [m1_enlarge(task[1], task[2])]
        except NoWitness as exc:
            return [SieveCertificate("m1-step", None, task[2], task[1], [], f"survives:m={exc.m}", {})]
    if kind == "kraus":
        from .kraus import kraus_criterion
        _, p, m0, k_bound = task
        try:
            return [kraus_criterion(p, m0, k_bound)]
        except NoWitness:
            return [SieveCertificate("kraus", p, None, m0, [], "survives:no-q", {"k_bound": k_bound})]
    if kind == "linforms":
        from .certreal import certify
        from .linforms import _PIPELINES, linforms_certificates
        _, name, prec = task
        rep = certify(lambda pr: _PIPELINES[name](pr), prec)
        return linforms_certificates(prec, [rep])
    if kind == "binom":
        from .unit_eq import binom_certificate
        return [binom_certificate(task[1], task[2])]
    if kind == "final":
        from .unit_eq import final_sieve, load_fixtures, n_elimination
        _, p, m0, ells, fixtures = task
        try:
            certs, state = final_sieve(p, m0, ells)
        except NoWitness as exc:
            return [SieveCertificate("final", p, None, m0, [], f"survives:m={exc.m}", {})]
        if fixtures:
            for fx in load_fixtures(fixtures):
                if fx["p"] == p and fx["m0"] == m0:
                    certs[-1].meta["n_elimination"] = n_elimination(p, m0, fx["log10_n_bound"], state=state)
        return certs
    raise ConfigError(f"unknown task kind {kind!r}")


# ---------------------------------------------------------------- checkpoints

def _load_checkpoint(path: str, fp: str) -> dict[str, list]:
    if not path or not os.path.exists(path):
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("fingerprint") != fp:
        raise ConfigError(f"checkpoint {path} belongs to a different configuration")
    return data["done"]


def _save_checkpoint(path: str, fp: str, done: dict[str, list]) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump({"fingerprint": fp, "done": done}, fh, sort_keys=True)
    os.replace(tmp, path)


# ---------------------------------------------------------------- driver

@dataclass
class StageResult:
    certificates: list = field(default_factory=list)
    resumed: int = 0
    executed: int = 0

    @property
    def survivors(self) -> list:
        return [c for c in self.certificates if not c.eliminated]


def run_stage(cfg: StageConfig, out: str | None = None, stop_after: int | None = None) -> StageResult:
    """Run every task of the stage; ``stop_after`` simulates an interruption (for tests)."""
    fp = cfg.fingerprint()
    tasks = build_tasks(cfg)
    done = _load_checkpoint(cfg.checkpoint, fp)
    result = StageResult(resumed=len(done))
    pending = [t for t in tasks if task_id(t) not in done]
    since_save = 0

    def record(t, recs):
        nonlocal since_save
        done[task_id(t)] = recs
        result.executed += 1
        since_save += 1
        if cfg.checkpoint and since_save >= cfg.checkpoint_every:
            _save_checkpoint(cfg.checkpoint, fp, done)
            since_save = 0

    def interrupted():
        return stop_after is not None and result.executed >= stop_after

    if cfg.workers == 1 or len(pending) <= 1:
        for t in pending:
            if interrupted():
                break
            record(t, _run_with_retry(t))
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futs = {pool.submit(execute, t): t for t in pending}
            for fut in as_completed(futs):
                t = futs[fut]
                try:
                    recs = fut.result()
                except Exception as exc:  # noqa: BLE001 - re-queued once in the coordinator
                    log.warning("task %s failed in a worker (%r); re-running", task_id(t), exc)
                    recs = _run_with_retry(t, first_error=exc)
                record(t, recs)
                if interrupted():
                    for f in futs:
                        f.cancel()
                    break
    if cfg.checkpoint:
        _save_checkpoint(cfg.checkpoint, fp, done)
    if interrupted() and len(done) < len(tasks):
        return result
    certs = [SieveCertificate.from_record(r) for t in tasks for r in done[task_id(t)]]
    result.certificates = certs
    if out:
        write_certificates(out, certs)
    return result


def _run_with_retry(task, first_error=None):
    try:
        return execute(task)
    except FibsiftError:
        raise
    except Exception as exc:  # noqa: BLE001
        if first_error is not None:
            raise WorkerPanic(task_id(task), exc) from exc
        try:
            return execute(task)
        except Exception as exc2:  # noqa: BLE001
            raise WorkerPanic(task_id(task), exc2) from exc2
