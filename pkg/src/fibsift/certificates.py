"""Line-delimited JSON certificates and their replay.

Each record carries enough witness data to re-check its outcome without
re-running the search that produced it.  Integers are written as decimal
strings so that values far beyond 64 bits survive any JSON reader.
"""

from __future__ import annotations

import json
import os
import re
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version
from typing import Callable, Iterable

from .errors import SchemaError

SCHEMA_VERSION = 1

try:
    CODE_VERSION = version("artifact")
except PackageNotFoundError:  # running from a source tree
    CODE_VERSION = "0.1.0"

_INT = re.compile(r"^-?\d+$")
REQUIRED = ("schema_version", "kind", "p", "m", "m0", "witnesses", "outcome", "code_version")


@dataclass
class SieveCertificate:
    kind: str
    p: int | str | None
    m: int | None
    m0: int | None
    witnesses: list
    outcome: str
    meta: dict = field(default_factory=dict)
    runtime_ms: int = 0

    @property
    def key(self) -> tuple:
        return (self.kind, str(self.p), str(self.m), str(self.m0))

    @property
    def eliminated(self) -> bool:
        return self.outcome in ("eliminated", "concluded")

    def to_record(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "p": _enc(self.p),
            "m": _enc(self.m),
            "m0": _enc(self.m0),
            "witnesses": _enc(self.witnesses),
            "outcome": self.outcome,
            "meta": _enc(self.meta),
            "runtime_ms": self.runtime_ms,
            "code_version": CODE_VERSION,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "SieveCertificate":
        missing = [k for k in REQUIRED if k not in rec]
        if missing:
            raise SchemaError(f"record lacks {missing}")
        if not isinstance(rec["witnesses"], list):
            raise SchemaError("witnesses must be a list")
        return cls(
            kind=rec["kind"],
            p=_dec(rec["p"]),
            m=_dec(rec["m"]),
            m0=_dec(rec["m0"]),
            witnesses=_dec(rec["witnesses"]),
            outcome=rec["outcome"],
            meta=_dec(rec.get("meta", {})),
            runtime_ms=int(rec.get("runtime_ms", 0)),
        )


@contextmanager
def _unlimited_digits():
    # Python caps int <-> str conversion at 4300 digits; moduli here can be larger
    old = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def _int_to_str(n: int) -> str:
    try:
        return str(n)
    except ValueError:
        with _unlimited_digits():
            return str(n)


def _str_to_int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        with _unlimited_digits():
            return int(s)


def _enc(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return _int_to_str(v)
    if isinstance(v, dict):
        return {k: _enc(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_enc(x) for x in v]
    return v


def _dec(v):
    if isinstance(v, str) and _INT.match(v):
        return _str_to_int(v)
    if isinstance(v, dict):
        return {k: _dec(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_dec(x) for x in v]
    return v


def canonical_line(cert: SieveCertificate) -> str:
    """Serialised form used for determinism comparisons (runtime dropped)."""
    rec = cert.to_record()
    rec.pop("runtime_ms")
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


def sort_key(cert: SieveCertificate):
    def k(v):
        return (0, v, "") if isinstance(v, int) else (1, 0, str(v))
    return (cert.kind, k(cert.p), k(cert.m0), k(cert.m))


def write_certificates(path: str | os.PathLike, certs: Iterable[SieveCertificate]) -> int:
    """Write certificates canonically sorted and deduplicated, atomically."""
    uniq = {}
    for c in certs:
        uniq[c.key] = c
    ordered = sorted(uniq.values(), key=sort_key)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        for c in ordered:
            fh.write(json.dumps(c.to_record(), sort_keys=True) + "\n")
    os.replace(tmp, path)
    return len(ordered)


def read_certificates(path: str | os.PathLike) -> list[SieveCertificate]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"line {lineno}: {exc}") from exc
            out.append(SieveCertificate.from_record(rec))
    return out


# ---------------------------------------------------------------- replay

_REPLAYERS: dict[str, Callable[[SieveCertificate], bool]] = {}


def register(kind: str):
    def deco(fn):
        _REPLAYERS[kind] = fn
        return fn
    return deco


def _load_replayers():
    # importing the modules registers their replay functions
    from . import galois_sieve, kraus, linforms, oracle, unit_eq  # noqa: F401


@dataclass
class ValidationReport:
    total: int = 0
    mismatches: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def replay(cert: SieveCertificate) -> bool:
    _load_replayers()
    fn = _REPLAYERS.get(cert.kind)
    if fn is None:
        raise SchemaError(f"no replay for kind {cert.kind!r}")
    try:
        return bool(fn(cert))
    except (KeyError, IndexError, TypeError, ValueError, ZeroDivisionError):
        return False


def validate(path_or_certs) -> ValidationReport:
    """Replay every record; a record whose witnesses do not reproduce its outcome is a mismatch."""
    if isinstance(path_or_certs, (str, os.PathLike)):
        raw = []
        with open(path_or_certs, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    try:
                        raw.append(json.loads(line))
                    except json.JSONDecodeError as exc:
                        raise SchemaError(str(exc)) from exc
        certs = []
        report = ValidationReport()
        for rec in raw:
            if int(rec.get("schema_version", -1)) != SCHEMA_VERSION:
                report.warnings.append(f"schema_version {rec.get('schema_version')}")
            if rec.get("code_version") != CODE_VERSION:
                report.warnings.append(f"code_version {rec.get('code_version')} != {CODE_VERSION}")
            certs.append(SieveCertificate.from_record(rec))
    else:
        certs = list(path_or_certs)
        report = ValidationReport()
    for i, c in enumerate(certs):
        report.total += 1
        if not replay(c):
            report.mismatches.append((i, c.key))
    return report
