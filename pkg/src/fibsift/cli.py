"""Command line entry point: ``fibsift <stage> [options]`` and ``fibsift validate FILE``.

Exit status: 0 when every task was eliminated or concluded, 1 when survivors
remain (or validation found mismatches), 2 on any error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import FibsiftError
from .runner import STAGES, StageConfig, run_stage


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fibsift", description="Certified sieves for F_k +- 2 = y^p.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for stage in STAGES:
        sp = sub.add_parser(stage)
        sp.add_argument("--p-min", type=int, default=5)
        sp.add_argument("--p-max", type=int, default=100)
        sp.add_argument("--m0", type=_ints, default=())
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--checkpoint")
        sp.add_argument("--precision", type=int, default=256)
        sp.add_argument("--k-bound", type=int, default=2000)
        sp.add_argument("--fixtures")
        sp.add_argument("--out")
        if stage == "oracle":
            sp.add_argument("--k-max", type=int, default=200)
        if stage == "m1":
            sp.add_argument("--steps", type=int, default=2)
        if stage == "final":
            sp.add_argument("--ells", type=_ints, default=(3, 5, 7))
    vp = sub.add_parser("validate")
    vp.add_argument("files", nargs="+")
    return ap


def _print_stage(cfg: StageConfig, result) -> None:
    if cfg.stage == "oracle":
        (c,) = result.certificates
        for w in c.witnesses:
            print(f"F_{w['k']} {'+' if w['sign'] > 0 else '-'} 2 = {w['y']}^{w['p']}")
        print(f"indices |k|: {c.meta['indices']}  ({c.outcome})")
        return
    if cfg.stage == "linforms":
        for c in result.certificates:
            from .certreal import CertReal
            rep = c.witnesses[0]
            print(f"[{rep['theorem']}] verdict: {rep['verdict']}")
            for name, v in rep["constants"].items():
                if isinstance(v, dict) and "lo" in v:
                    x = CertReal.from_json(v)
                    print(f"  {name:<36} in [{x.lower:.10g}, {x.upper:.10g}]")
                else:
                    print(f"  {name:<36} = {v}")
            for claim, ok in rep["checks"]:
                print(f"  {'PASS' if ok else 'FAIL'}  {claim}")
        return
    done = sum(c.eliminated for c in result.certificates)
    print(f"{cfg.stage}: {len(result.certificates)} certificates, {done} eliminated/concluded, "
          f"{len(result.survivors)} survivors")
    for c in result.survivors[:20]:
        print(f"  survivor {c.key}: {c.outcome}")


def _validate(files) -> int:
    from .certificates import validate
    bad = 0
    for f in files:
        rep = validate(f)
        for w in sorted(set(rep.warnings)):
            print(f"{f}: warning: {w}")
        print(f"{f}: {rep.total} records, {len(rep.mismatches)} mismatches")
        for i, key in rep.mismatches:
            print(f"  mismatch at record {i}: {key}")
        bad += len(rep.mismatches)
    return 0 if bad == 0 else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "validate":
            return _validate(args.files)
        cfg = StageConfig(
            stage=args.command, p_min=args.p_min, p_max=args.p_max, m0=args.m0, workers=args.workers,
            checkpoint=args.checkpoint, precision=args.precision, k_bound=args.k_bound,
            fixtures=args.fixtures, k_max=getattr(args, "k_max", 200), steps=getattr(args, "steps", 2),
            ells=getattr(args, "ells", (3, 5, 7)),
        )
        result = run_stage(cfg, out=args.out)
        _print_stage(cfg, result)
        return 0 if not result.survivors else 1
    except (FibsiftError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - any crash maps to the error status
        logging.getLogger("fibsift").exception("unexpected failure")
        print(f"error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
