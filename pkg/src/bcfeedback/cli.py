"""Command-line front end.

Exit codes: 0 success, 1 consistency-check failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import fme
from .awgn import (
    REFERENCE_SCHEME_SUM_RATES, REPORTED_SUM_RATES, AwgnChannelSpec, AwgnModelError,
    marton_no_feedback_sum_rate,
)
from .info import InfoError, JointPmf
from .optimizer import SWEEP_AXES, OptBudget, optimize_sum_rate, sweep
from .polytope import max_sum_rate, slice_r0
from .regions import (
    ConsistencyError, Kernel, PreconditionError, blackwell_region_closed_form,
    build_corollary1_model, build_theorem1_model, check_consistency, closed_form_diff,
    corollary1_region, dueck_region_closed_form, theorem1_region,
)

EXIT_OK, EXIT_INCONSISTENT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    args: dict = field(default_factory=dict)
    output_path: str | None = None
    format: str = "csv"
    seed: int = 0
    threads: int = 1


def _g(x: float) -> str:
    """6 significant digits, '.' decimal, no grouping."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x + 0.0:.6g}"  # + 0.0 turns -0.0 into 0.0


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_g(v) if isinstance(v, (int, float)) else v for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _budget(cfg: RunConfig) -> OptBudget:
    a = cfg.args
    try:
        return OptBudget(a["grid"], a["starts"], a["iters"], cfg.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _channel(a: dict) -> AwgnChannelSpec:
    try:
        return AwgnChannelSpec.from_snr(a["snr"], a["sigmaf2"], a["rho"], a["sigma2"])
    except AwgnModelError as e:
        raise UsageError(str(e)) from None


def _reference_key(ch: AwgnChannelSpec):
    snr = ch.snr
    key = int(round(snr))
    if key in REPORTED_SUM_RATES and abs(snr - key) < 1e-9 and ch.sigmaf2 == 0 and ch.rho == 0:
        return key
    return None


def _slice_csv(poly) -> str:
    return _csv(slice_r0(poly, 0.0), ["R1", "R2"])


# --------------------------------------------------------------------------
# commands

def cmd_awgn_sum_rate(cfg: RunConfig) -> tuple[int, str]:
    ch = _channel(cfg.args)
    res = optimize_sum_rate(ch, _budget(cfg), cfg.threads)
    base = marton_no_feedback_sum_rate(ch)
    p = res.best_params
    rec = {"snr": ch.snr, "sigmaf2": ch.sigmaf2, "rho": ch.rho, "sum_rate": res.sum_rate,
           "alpha": p.alpha, "beta": p.beta, "D": p.D, "P1": p.P1, "no_feedback": base}
    key = _reference_key(ch)
    if key is not None:
        rec["reference"] = REPORTED_SUM_RATES[key]
        rec["reference_scheme"] = REFERENCE_SCHEME_SUM_RATES[key]
    if cfg.format == "json":
        return EXIT_OK, _json(rec)
    return EXIT_OK, _csv([list(rec.values())], list(rec.keys()))


def _parse_values(text: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            out.append(float(tok))
        except ValueError:
            out.append(tok)
    if not out:
        raise UsageError("--values needs at least one value")
    return out


def cmd_sweep(cfg: RunConfig) -> tuple[int, str]:
    a = cfg.args
    template = _channel(a)
    rows = sweep(template, a["axis"], _parse_values(a["values"]), _budget(cfg), cfg.threads)
    for r in rows:
        if r.error:
            print(f"warning: {a['axis']}={r.value}: {r.error}", file=sys.stderr)
    if cfg.format == "json":
        recs = []
        for r in rows:
            rec = {"axis_value": r.value, "sum_rate": None, "error": r.error}
            if r.result is not None:
                rec.update(r.result.to_dict())
            recs.append(rec)
        return EXIT_OK, _json({"axis": a["axis"], "rows": recs})
    table = []
    for r in rows:
        if r.result is None:
            table.append([r.value, math.nan, math.nan, math.nan, math.nan, math.nan])
        else:
            p = r.result.best_params
            table.append([r.value, r.result.sum_rate, p.alpha, p.beta, p.D, p.P1])
    return EXIT_OK, _csv(table, ["axis_value", "sum_rate", "alpha", "beta", "D", "P1"])


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}") from None


def _region_report(closed, numeric, extra=None) -> dict:
    diff = closed_form_diff(closed, numeric)
    rep = {
        "closed_form": closed.to_dict(),
        "numeric": numeric.to_dict(),
        "bound_diff": diff,
        "max_bound_diff": max(diff.values()),
        "sum_rate": {"closed_form": max_sum_rate(closed), "numeric": max_sum_rate(numeric)},
    }
    rep.update(extra or {})
    return rep


def cmd_dueck(cfg: RunConfig) -> tuple[int, str]:
    from .instances import dueck_block, dueck_kernel, dueck_model, original_dueck_noise

    a = cfg.args
    if a["original"]:
        pmf_N = original_dueck_noise()
    else:
        try:
            pmf_N = JointPmf.from_dict(_load_json(a["pn"]))
        except (KeyError, InfoError, ValueError) as e:
            raise UsageError(f"bad noise pmf: {e}") from None
    try:
        closed = dueck_region_closed_form(pmf_N)
        model = dueck_model(pmf_N)
    except PreconditionError as e:
        raise UsageError(str(e)) from None
    if a.get("dump_model"):
        out = Path(a["dump_model"])
        out.mkdir(parents=True, exist_ok=True)
        dist = dueck_block(pmf_N).to_dict()
        dist["aliases"] = {"S": ["Y"]}
        dist["region"] = "corollary1"
        (out / "dist.json").write_text(json.dumps(dist))
        (out / "kernel.json").write_text(dueck_kernel().to_json())
    numeric = corollary1_region(model)
    if cfg.format == "json":
        return EXIT_OK, _json(_region_report(closed, numeric))
    return EXIT_OK, _slice_csv(closed)


def cmd_blackwell(cfg: RunConfig) -> tuple[int, str]:
    from .instances import blackwell_model

    a = cfg.args
    try:
        closed = blackwell_region_closed_form(a["p"], a["alpha"], a["beta"], a["complete"])
        model = blackwell_model(a["p"], a["alpha"], a["beta"])
    except PreconditionError as e:
        raise UsageError(str(e)) from None
    numeric = corollary1_region(model)
    if cfg.format == "json":
        return EXIT_OK, _json(_region_report(closed, numeric))
    return EXIT_OK, _slice_csv(closed)


def cmd_fme_derive(cfg: RunConfig) -> tuple[int, str]:
    a = cfg.args
    order = None
    if a.get("order"):
        order = [v.strip() for v in a["order"].split(",") if v.strip()]
    try:
        system = fme.derive_region(order)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if a["emit"] == "json":
        return EXIT_OK, fme.to_json(system, indent=2) + "\n"
    return EXIT_OK, "".join(f"{q}\n" for q in system.ineqs)


def cmd_fme_compare(cfg: RunConfig) -> tuple[int, str]:
    from .crosscheck import fme_theorem1_study

    a = cfg.args
    if a["instances"] < 1 or not 2 <= a["card"] <= 3:
        raise UsageError("need --instances >= 1 and --card in {2, 3}")
    study = fme_theorem1_study(a["instances"], cfg.seed, a["card"], tol=a["tol"])
    if cfg.format == "json":
        return EXIT_OK, _json(study)
    rows = [[r["instance"]["draw"], "yes" if r["equal"] else "no",
             len(r["stated_outside_derived"]), len(r["derived_outside_stated"])]
            for r in study["reports"]]
    return EXIT_OK, _csv(rows, ["draw", "equal", "stated_vertices_outside", "derived_vertices_outside"])


def _parse_aliases(items) -> dict:
    out = {}
    for it in items or []:
        if "=" not in it:
            raise UsageError(f"alias must look like S=Y,Z, got {it!r}")
        k, v = it.split("=", 1)
        out[k.strip()] = tuple(x.strip() for x in v.split(",") if x.strip())
    return out


def cmd_region_eval(cfg: RunConfig) -> tuple[int, str]:
    a = cfg.args
    dist = _load_json(a["dist"])
    try:
        P = JointPmf.from_dict(dist)
        Q = Kernel.from_dict(_load_json(a["kernel"]))
    except (KeyError, InfoError, ValueError) as e:
        raise UsageError(f"bad model file: {e}") from None
    aliases = {k: tuple(v) for k, v in dist.get("aliases", {}).items()}
    aliases.update(_parse_aliases(a.get("alias")))
    region = a.get("region") or dist.get("region", "theorem1")
    if region not in ("theorem1", "corollary1"):
        raise UsageError(f"unknown region {region!r}")
    try:
        ok = check_consistency(P, Q)
    except (InfoError, ValueError) as e:
        raise UsageError(str(e)) from None
    if not ok:
        print("error: kernel does not reproduce the block marginal", file=sys.stderr)
        return EXIT_INCONSISTENT, ""
    try:
        if region == "corollary1":
            poly = corollary1_region(build_corollary1_model(P, Q, aliases))
        else:
            poly = theorem1_region(build_theorem1_model(P, Q, aliases))
    except ConsistencyError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT, ""
    except (InfoError, ValueError) as e:
        raise UsageError(str(e)) from None
    if cfg.format == "json":
        return EXIT_OK, poly.to_json(indent=2) + "\n"
    return EXIT_OK, _slice_csv(poly)


def cmd_compare(cfg: RunConfig) -> tuple[int, str]:
    a = cfg.args
    ch = _channel(a)
    res = optimize_sum_rate(ch, _budget(cfg), cfg.threads)
    if a["against"] == "no-feedback":
        ref, name = marton_no_feedback_sum_rate(ch), "no_feedback"
    else:
        key = _reference_key(ch)
        if key is None:
            raise UsageError("reference-scheme values exist only for SNR 10, 100, 1000 "
                             "with sigmaf2 = 0 and rho = 0")
        ref, name = REFERENCE_SCHEME_SUM_RATES[key], "reference_scheme"
    rec = {"snr": ch.snr, "sum_rate": res.sum_rate, name: ref,
           "difference": res.sum_rate - ref,
           "ordering": "ours > reference" if res.sum_rate > ref else "ours <= reference"}
    key = _reference_key(ch)
    if key is not None:
        rec["reported"] = REPORTED_SUM_RATES[key]
    if cfg.format == "json":
        return EXIT_OK, _json(rec)
    return EXIT_OK, _csv([list(rec.values())], list(rec.keys()))


# --------------------------------------------------------------------------
# parsing

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="write here instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def _awgn_flags(p: argparse.ArgumentParser, snr_required: bool = True) -> None:
    p.add_argument("--snr", type=float, required=snr_required, help="P / sigma^2")
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--sigmaf2", type=float, default=0.0, help="feedback noise variance")
    p.add_argument("--rho", type=float, default=0.0, help="receiver noise correlation")
    p.add_argument("--grid", type=int, default=16, help="grid points per dimension")
    p.add_argument("--starts", type=int, default=8, help="Nelder-Mead starts")
    p.add_argument("--iters", type=int, default=400, help="Nelder-Mead iterations per start")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bcfeedback",
                                 description="Rate regions for broadcast channels with feedback")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("awgn-sum-rate", help="optimized AWGN sum rate")
    _awgn_flags(p)
    _common(p)

    p = sub.add_parser("sweep", help="sum rate over snr, sigmaf2 or rho")
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", required=True, help="comma-separated list")
    _awgn_flags(p, snr_required=False)
    _common(p)

    p = sub.add_parser("dueck", help="generalized Dueck region")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--original", action="store_true")
    g.add_argument("--pn", help="JSON pmf over N0, N1, N2")
    p.add_argument("--dump-model", dest="dump_model", default=None,
                   help="directory for dist.json and kernel.json")
    _common(p)

    p = sub.add_parser("blackwell", help="noisy Blackwell region")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--complete", action="store_true", help="include the 2R0+R1+R2 row")
    _common(p)

    p = sub.add_parser("fme", help="Fourier-Motzkin derivation")
    fsub = p.add_subparsers(dest="fme_command", required=True)
    d = fsub.add_parser("derive")
    d.add_argument("--order", default=None, help="comma-separated elimination order")
    d.add_argument("--emit", choices=("json", "text"), default="json")
    _common(d)
    c = fsub.add_parser("compare", help="evaluated derivation vs the stated region")
    c.add_argument("--instances", type=int, default=20, help="nonempty instances to compare")
    c.add_argument("--card", type=int, default=2, help="alphabet size of A, B, C, U, V, Y, Z")
    c.add_argument("--tol", type=float, default=1e-6)
    _common(c)

    p = sub.add_parser("region", help="region of a user-supplied model")
    rsub = p.add_subparsers(dest="region_command", required=True)
    e = rsub.add_parser("eval")
    e.add_argument("--dist", required=True, help="block pmf JSON")
    e.add_argument("--kernel", required=True, help="covering kernel JSON")
    e.add_argument("--alias", action="append", help="NAME=V1,V2 (repeatable)")
    e.add_argument("--region", choices=("theorem1", "corollary1"), default=None)
    _common(e)

    p = sub.add_parser("compare", help="optimized sum rate vs a baseline")
    p.add_argument("--against", choices=("no-feedback", "bhaskaran-ref"), required=True)
    _awgn_flags(p)
    _common(p)
    return ap


_HANDLERS = {
    "awgn-sum-rate": cmd_awgn_sum_rate,
    "sweep": cmd_sweep,
    "dueck": cmd_dueck,
    "blackwell": cmd_blackwell,
    "fme derive": cmd_fme_derive,
    "fme compare": cmd_fme_compare,
    "region eval": cmd_region_eval,
    "compare": cmd_compare,
}


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    command = ns.command
    if command == "fme":
        command = f"fme {ns.fme_command}"
    elif command == "region":
        command = f"region {ns.region_command}"
    args = vars(ns).copy()
    for k in ("command", "fme_command", "region_command", "format", "output", "seed", "threads"):
        args.pop(k, None)
    if command == "sweep" and args.get("snr") is None:
        args["snr"] = 10.0
    return RunConfig(command, args, ns.output, ns.format, ns.seed, ns.threads)


def run(cfg: RunConfig) -> tuple[int, str]:
    if cfg.threads < 1:
        raise UsageError("--threads must be >= 1")
    if cfg.seed < 0:
        raise UsageError("--seed must be >= 0")
    return _HANDLERS[cfg.command](cfg)


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as e:  # argparse already printed usage
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    try:
        code, text = run(cfg)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if text:
        if cfg.output_path:
            Path(cfg.output_path).write_text(text)
        else:
            sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
