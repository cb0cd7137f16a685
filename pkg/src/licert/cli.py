"""Command-line entry point.

Every command prints machine-readable output (JSON, or CSV for scans and
traces) on stdout and a short human summary on stderr. A JSON config file
given with ``--config`` supplies defaults; explicit flags override it.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 unsupported regime or representation, 4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any

from . import certify, jsonio, verify
from .energy import energy_direct, energy_direct_mollified, energy_fourier
from .errors import LicertError, UnsupportedError, ValidationError
from .flow import FlowConfig, minimize
from .measures import load_measure
from .potentials import PotentialSpec
from .spectral import QuadratureSpec

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_CONVERGENCE = 0, 1, 2, 3, 4
COMMANDS = ("energy", "minimize", "certify", "scan", "verify")
CONFIG_KEYS = {"command", "potential", "measure", "quadrature", "flow", "output", "format",
               "fourier", "mollify", "seeds", "out_dir", "allow_unconverged", "spot_check",
               "scan", "suite"}


@dataclass
class RunConfig:
    command: str
    potential: PotentialSpec | None = None
    measure_path: str | None = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    flow: FlowConfig = field(default_factory=FlowConfig)
    output: str | None = None
    format: str = "json"
    extra: dict[str, Any] = field(default_factory=dict)


def _load_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValidationError("config must be a JSON object")
    unknown = set(obj) - CONFIG_KEYS
    if unknown:
        raise ValidationError(f"unknown config keys {sorted(unknown)}")
    return obj


def _potential(args: argparse.Namespace, conf: dict[str, Any], required: bool = True) -> PotentialSpec | None:
    base = dict(conf.get("potential") or {})
    for key in ("kind", "a", "b", "d"):
        v = getattr(args, key, None)
        if v is not None:
            base[key] = v
    if not base:
        if required:
            raise ValidationError("no potential given (use --kind/-a/-b/-d or the config)")
        return None
    base.setdefault("kind", "power")
    base.setdefault("d", 1)
    return PotentialSpec.from_json(base)


def build_config(args: argparse.Namespace) -> RunConfig:
    conf = _load_config(args.config)
    if conf.get("command", args.command) != args.command:
        raise ValidationError(f"config is for command {conf['command']!r}, not {args.command!r}")
    cfg = RunConfig(args.command)
    cfg.output = args.output or conf.get("output")
    cfg.format = args.format or conf.get("format", "csv" if args.command == "scan" else "json")
    if cfg.format not in ("json", "csv"):
        raise ValidationError("format must be json or csv")
    cfg.quadrature = QuadratureSpec.from_json(conf.get("quadrature", {}))
    if args.command in ("energy", "minimize", "certify"):
        cfg.potential = _potential(args, conf)
    if args.command == "energy":
        cfg.measure_path = args.measure or conf.get("measure")
        if cfg.measure_path is None:
            raise ValidationError("energy needs --measure")
        if not os.path.exists(cfg.measure_path):
            raise ValidationError(f"measure file {cfg.measure_path} does not exist")
        cfg.extra["fourier"] = args.fourier or bool(conf.get("fourier", False))
        cfg.extra["mollify"] = args.mollify if args.mollify is not None else conf.get("mollify")
    if args.command == "minimize":
        flow = dict(conf.get("flow", {}))
        for key, attr in (("n_particles", "n"), ("max_iters", "max_iters"), ("init", "init"),
                          ("init_radius", "init_radius"), ("tol_grad", "tol"), ("step0", "step0")):
            v = getattr(args, attr)
            if v is not None:
                flow[key] = v
        cfg.flow = FlowConfig.from_json(flow)
        seeds = args.seeds if args.seeds is not None else conf.get("seeds", [cfg.flow.seed])
        if not isinstance(seeds, list) or not seeds or not all(isinstance(s, int) for s in seeds):
            raise ValidationError("seeds must be a nonempty list of integers")
        cfg.extra["seeds"] = seeds
        cfg.extra["out_dir"] = args.out_dir or conf.get("out_dir")
        cfg.extra["allow_unconverged"] = args.allow_unconverged or bool(conf.get("allow_unconverged", False))
    if args.command == "certify":
        sc = args.spot_check if args.spot_check is not None else conf.get("spot_check", 0)
        cfg.extra["spot_check"] = int(sc)
    if args.command == "scan":
        sc = dict(conf.get("scan", {}))
        for key in ("axis", "lo", "hi", "steps", "spacing", "toward", "closest", "fixed", "kind", "d"):
            v = getattr(args, f"scan_{key}", None)
            if v is not None:
                sc[key] = v
        missing = {"axis", "lo", "hi", "steps", "fixed"} - set(sc)
        if missing:
            raise ValidationError(f"scan needs {sorted(missing)}")
        cfg.extra["scan"] = sc
    if args.command == "verify":
        suite = args.suite or conf.get("suite")
        if suite is None:
            raise ValidationError("verify needs --suite")
        if suite != "all" and suite not in verify.SUITES:
            raise ValidationError(f"unknown suite {suite!r}; choose from {sorted(verify.SUITES)} or all")
        cfg.extra["suite"] = suite
        cfg.extra["seeds"] = args.seeds[0] if args.seeds else conf.get("seeds")
    return cfg


def _emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ValidationError(f"cannot write output: {exc}") from exc
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _csv(rows: list[dict[str, Any]], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["%.17g" % r[c] if isinstance(r[c], float) else r[c] for c in columns])
    return buf.getvalue()


# ---------------------------------------------------------------------------


def cmd_energy(cfg: RunConfig) -> int:
    p, mu = cfg.potential, load_measure(cfg.measure_path)
    eps = cfg.extra["mollify"]
    direct = energy_direct(p, mu) if eps is None else energy_direct_mollified(p, mu, float(eps))
    report: dict[str, Any] = {"potential": p.to_json(), "direct": direct, "mollify_eps": eps}
    try:
        fr = energy_fourier(p, mu, cfg.quadrature, mollifier_eps=eps)
        report.update(fourier=fr.value, fourier_report=fr, discrepancy=abs(direct - fr.value),
                      fourier_note="")
    except UnsupportedError as exc:
        if cfg.extra["fourier"]:
            raise
        report.update(fourier=None, fourier_report=None, discrepancy=None, fourier_note=str(exc))
    _emit(cfg, jsonio.dumps(report))
    f = report["fourier"]
    _note(f"{p.describe()}: direct={direct:.12g}" +
          (f" fourier={f:.12g} discrepancy={report['discrepancy']:.3g}" if f is not None
           else f" (fourier side not representable: {report['fourier_note']})"))
    return EXIT_OK


def cmd_minimize(cfg: RunConfig) -> int:
    p, runs = cfg.potential, []
    out_dir = cfg.extra["out_dir"]
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    for seed in cfg.extra["seeds"]:
        fc = FlowConfig.from_json({**cfg.flow.to_json(), "seed": seed})
        res = minimize(p, fc)
        entry = res.to_json()
        entry["seed"] = seed
        if out_dir:
            mpath = os.path.join(out_dir, f"measure_seed{seed}.json")
            tpath = os.path.join(out_dir, f"trace_seed{seed}.csv")
            with open(mpath, "w", encoding="utf-8") as fh:
                fh.write(jsonio.dumps(res.measure.to_json()) + "\n")
            with open(tpath, "w", encoding="utf-8") as fh:
                fh.write(res.trace_csv())
            entry.update(measure_file=mpath, trace_file=tpath)
        runs.append(entry)
        _note(f"seed {seed}: energy={entry['energy']:.12g} radius={res.support_radius:.6g} "
              f"iters={res.iterations} converged={res.converged} ({res.message})")
    energies = [r["energy"] for r in runs]
    spread = (max(energies) - min(energies)) / max(abs(min(energies)), 1e-300) if len(runs) > 1 else 0.0
    report = {"potential": p.to_json(), "flow": cfg.flow.to_json(), "runs": runs,
              "relative_energy_spread": spread}
    _emit(cfg, jsonio.dumps(report))
    if not all(r["converged"] for r in runs) and not cfg.extra["allow_unconverged"]:
        _note("not all runs converged (exit 4; pass --allow-unconverged to accept)")
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_certify(cfg: RunConfig) -> int:
    cert = certify.certify(cfg.potential)
    out = cert.to_json()
    if cfg.extra["spot_check"] > 0:
        out["spot_check"] = certify.spot_check(cert, seeds=cfg.extra["spot_check"]).to_json()
    _emit(cfg, jsonio.dumps(out))
    _note(f"{cfg.potential.describe()}: regime={cert.regime} R_star={cert.R_star:.6g} "
          f"R_lic_lb={cert.R_lic_lb:.6g} -> {out['verdict']}")
    return EXIT_OK


SCAN_COLUMNS = ["a", "b", "d", "regime", "R_star", "R_lic_lb", "certified", "message"]


def cmd_scan(cfg: RunConfig) -> int:
    sc = cfg.extra["scan"]
    values = certify.scan_grid(float(sc["lo"]), float(sc["hi"]), int(sc["steps"]),
                               sc.get("spacing", "uniform"), sc.get("toward", "hi"),
                               float(sc.get("closest", 1e-6)))
    rows = certify.scan(sc["axis"], values, float(sc["fixed"]), int(sc.get("d", 1)),
                        sc.get("kind", "power"))
    interval = certify.certified_interval(rows, sc["axis"])
    if cfg.format == "csv":
        _emit(cfg, _csv(rows, SCAN_COLUMNS))
    else:
        _emit(cfg, jsonio.dumps({"scan": sc, "rows": rows, "certified_interval": interval}))
    if interval:
        _note(f"{interval['label']}: {sc['axis']} in [{interval['lo']:.12g}, {interval['hi']:.12g}] "
              f"({interval['points']} of {len(rows)} points)")
    else:
        _note(f"no certified points among {len(rows)}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    names = sorted(verify.SUITES) if cfg.extra["suite"] == "all" else [cfg.extra["suite"]]
    results = []
    for name in names:
        kw = {}
        if cfg.extra["seeds"] is not None and name in ("fourier-identity", "poincare", "heisenberg"):
            kw["seeds"] = int(cfg.extra["seeds"])
        res = verify.run_suite(name, **kw)
        results.append(res)
        _note(res.table())
    ok = all(r.passed for r in results)
    _emit(cfg, jsonio.dumps({"passed": ok, "suites": results}))
    return EXIT_OK if ok else EXIT_VERIFY


HANDLERS = {"energy": cmd_energy, "minimize": cmd_minimize, "certify": cmd_certify,
            "scan": cmd_scan, "verify": cmd_verify}


# ---------------------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser, potential: bool) -> None:
    sp.add_argument("--config", help="JSON config file; flags override its values")
    sp.add_argument("--output", "-o", help="write the main output here instead of stdout")
    sp.add_argument("--format", choices=("json", "csv"))
    if potential:
        g = sp.add_argument_group("potential")
        g.add_argument("--kind", choices=("power", "logpower", "repulsive", "truncdiff"))
        g.add_argument("-a", type=float)
        g.add_argument("-b", type=float)
        g.add_argument("-d", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="licert", description="Interaction energies with power-law kernels.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("energy", help="direct and Fourier energies of a measure")
    _add_common(sp, True)
    sp.add_argument("--measure", "-m", help="measure JSON file")
    sp.add_argument("--fourier", action="store_true", default=False,
                    help="require the Fourier side (exit 3 if not representable)")
    sp.add_argument("--mollify", type=float, help="evaluate on the mollified measure at this scale")

    sp = sub.add_parser("minimize", help="particle gradient descent")
    _add_common(sp, True)
    sp.add_argument("--n", type=int, help="number of particles")
    sp.add_argument("--max-iters", type=int)
    sp.add_argument("--init", choices=("uniform_ball", "ring"))
    sp.add_argument("--init-radius", type=float)
    sp.add_argument("--tol", type=float, help="gradient tolerance")
    sp.add_argument("--step0", type=float)
    sp.add_argument("--seeds", type=int, nargs="+", help="one run per seed")
    sp.add_argument("--out-dir", help="write measure_seed<k>.json and trace_seed<k>.csv here")
    sp.add_argument("--allow-unconverged", action="store_true", default=False)

    sp = sub.add_parser("certify", help="uniqueness certificate for a potential")
    _add_common(sp, True)
    sp.add_argument("--spot-check", type=int, help="also run a sign spot-check with this many seeds")

    sp = sub.add_parser("scan", help="certify along a parameter grid")
    _add_common(sp, False)
    sp.add_argument("--axis", dest="scan_axis", choices=("a", "b"))
    sp.add_argument("--lo", dest="scan_lo", type=float)
    sp.add_argument("--hi", dest="scan_hi", type=float)
    sp.add_argument("--steps", dest="scan_steps", type=int)
    sp.add_argument("--spacing", dest="scan_spacing", choices=("uniform", "geometric"))
    sp.add_argument("--toward", dest="scan_toward", choices=("lo", "hi"),
                    help="end the geometric grid clusters at")
    sp.add_argument("--closest", dest="scan_closest", type=float,
                    help="relative distance of the last geometric point from that end")
    sp.add_argument("--fixed", dest="scan_fixed", type=float, help="value of the other parameter")
    sp.add_argument("--kind", dest="scan_kind", choices=("power", "logpower"))
    sp.add_argument("-d", dest="scan_d", type=int)

    sp = sub.add_parser("verify", help="run a verification suite")
    _add_common(sp, False)
    sp.add_argument("--suite", help=f"one of {', '.join(sorted(verify.SUITES))} or all")
    sp.add_argument("--seeds", type=int, nargs=1, help="override the seed count")
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else EXIT_INPUT
    try:
        cfg = build_config(args)
        return HANDLERS[cfg.command](cfg)
    except LicertError as exc:
        _note(f"error: {exc}")
        return exc.exit_code
    except (TypeError, ValueError) as exc:
        _note(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
