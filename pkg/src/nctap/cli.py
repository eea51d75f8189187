"""nctap command line.

Every subcommand reads an optional JSON config (``--config``); individual
flags override the corresponding config entries.  Without a field or code the
GF(4), H = [1, alpha] example is used.

Exit codes: 0 success, 1 a check failed, 2 bad configuration, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

import numpy as np

from . import analyzer, attack, bounds, codes, config, netsim
from .adversary import TapSchedule, observe
from .errors import BudgetExceeded, ConfigError, NctapError

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3


class Run:
    """A parsed configuration with flag overrides applied."""

    def __init__(self, args: argparse.Namespace):
        cfg = config.load_json_arg("@" + args.config) if args.config else {}
        for key in ("field", "code", "schedule", "network", "taps", "secret", "codeword"):
            raw = getattr(args, key, None)
            if raw is not None:
                cfg[key] = config.load_json_arg(raw)
        for key in ("budget", "seed", "workers", "format"):
            val = getattr(args, key, None)
            if val is not None:
                cfg[key] = val
        search = dict(cfg.get("search", {}))
        for key in ("mu", "duration"):
            val = getattr(args, key, None)
            if val is not None:
                search[key] = val
        if search:
            cfg["search"] = search
        self.cfg = config.validate(cfg)
        self.fmt = cfg.get("format", "json")
        self.seed = cfg.get("seed", 0)
        self.workers = cfg.get("workers", 1)
        self.budget = cfg.get("budget", analyzer.default_budget())

    def field(self):
        return config.build_field(self.cfg.get("field", config.DEFAULT_CONFIG["field"]))

    def code(self, field=None):
        field = field or self.field()
        return config.build_code(field, self.cfg.get("code", config.DEFAULT_CONFIG["code"]))

    def schedule(self, pc) -> TapSchedule | None:
        if "schedule" in self.cfg:
            return config.build_schedule(self.cfg["schedule"], pc.field.p, pc.n)
        if "taps" in self.cfg:
            net = config.build_network(self.cfg["network"], pc.field.p)
            table = netsim.static_table(netsim.propagate_gcvs(net), pc.field.m)
            return netsim.schedule_from_taps(table, self.cfg["taps"])
        return None


def emit(run: Run, report: dict, text: Callable[[], str]) -> None:
    if run.fmt == "text":
        print(text())
    else:
        print(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False))


def _coords(elements) -> list[list[int]]:
    return [list(e.coeffs) for e in elements]


# -- subcommands --

def cmd_field(run: Run) -> int:
    field = run.field()
    rows = field.element_table()
    report = {"field": field.to_config(), "elements": [{"power": a, "polynomial": b, "vector": c} for a, b, c in rows]}

    def text():
        w = max(len("Polynomial"), *(len(r[1]) for r in rows)) + 2
        lines = [f"GF({field.p}^{field.m}), poly coefficients {list(field.poly)}",
                 f"{'Power':<8}{'Polynomial':<{w}}Vector"]
        lines += [f"{a:<8}{b:<{w}}{c}" for a, b, c in rows]
        return "\n".join(lines)

    emit(run, report, text)
    return EXIT_OK


def cmd_code(run: Run) -> int:
    pc = run.code()
    mrd = codes.verify_mrd(pc, budget=run.budget)
    report = {**pc.to_config(), "rank": pc.rank, "mrd": mrd}

    def text():
        H = "\n".join("  [" + ", ".join(pc.field.format_power(v) for v in row) + "]" for row in pc.H)
        return f"H ({pc.k} x {pc.n}) over GF({pc.field.order}):\n{H}\nrank {pc.rank}; " + ("MRD" if mrd else "not MRD")

    emit(run, report, text)
    return EXIT_OK if mrd else EXIT_FAILED


def _secret(run: Run, pc):
    if "secret" in run.cfg:
        s = [config.element(pc.field, c) for c in run.cfg["secret"]]
    else:
        s = [pc.field.one] * pc.k
    if len(s) != pc.k:
        raise ConfigError(f"secret needs {pc.k} elements")
    return s


def cmd_encode(run: Run) -> int:
    pc = run.code()
    s = _secret(run, pc)
    rng = np.random.default_rng(run.seed)
    x = codes.coset_encode(s, pc, rng)
    back = codes.syndrome_decode(x, pc)
    ok = [e.value for e in back] == [e.value for e in s]
    report = {"secret": _coords(s), "codeword": _coords(x), "decoded": _coords(back), "roundtrip": ok, "seed": run.seed}
    emit(run, report, lambda: f"s = {[str(e) for e in s]}\nx = {[str(e) for e in x]}\nHx = {[str(e) for e in back]}"
         f" ({'ok' if ok else 'MISMATCH'})")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_decode(run: Run) -> int:
    pc = run.code()
    if "codeword" not in run.cfg:
        raise ConfigError("decode needs --codeword")
    x = [config.element(pc.field, c) for c in run.cfg["codeword"]]
    s = codes.syndrome_decode(x, pc)
    emit(run, {"codeword": _coords(x), "secret": _coords(s)}, lambda: f"Hx = {[str(e) for e in s]}")
    return EXIT_OK


def cmd_simulate(run: Run, args) -> int:
    if "network" in run.cfg:
        net = config.build_network(run.cfg["network"], run.cfg.get("field", {}).get("p", 2))
    else:
        net = netsim.butterfly(2)
    m = args.slots
    if args.random:
        rng = np.random.default_rng(run.seed)
        table = netsim.random_network_code(net, rng, m=m, time_varying=args.time_varying)
    else:
        table = netsim.static_table(netsim.propagate_gcvs(net), m)
    feas = {t: [] for t in net.sinks}
    for slot in range(1, len(table.slots) + 1):
        for sink, f in netsim.check_feasible(net, table=table, slot=slot).items():
            feas[sink].append({"rank": f.rank, "max_flow": f.max_flow, "feasible": f.feasible})
    report = {"gcvs": table.to_config(), "feasibility": feas, "seed": run.seed}
    ok = all(f["feasible"] for v in feas.values() for f in v)
    if "taps" in run.cfg:
        report["schedule"] = netsim.schedule_from_taps(table, run.cfg["taps"]).to_config()

    def text():
        lines = []
        for t, g in enumerate(table.slots, start=1):
            lines.append(f"slot {t}: " + ", ".join(f"{lid}={list(v)}" for lid, v in g.items()))
        for sink, v in feas.items():
            lines.append(f"sink {sink}: " + ", ".join(f"rank {f['rank']}/{net.n} flow {f['max_flow']}" for f in v))
        return "\n".join(lines)

    emit(run, report, text)
    return EXIT_OK if ok else EXIT_FAILED


def _codeword_table(pc, sched) -> list[str]:
    """Every codeword with its observation and syndrome, in power=(vector) form."""
    field = pc.field
    fmt = lambda v: f"{field.format_power(v)}={field.format_vector(v)}"
    head = [f"X{j + 1}" for j in range(pc.n)] + ["W", "S"]
    lines = [" | ".join(head)]
    for x in codes.iter_space(field, pc.n):
        xv = list(x)
        w = observe(sched, xv, field).tolist()
        s = codes.syndrome_decode(xv, pc)
        lines.append(" | ".join([fmt(v) for v in xv] + [str(tuple(w)), ", ".join(fmt(e.value) for e in s)]))
    return lines


def cmd_analyze(run: Run, args) -> int:
    pc = run.code()
    sched = run.schedule(pc)
    search = run.cfg.get("search", {})
    if sched is not None:
        table = analyzer.count_table(pc, sched, budget=run.budget, workers=run.workers)
        verdict = analyzer.verdict_from_table(table, sched, prefer_w=None)
        report = verdict.to_dict()
        report["mode"] = "schedule"
        if sched.mu == pc.n - pc.k and not sched.inactive and sched.active_full_rank():
            report["fiber_injective"] = analyzer.check_fiber_injectivity(pc, sched)
        lines = _codeword_table(pc, sched) if pc.n == 2 and pc.field.m == 2 else []
    else:
        mu = search.get("mu", pc.n - pc.k)
        verdict = analyzer.universal_m_strong_secure(
            pc, mu, duration=search.get("duration"), budget=run.budget, workers=run.workers,
            exhaustive=search.get("exhaustive", False),
        )
        report = verdict.to_dict()
        report["mode"] = "universal"
        report["mu"] = mu
        lines = []

    def text():
        head = [f"secure: {verdict.secure}", f"leakage: {verdict.leakage_bits} bits"]
        if verdict.witness:
            w = verdict.witness
            head.append(f"witness: w={w.w} N[{[str(e) for e in w.s]}]={w.count_s} N[{[str(e) for e in w.s_prime]}]={w.count_s_prime}")
        return "\n".join(head + lines)

    emit(run, report, text)
    if args.expect is not None and (args.expect == "secure") != verdict.secure:
        return EXIT_FAILED
    return EXIT_OK


def cmd_attack(run: Run) -> int:
    pc = run.code()
    mu = run.cfg.get("search", {}).get("mu")
    wit = attack.find_witness(pc, mu, budget=run.budget, workers=run.workers)
    report = {"witness": wit.to_dict()}
    lines = []
    is_example = pc.field.to_config() == config.DEFAULT_CONFIG["field"] and pc.H == ((1, pc.field.power(1)),)
    if is_example:
        ex = attack.reproduce_gf4_example(strict=False)
        report["example"] = ex.to_dict()
        lines = ["", "GF(4) example, slot 1 taps X1, slot 2 taps X1 + X2:"] + ex.table_lines()
        lines.append(f"observation {ex.observation}: candidates {ex.candidates}, I(S;W) = {ex.leakage_bits} bits")
    ok = wit.leakage_bits > 0 and (not is_example or report["example"]["leakage_bits"] > 0)

    def text():
        s, s2 = wit.syndromes
        out = [
            f"strategy: {wit.strategy} ({wit.label})",
            "schedule: " + json.dumps(wit.schedule.to_config()),
            f"observation: {list(wit.observation)}",
            f"N[{[str(e) for e in s]}] = {wit.counts[0]}, N[{[str(e) for e in s2]}] = {wit.counts[1]}",
            f"leakage: {wit.leakage_bits} bits",
            "replay: " + wit.replay_command(),
        ]
        return "\n".join(out + lines)

    emit(run, report, text)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_bounds(run: Run, args) -> int:
    grid = bounds.region_grid(args.n, args.k, args.m, args.max_mu, uncapped=args.uncapped)
    report = {"grid": [{**q.to_dict(), "verdict": v.verdict.value, "rule": v.rule} for q, v in grid],
              "uncapped_rule": args.uncapped}
    ok = True
    if args.cross_validate:
        field = run.field() if "field" in run.cfg else config.build_field({"p": args.q, "m": args.m})
        pc = run.code(field) if "code" in run.cfg else codes.gabidulin_parity_check(field, args.n, args.k)
        checks = [bounds.cross_validate(pc, q, uncapped=args.uncapped, budget=run.budget, workers=run.workers)
                  for q, _ in grid]
        report["cross_validation"] = [c.to_dict() for c in checks]
        ok = all(c.consistent for c in checks)

    def text():
        out = [bounds.format_grid(grid)]
        if args.cross_validate:
            out.append("")
            for c in checks:
                flag = "" if c.consistent else "  <-- INCONSISTENT"
                out.append(f"mu={c.query.mu} m'={c.query.duration}: predicted {c.predicted.verdict.value} "
                           f"({c.predicted.rule}), exhaustive {'Secure' if c.empirical_secure else 'Insecure'}{flag}")
        return "\n".join(out)

    emit(run, report, text)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_reproduce(run: Run) -> int:
    ex = attack.reproduce_gf4_example(strict=False)

    def text():
        out = ex.table_lines()
        out.append(f"observation {ex.observation}: candidates {ex.candidates}")
        out.append(f"I(S;W) = {ex.leakage_bits} bits; fixed taps: {ex.static_leakage}")
        out += [f"[{'PASS' if p else 'FAIL'}] {name}" for name, p in ex.checks]
        return "\n".join(out)

    emit(run, ex.to_dict(), text)
    return EXIT_OK if ex.ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--field", help="field JSON or @file")
    common.add_argument("--code", help="code JSON or @file")
    common.add_argument("--budget", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--format", choices=["json", "text"])

    parser = argparse.ArgumentParser(prog="nctap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("field", parents=[common], help="element table of the field")
    sub.add_parser("code", parents=[common], help="parity check and brute-force MRD check")
    p = sub.add_parser("encode", parents=[common], help="coset-encode a secret")
    p.add_argument("--secret")
    p = sub.add_parser("decode", parents=[common], help="syndrome of a codeword")
    p.add_argument("--codeword")
    p = sub.add_parser("simulate", parents=[common], help="GCVs and feasibility of a network")
    p.add_argument("--network")
    p.add_argument("--taps")
    p.add_argument("--slots", type=int, default=1)
    p.add_argument("--random", action="store_true", help="draw random local coefficients")
    p.add_argument("--time-varying", action="store_true")
    p = sub.add_parser("analyze", parents=[common], help="exact leakage of one schedule or all schedules")
    p.add_argument("--schedule")
    p.add_argument("--network")
    p.add_argument("--taps")
    p.add_argument("--mu", type=int)
    p.add_argument("--duration", type=int)
    p.add_argument("--expect", choices=["secure", "insecure"])
    p = sub.add_parser("attack", parents=[common], help="find and verify a leaking schedule")
    p.add_argument("--mu", type=int)
    p = sub.add_parser("bounds", parents=[common], help="restricted-duration region table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--max-mu", type=int)
    p.add_argument("--uncapped", action="store_true", help="rule 4 with mu in place of min(mu, n), plus mu <= n - 1")
    p.add_argument("--cross-validate", action="store_true")
    sub.add_parser("reproduce-example", parents=[common], help="rebuild the GF(4) example table")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = Run(args)
        cmd = args.command
        if cmd == "field":
            return cmd_field(run)
        if cmd == "code":
            return cmd_code(run)
        if cmd == "encode":
            return cmd_encode(run)
        if cmd == "decode":
            return cmd_decode(run)
        if cmd == "simulate":
            return cmd_simulate(run, args)
        if cmd == "analyze":
            return cmd_analyze(run, args)
        if cmd == "attack":
            return cmd_attack(run)
        if cmd == "bounds":
            return cmd_bounds(run, args)
        return cmd_reproduce(run)
    except BudgetExceeded as exc:
        print(f"nctap: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, NctapError) as exc:
        print(f"nctap: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
