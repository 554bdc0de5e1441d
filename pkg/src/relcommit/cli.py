"""Command line entry point: ``relcommit <command> ...``.

Exit status 0 on success, 1 on a validation error, 2 when an audit fails.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, replace
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Any, Callable, Sequence

from relcommit import __version__
from relcommit.bits import BitString
from relcommit.netsim import CausalityError, causality_violations
from relcommit.reports import INSECURE, RunConfig, SecurityReport, ValidationError, canonical_json, envelope

log = logging.getLogger("relcommit")

EXIT_OK, EXIT_INVALID, EXIT_AUDIT = 0, 1, 2


@dataclass
class Artifact:
    kind: str            # "json", "jsonl" or "csv"
    payload: Any         # dict for json, str otherwise
    status: int = EXIT_OK


# -- simulate ---------------------------------------------------------------

def _parse_adversary(text: str | None) -> dict | None:
    if text is None:
        return None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"--adversary is not valid JSON: {exc}") from None
    if not isinstance(spec, dict) or "strategy" not in spec:
        raise ValidationError('--adversary needs an object like {"strategy": "zeros", "challenge": 1}')
    if spec.get("challenge") not in (0, 1):
        raise ValidationError("the adversary's challenge must be 0 or 1")
    return spec


def _simulate(cfg: RunConfig):
    from relcommit.protocols import distributed_ot_run, multiround_run, sbgkw_run, secret_sharing_bc_run
    from relcommit.protocols import multiround as mr
    from relcommit.protocols import sbgkw as sb

    p = cfg.params
    protocol = p["protocol"]
    adv = _parse_adversary(p.get("adversary"))
    seed = p.get("seed", 0)
    if protocol == "sbgkw":
        n = p.get("n", 8)
        kwargs: dict = {}
        if adv:
            strategies = {"zeros": sb.zeros_adversary, "expiry": sb.expiry_adversary}
            if adv["strategy"] not in strategies:
                raise ValidationError(f"unknown sbgkw adversary {adv['strategy']!r}; choose from {sorted(strategies)}")
            a = strategies[adv["strategy"]](n)
            if "global_command" in adv:
                a = replace(a, global_command=bool(adv["global_command"]))
            kwargs = {"adversary": a, "challenge": adv["challenge"]}
        t_open = Fraction(p.get("t_open", "1"))
        return sbgkw_run(n, p.get("d", 0), t_open=t_open, seed=seed, **kwargs)
    if protocol == "multiround":
        n, m = p.get("n", 8), p.get("m", 2)
        kwargs = {}
        if adv:
            if adv["strategy"] != "zeros":
                raise ValidationError(f"unknown multiround adversary {adv['strategy']!r}; choose from ['zeros']")
            a = mr.zeros_adversary(n, m, bool(adv.get("global_command", True)))
            kwargs = {"adversary": a, "challenge": adv["challenge"]}
        return multiround_run(n, m, p.get("d", 0), seed=seed, distance_km=p.get("distance_km"), **kwargs)
    if adv:
        raise ValidationError(f"no scripted adversaries for {protocol}")
    if protocol == "secret-sharing":
        return secret_sharing_bc_run(p.get("d", 0), seed=seed)
    if protocol == "dot":
        try:
            m0, m1 = BitString.from_str(p["m0"]), BitString.from_str(p["m1"])
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"dot needs binary --m0 and --m1 of equal length ({exc})") from None
        return distributed_ot_run(m0, m1, p.get("c", 0), seed=seed)
    raise ValidationError(f"unknown protocol {protocol!r}")


def cmd_simulate(cfg: RunConfig) -> Artifact:
    try:
        outcome = _simulate(cfg)
    except CausalityError as exc:
        raise ValidationError(f"strategy is not causal: {exc}") from None
    problems = causality_violations(outcome.transcript, outcome.scenario)
    summary = outcome.to_json()
    log.info("simulate %s: %s", cfg.params["protocol"], json.dumps(summary, sort_keys=True))
    status = EXIT_OK
    if problems:
        for msg in problems:
            log.error("causality audit: %s", msg)
        status = EXIT_AUDIT
    if cfg.params.get("summary"):
        return Artifact("json", envelope(cfg, summary), status)
    return Artifact("jsonl", outcome.transcript.to_jsonl(), status)


# -- bound ------------------------------------------------------------------

def cmd_bound_multiround(cfg: RunConfig) -> Artifact:
    from relcommit.games.bounds import recursive_bound, simplified_bound

    p = cfg.params
    n, m = p["n"], p["m"]
    q = 1 << n
    rec = recursive_bound(q, m)
    simp = simplified_bound(n, m)
    report = SecurityReport(
        "multiround", {"n": n, "m": m, "q": f"2^{n}"}, rec.last if rec.last < 1 else INSECURE, rec.formula,
        flags={"secure": rec.last < 1},
        values={"recursive": list(rec.terms), "simplified": list(simp.terms), "simplified_formula": simp.formula,
                "binding": "p0 + p1 <= 1 + epsilon"},
        units={"recursive": "probability", "simplified": "probability"},
    )
    return Artifact("json", envelope(cfg, report.to_json()))


def cmd_bound_chshn(cfg: RunConfig) -> Artifact:
    from relcommit.games.bounds import chshn_bounds

    p = cfg.params
    b = chshn_bounds(p["n"])
    quantum = p.get("adversary", "classical") == "quantum"
    eps = b.quantum_epsilon if quantum else b.classical_epsilon
    formula = ("omega* <= 1/2 + 2^-(n+1)/2, epsilon = 2 omega* - 1 = sqrt(2) 2^-n/2" if quantum
               else "omega = 1/2 + 2^-(n+1), epsilon = 2 omega - 1 = 2^-n")
    report = SecurityReport(
        "chshn", {"n": p["n"], "adversary": "quantum" if quantum else "classical"},
        eps if eps < 1 else INSECURE, formula,
        flags={"secure": eps < 1},
        values={"game_value": b.quantum if quantum else b.classical, "log10_epsilon": math.log10(eps)},
        units={"game_value": "probability", "log10_epsilon": "log10 of probability"},
    )
    return Artifact("json", envelope(cfg, report.to_json()))


def _pair(p: dict):
    from relcommit.qcommit import BasisPair

    if p.get("overlap") is not None:
        return BasisPair.from_overlap(p["overlap"])
    return BasisPair.bb84()


def _device(p: dict):
    from relcommit.qcommit import DeviceModel

    return DeviceModel(mu=p.get("mu") if p.get("mu") is not None else 1.0, eta=p.get("eta", 1.0),
                       err=p.get("err", 0.0), gamma=p.get("gamma", 0.0), delta=p.get("delta", 0.0))


def cmd_bound_qbc(cfg: RunConfig) -> Artifact:
    from relcommit.qcommit import InfeasibleError, epsilon_bound, feasibility, multiphoton_epsilon

    p = cfg.params
    pair = _pair(p)
    try:
        eb = epsilon_bound(p["n"], p.get("delta", 0.0), pair)
    except InfeasibleError as exc:
        raise ValidationError(str(exc)) from None
    values = eb.to_json()
    epsilon = values.pop("epsilon")
    formula = values.pop("formula")
    flags: dict = {"tolerance_ok": True}
    units = {"lambda0": "probability", "lambda1": "error fraction", "exact": "probability",
             "chernoff": "probability"}
    if p.get("mu") is not None:
        dev = _device(p)
        f = feasibility(dev, pair)
        flags.update(correct=f.correct, secure=f.secure, combined=f.combined, achievable=f.achievable)
        values["feasibility_margins"] = dict(f.margins)
        values["best_mu"] = f.best_mu
        if p.get("gamma"):
            mp = multiphoton_epsilon(p["n"], dev.gamma, dev.delta, dev.mu, pair)
            values["multiphoton"] = mp.to_json()
            units["multiphoton"] = "probability"
    report = SecurityReport("qbc", {k: p.get(k) for k in ("n", "delta", "overlap", "mu", "eta", "gamma", "err")},
                            epsilon, formula, flags, values, units)
    return Artifact("json", envelope(cfg, report.to_json()))


# -- game -------------------------------------------------------------------

def _game(p: dict):
    from relcommit.games import chshn_game, product_game

    if p.get("game", "product") == "chshn":
        if p.get("n") is None:
            raise ValidationError("the chshn game needs --n")
        return chshn_game(p["n"])
    if p.get("q") is None or p.get("m") is None:
        raise ValidationError("the product game needs --q and --m")
    return product_game(p["q"], p["m"])


def cmd_game_value(cfg: RunConfig) -> Artifact:
    from relcommit.games import BudgetExceeded, classical_value_bruteforce

    g = _game(cfg.params)
    try:
        res = classical_value_bruteforce(g, budget=cfg.params.get("budget", 2**32))
    except BudgetExceeded as exc:
        raise ValidationError(str(exc)) from None
    return Artifact("json", envelope(cfg, {
        "game": g.name, "value": str(res.value), "value_float": float(res.value),
        "strategy_count": res.strategy_count, "witness": res.witness.to_json(),
    }))


def cmd_game_bound(cfg: RunConfig) -> Artifact:
    """Bound series for the product game, checked against brute force when it fits the budget."""
    from relcommit.games import DEFAULT_BUDGET, classical_value_bruteforce
    from relcommit.games.bounds import rational_le_float, recursive_bound, simplified_bound

    p = cfg.params
    q, m = p["q"], p["m"]
    rec = recursive_bound(q, m)
    simp = simplified_bound(q.bit_length() - 1, m)
    result: dict = {"q": q, "m": m, "recursive": list(rec.terms), "simplified": list(simp.terms),
                    "formula": rec.formula, "simplified_formula": simp.formula}
    g = _game({**p, "game": "product"})
    budget = p.get("budget", DEFAULT_BUDGET)
    status = EXIT_OK
    if g.strategy_count() <= budget:
        res = classical_value_bruteforce(g, budget=budget)
        ok = rational_le_float(res.value, rec.last)
        result.update(value=str(res.value), value_float=float(res.value), within_bound=ok)
        if not ok:
            log.error("brute-force value %s exceeds the bound %r", res.value, rec.last)
            status = EXIT_AUDIT
    else:
        result.update(value=None, within_bound=None,
                      bruteforce_skipped=f"{g.strategy_count()} strategies exceed the budget {budget}")
    return Artifact("json", envelope(cfg, result), status)


# -- qbc feasibility ----------------------------------------------------------

def parse_sweep(items: Sequence[str]) -> dict[str, list[float]]:
    """``name=start:stop:step`` (inclusive, decimal exact) or ``name=v1,v2,...``."""
    from relcommit.qcommit import SWEEP_FIELDS

    out: dict[str, list[float]] = {}
    for item in items:
        name, sep, spec = item.partition("=")
        if not sep or name not in SWEEP_FIELDS:
            raise ValidationError(f"sweep axis must look like name=start:stop:step with name in {list(SWEEP_FIELDS)}")
        try:
            if ":" in spec:
                start, stop, step = (Decimal(s) for s in spec.split(":"))
                if step <= 0 or stop < start:
                    raise ValidationError(f"sweep {name}: need step > 0 and stop >= start")
                count = int((stop - start) / step) + 1
                if count > 10**6:
                    raise ValidationError(f"sweep {name} has {count} points; limit is 10^6")
                out[name] = [float(start + i * step) for i in range(count)]
            else:
                out[name] = [float(Decimal(v)) for v in spec.split(",") if v]
        except (InvalidOperation, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"cannot parse sweep {item!r}") from None
    return out


def cmd_qbc_feasibility(cfg: RunConfig) -> Artifact:
    from relcommit.qcommit import feasibility, feasibility_sweep, rows_to_csv

    p = cfg.params
    pair = _pair(p)
    base = _device(p)
    if p.get("sweep"):
        try:
            rows = feasibility_sweep(parse_sweep(p["sweep"]), base, pair)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
        return Artifact("csv", rows_to_csv(rows))
    return Artifact("json", envelope(cfg, feasibility(base, pair).to_json()))


# -- spacetime ----------------------------------------------------------------

def cmd_spacetime_graph(cfg: RunConfig) -> Artifact:
    from relcommit.spacetime import build_graph, load_scenario

    try:
        events = load_scenario(cfg.params["file"])
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise ValidationError(f"cannot load {cfg.params['file']}: {exc}") from None
    g = build_graph(events)
    return Artifact("json", envelope(cfg, {**g.to_json(), "acyclic": g.is_acyclic()}),
                    EXIT_OK if g.is_acyclic() else EXIT_AUDIT)


def cmd_spacetime_window(cfg: RunConfig) -> Artifact:
    from relcommit.spacetime import light_time, max_commitment_time

    km = cfg.params["distance_km"]
    w = max_commitment_time(km, physical=True)
    return Artifact("json", envelope(cfg, {
        "distance_km": km, "light_time_s": light_time(km), "max_commitment_time_s": w.seconds,
        "formula": "one-way time = s / c; commitment window = s / (2 c), c = 299792.458 km/s",
    }))


# -- certify ------------------------------------------------------------------

def cmd_certify_classical(cfg: RunConfig) -> Artifact:
    from relcommit.certify import exhaustive_classical, sampled_classical

    p = cfg.params
    n = p["n"]
    exhaustive = (1 << n) ** (1 << n) <= 1 << 20
    sweep = exhaustive_classical(n) if exhaustive else sampled_classical(n, p.get("samples", 1000), p.get("seed", 0))
    ok = sweep.holds and sweep.strong_implies_binding
    return Artifact("json", envelope(cfg, {
        "n": n, "mode": "exhaustive" if exhaustive else "sampled", "functions": sweep.functions,
        "worst_strong_binding": str(sweep.worst), "bound": sweep.bound, "worst_f": list(sweep.worst_f),
        "max_p0_plus_p1": str(sweep.binding_worst), "strong_implies_binding": sweep.strong_implies_binding,
        "formula": "Pr[D = d and unveil d] <= 2^-n/2 with D = 1 iff |f^-1(f(b))| > 2^n/2",
        "pass": ok,
    }), EXIT_OK if ok else EXIT_AUDIT)


def _phi(text: str | None):
    if not text:
        return (2 ** -0.5, 2 ** -0.5)
    try:
        parts = [complex(s.replace(" ", "")) for s in text.split(",")]
    except ValueError:
        raise ValidationError("--phi takes two complex amplitudes, e.g. 1,1j") from None
    if len(parts) != 2 or not any(parts):
        raise ValidationError("--phi takes two amplitudes, not both zero")
    return tuple(parts)


def cmd_certify_quantum(cfg: RunConfig) -> Artifact:
    import numpy as np

    from relcommit.certify import (
        attack_p, canonical_break_demo, exhaustive_deterministic_floor, quantum_attack_joint,
        random_stochastic_floor, statevector_attack_joint,
    )
    from relcommit.certify.quantum import MAX_STATEVECTOR_N as MAX_N_STATEVECTOR

    p = cfg.params
    n = p["n"]
    joint = quantum_attack_joint(n)
    result: dict = {"n": n, "p0": joint.p(0), "p1": joint.p(1), "p_closed_form": str(attack_p(n)),
                    "formula": "p0 = p1 = 1/2 + 2^-(n+1); Pr[D = d and unveil d] >= Pr[D = d] / 2"}
    ok = True
    if n <= MAX_N_STATEVECTOR:
        diff = float(np.abs(joint.probs - statevector_attack_joint(n).probs).max())
        result["statevector_max_deviation"] = diff
        ok = ok and diff < 1e-12
    searches = []
    if (1 << n) ** 2 <= 16:
        searches.append(exhaustive_deterministic_floor(n, joint))
    if n <= 4:
        searches.append(random_stochastic_floor(n, p.get("samples", 10_000), p.get("seed", 0), joint))
    result["floor_searches"] = [s.to_json() for s in searches]
    ok = ok and all(s.holds for s in searches)
    if p.get("demo_canonical"):
        if n > MAX_N_STATEVECTOR:
            raise ValidationError(f"--demo-canonical needs n <= {MAX_N_STATEVECTOR}")
        demo = canonical_break_demo(n, _phi(p.get("phi")), p.get("theta", 0))
        result["canonical_break"] = demo.to_json()
        ok = ok and demo.ok
    result["pass"] = ok
    return Artifact("json", envelope(cfg, result), EXIT_OK if ok else EXIT_AUDIT)


# -- wiring -------------------------------------------------------------------

COMMANDS: dict[str, Callable[[RunConfig], Artifact]] = {
    "simulate": cmd_simulate,
    "bound multiround": cmd_bound_multiround,
    "bound chshn": cmd_bound_chshn,
    "bound qbc": cmd_bound_qbc,
    "game value": cmd_game_value,
    "game bound": cmd_game_bound,
    "qbc feasibility": cmd_qbc_feasibility,
    "spacetime graph": cmd_spacetime_graph,
    "spacetime window": cmd_spacetime_window,
    "certify classical": cmd_certify_classical,
    "certify quantum-attack": cmd_certify_quantum,
}


def dispatch(cfg: RunConfig, timing: bool = False) -> Artifact:
    if cfg.subcommand not in COMMANDS:
        raise ValidationError(f"unknown subcommand {cfg.subcommand!r}")
    cfg.validate()
    start = time.perf_counter()
    art = COMMANDS[cfg.subcommand](cfg)
    elapsed = time.perf_counter() - start
    if timing:
        if art.kind == "json":
            art.payload["elapsed_s"] = elapsed
        else:
            log.info("elapsed %.6f s", elapsed)
    return art


def render(art: Artifact) -> str:
    return canonical_json(art.payload) if art.kind == "json" else art.payload


def _common_options(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global options with suppressed defaults so they do not reset them
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the artifact here instead of stdout", **kw)
    common.add_argument("--timing", action="store_true", help="add wall-clock time (breaks byte-identical output)",
                        **kw)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr", **kw)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options(suppress=True)
    ap = argparse.ArgumentParser(prog="relcommit", description="Relativistic bit commitment toolkit",
                                 parents=[_common_options(suppress=False)])
    ap.add_argument("--version", action="version", version=f"relcommit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[common], help="run a protocol in the spacetime simulator")
    sim.add_argument("protocol", choices=["sbgkw", "multiround", "secret-sharing", "dot"])
    sim.add_argument("--n", type=int)
    sim.add_argument("--m", type=int)
    sim.add_argument("--d", type=int)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--t-open", dest="t_open", help="opening time (sbgkw), exact fraction like 3/2")
    sim.add_argument("--distance-km", dest="distance_km", type=float, help="site separation (multiround)")
    sim.add_argument("--m0")
    sim.add_argument("--m1")
    sim.add_argument("--c", type=int, help="choice bit (dot)")
    sim.add_argument("--adversary", help='JSON, e.g. {"strategy": "zeros", "challenge": 1, "global_command": false}')
    sim.add_argument("--summary", action="store_true", help="emit the outcome JSON instead of the transcript")

    bound = sub.add_parser("bound", parents=[common], help="closed-form security bounds")
    bsub = bound.add_subparsers(dest="which", required=True)
    b = bsub.add_parser("multiround", parents=[common])
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int, required=True)
    b = bsub.add_parser("chshn", parents=[common])
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--adversary", choices=["classical", "quantum"], default="classical")
    b = bsub.add_parser("qbc", parents=[common])
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--delta", type=float, default=0.0)
    grp = b.add_mutually_exclusive_group()
    grp.add_argument("--overlap", type=float)
    grp.add_argument("--bb84", action="store_true")
    for name in ("mu", "eta", "gamma", "err"):
        b.add_argument(f"--{name}", type=float)

    game = sub.add_parser("game", parents=[common], help="brute-force game values")
    gsub = game.add_subparsers(dest="which", required=True)
    g = gsub.add_parser("value", parents=[common])
    g.add_argument("--game", choices=["product", "chshn"], default="product")
    g.add_argument("--q", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--budget", type=int)
    g = gsub.add_parser("bound", parents=[common])
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--budget", type=int)

    qbc = sub.add_parser("qbc", parents=[common], help="quantum commitment device analysis")
    qsub = qbc.add_subparsers(dest="which", required=True)
    f = qsub.add_parser("feasibility", parents=[common])
    f.add_argument("--sweep", nargs="+", metavar="AXIS", help="e.g. err=0.14:0.15:0.0001 eta=0.1,0.5,1")
    f.add_argument("--overlap", type=float)
    for name, default in (("mu", 1.0), ("eta", 1.0), ("gamma", 0.0), ("err", 0.0), ("delta", 0.0)):
        f.add_argument(f"--{name}", type=float, default=default)

    st = sub.add_parser("spacetime", parents=[common], help="light-cone tools")
    ssub = st.add_subparsers(dest="which", required=True)
    s = ssub.add_parser("graph", parents=[common])
    s.add_argument("file")
    s = ssub.add_parser("window", parents=[common])
    s.add_argument("--distance-km", dest="distance_km", type=float, required=True)

    cert = sub.add_parser("certify", parents=[common], help="strong-binding certification")
    csub = cert.add_subparsers(dest="which", required=True)
    c = csub.add_parser("classical", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--samples", type=int)
    c.add_argument("--seed", type=int)
    c = csub.add_parser("quantum-attack", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--demo-canonical", dest="demo_canonical", action="store_true")
    c.add_argument("--phi", help="stored qubit amplitudes, e.g. 1,1 or 0.6,0.8j")
    c.add_argument("--theta", type=int, choices=[0, 1], default=0)
    c.add_argument("--samples", type=int)
    c.add_argument("--seed", type=int)
    return ap


_NOT_PARAMS = {"command", "which", "out", "timing", "verbose", "bb84"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    sub = ns.command if ns.command == "simulate" else f"{ns.command} {ns.which}"
    params = {k: v for k, v in vars(ns).items() if k not in _NOT_PARAMS and v is not None and v is not False}
    return RunConfig(sub, params, ns.out)


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = config_from_args(ns)
    try:
        art = dispatch(cfg, timing=ns.timing)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = render(art)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return art.status


if __name__ == "__main__":
    sys.exit(main())
