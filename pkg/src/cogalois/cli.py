"""Command line front end.

Exit codes: 0 pass, 1 mathematical violation, 2 input error, 3 bound exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .catalog import cyclic
from .classify import FILTERS, enumerate_mncg, enumerate_mnk, family_iii_flags, is_mncg, is_mnk
from .cocycle import triple_from_json, triple_to_json
from .errors import BadParameters, CogaloisError, InvariantViolation, ParseError
from .groups import find_isomorphism, group_from_json, group_to_json
from .kneser import is_cogalois_triple, triple_summary
from .operators import gamma_group_from_json
from .rings import EisensteinData, build_local_ring, principal_unit_triples, quadratic_family
from .selfaction import adequate_units, deform, is_adequate, self_action, unit_self_action
from .suites import SUITES, run_suite


@dataclass
class RunConfig:
    command: str
    max_gamma: int = 16
    max_g: int = 16
    filter: str = "character"
    workers: int = 1
    seed: int = 0
    out: Optional[str] = None
    report: str = "json"

    def __post_init__(self) -> None:
        if self.max_gamma < 1 or self.max_g < 1:
            raise BadParameters("bounds must be positive")
        if self.workers < 1:
            raise BadParameters("--workers must be at least 1")


def _load(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _text(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {json.dumps(v, sort_keys=True)}" for v in obj)
    return f"{pad}{obj}"


def _emit(cfg: RunConfig, obj: Any) -> None:
    text = _dump(obj) if cfg.report == "json" else _text(obj)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _kind(obj: Any) -> str:
    if isinstance(obj, dict):
        if "gamma_group" in obj:
            return "triple"
        if "action" in obj:
            return "gamma-group"
        if "table" in obj:
            return "group"
    raise ParseError("expected a group, gamma-group or triple object")


# commands ------------------------------------------------------------------------------


def cmd_validate(cfg: RunConfig, path: str) -> int:
    obj = _load(path)
    kind = _kind(obj)
    try:
        if kind == "group":
            group_from_json(obj)
        elif kind == "gamma-group":
            gamma_group_from_json(obj)
        else:
            triple_from_json(obj)
    except InvariantViolation as exc:
        print(f"{path}: invalid {kind}: {exc}", file=sys.stderr)
        return exc.exit_code
    print(f"{path}: valid {kind}")
    return 0


def check_report(obj: dict) -> dict:
    t = triple_from_json(obj)
    out = triple_summary(t)
    if t.is_generating:
        v = is_mnk(t)
        out["mnk"] = v.value
        out["mnk_certificate"] = v.certificate
    if t.is_surjective:
        v = is_mncg(t)
        out["mncg"] = v.value
        out["mncg_certificate"] = v.certificate
    return out


def cmd_check(cfg: RunConfig, path: str) -> int:
    _emit(cfg, check_report(_load(path)))
    return 0


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    rep = run_suite(suite, workers=cfg.workers, seed=cfg.seed)
    out = rep.to_json()
    out["suite"] = suite
    out.get("data", {}).pop("seconds", None)  # keep the output deterministic
    _emit(cfg, out)
    return 0 if rep.ok else 1


def cmd_enum(cfg: RunConfig, kind: str, max_exponent: Optional[int]) -> int:
    if kind == "mnk":
        run = enumerate_mnk(cfg.max_gamma, cfg.max_g, cfg.filter, cfg.workers)
        _emit(cfg, run.to_json())
    else:
        run = enumerate_mncg(cfg.max_gamma, cfg.max_g, cfg.filter, cfg.workers, max_exponent)
        out = run.to_json()
        out["family_iii_flags"] = family_iii_flags(run)
        _emit(cfg, out)
    return 0


def cmd_adequate_units(cfg: RunConfig, n: int, method: str) -> int:
    _emit(cfg, {"n": n, "method": method, "adequate_units": adequate_units(n, method)})
    return 0


def _unit_action_on(G, u: int):
    """The unit self-action of Z/n transported to a cyclic group G."""
    n = G.order
    iso = find_isomorphism(cyclic(n), G)
    if iso is None:
        raise BadParameters("--unit needs a cyclic group")
    base = unit_self_action(n, u)
    omega = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            omega[iso(x)][iso(y)] = iso(base.omega[x][y])
    return self_action(G, omega)


def cmd_deform(cfg: RunConfig, path: str, unit: Optional[int], action: Optional[str]) -> int:
    G = group_from_json(_load(path))
    if (unit is None) == (action is None):
        raise BadParameters("give exactly one of --unit and --action")
    sa = _unit_action_on(G, unit) if unit is not None else self_action(G, _load(action))
    out: dict = {"group": G.name, "adequate": is_adequate(sa)}
    if out["adequate"]:
        d = deform(sa)
        out["deformed"] = group_to_json(d.group)
        out["forward"] = {"kneser": d.forward.is_surjective, "cogalois": bool(is_cogalois_triple(d.forward))}
        out["backward"] = {"kneser": d.backward.is_surjective, "cogalois": bool(is_cogalois_triple(d.backward))}
    _emit(cfg, out)
    return 0


def cmd_ring(cfg: RunConfig, eisenstein: str, emit: Optional[str]) -> int:
    R = build_local_ring(EisensteinData.parse(eisenstein))
    res = principal_unit_triples(R)
    out = res.to_json()
    if emit:
        triples = [t for t, flag in zip(res.triples, (res.mnk[o[0]] for o in res.orbits)) if flag]
        if not triples:
            raise BadParameters(f"{R.name} admits no mnK injective cocycle to emit")
        with open(emit, "w") as fh:
            fh.write(_dump(triple_to_json(triples[0])) + "\n")
        out["emitted"] = emit
    _emit(cfg, out)
    return 0


def parse_lambda(text: str, s: int) -> tuple[list[int], list[list[int]]]:
    """'l1,..,ls;a11,..,a1s;..;as1,..,ass' into (lambda0, Lam)."""
    try:
        rows = [[int(x) for x in part.split(",")] for part in text.replace(" ", "").split(";")]
    except ValueError as exc:
        raise ParseError(f"cannot parse --lambda {text!r}") from exc
    if len(rows) != s + 1:
        raise ParseError(f"--lambda needs {s + 1} ';'-separated rows")
    return rows[0], rows[1:]


def cmd_quad_family(cfg: RunConfig, p: int, s: int, lam: str) -> int:
    lambda0, L = parse_lambda(lam, s)
    q = quadratic_family(p, s, lambda0, L)
    _emit(
        cfg,
        {
            "p": p,
            "s": s,
            "lambda0": list(q.lambda0),
            "Lambda": [list(r) for r in q.Lam],
            "det": q.det,
            "mnk": q.verdict,
            "triple": triple_to_json(q.triple),
        },
    )
    return 0


# argument parsing -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-gamma", type=int, default=16)
    common.add_argument("--max-g", type=int, default=16)
    common.add_argument("--filter", choices=FILTERS, default="character")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")
    common.add_argument("--report", choices=("json", "text"), default="json")

    ap = argparse.ArgumentParser(prog="cogalois", description="Finite coGalois and Kneser triples.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", parents=[common], help="validate a group, gamma-group or triple file")
    p.add_argument("path")
    p = sub.add_parser("check", parents=[common], help="full report on a triple file")
    p.add_argument("path")
    p = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    p.add_argument("suite", help=", ".join(SUITES))
    sub.add_parser("enum-mnk", parents=[common], help="enumerate minimal non-Kneser triples")
    p = sub.add_parser("enum-mncg", parents=[common], help="enumerate minimal non-coGalois triples")
    p.add_argument("--max-exponent", type=int)
    p = sub.add_parser("adequate-units", parents=[common], help="adequate units modulo N")
    p.add_argument("n", type=int)
    p.add_argument("--method", choices=("brute", "criterion", "both"), default="both")
    p = sub.add_parser("deform", parents=[common], help="deform a group by a self-action")
    p.add_argument("path")
    p.add_argument("--unit", type=int)
    p.add_argument("--action")
    p = sub.add_parser("ring", parents=[common], help="principal-unit triples of a local ring")
    p.add_argument("--eisenstein", required=True, help="p,n,e,t,a0,...,a_{e-1}")
    p.add_argument("--emit")
    p = sub.add_parser("quad-family", parents=[common], help="one member of the quadratic family")
    p.add_argument("p", type=int)
    p.add_argument("s", type=int)
    p.add_argument("--lambda", dest="lam", required=True, help="'l1,..,ls;row1;..;rows'")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            args.command, args.max_gamma, args.max_g, args.filter, args.workers, args.seed, args.out, args.report
        )
        c = args.command
        if c == "validate":
            return cmd_validate(cfg, args.path)
        if c == "check":
            return cmd_check(cfg, args.path)
        if c == "verify":
            return cmd_verify(cfg, args.suite)
        if c in ("enum-mnk", "enum-mncg"):
            return cmd_enum(cfg, c[5:], getattr(args, "max_exponent", None))
        if c == "adequate-units":
            return cmd_adequate_units(cfg, args.n, args.method)
        if c == "deform":
            return cmd_deform(cfg, args.path, args.unit, args.action)
        if c == "ring":
            return cmd_ring(cfg, args.eisenstein, args.emit)
        if c == "quad-family":
            return cmd_quad_family(cfg, args.p, args.s, args.lam)
    except CogaloisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 2


if __name__ == "__main__":
    sys.exit(main())
