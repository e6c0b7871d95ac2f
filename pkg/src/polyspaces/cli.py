"""Command-line front end: ``polyspaces <subcommand> [flags]``.

Exit codes: 0 success, 1 a check or certificate failed, 2 usage or input error.
With ``--json`` results go to stdout as JSON and diagnostics to stderr as JSON.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from typing import Optional, Sequence

from .errors import (
    InternalConsistencyError,
    InvalidInputError,
    NumericalFailure,
    PolySpacesError,
    RefineFirstError,
    UnsupportedParametersError,
)
from .homology import (
    FieldChoice,
    betti_loop_model,
    betti_of_formula,
    e1_table,
    space_formula,
    stability_dims,
    verify_theorems,
)
from .oracle import fox_neuwirth_betti, pi0_experiment_12, planted_root_fuzz
from .polyarith import Poly, parse_rational
from .scanning import eval_real_loop, loop_class_mod2
from .spaces import (
    Family,
    System,
    double_to_hplus,
    is_member,
    jet_embedding,
    loop_product,
    make_system,
    stabilize,
    stratum_signature,
    system_from_json,
    system_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SPACE_NAMES = {"polyc": "PolyC", "polyr": "PolyR", "qr": "QR", "b": "B", "p": "P"}
FAMILY_NAMES = {f.value.lower(): f for f in Family}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input helpers


def _parse_poly(text: str) -> Poly:
    """Ascending coefficient list, e.g. "1,0,1" for z^2 + 1."""
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if not parts:
        raise InvalidInputError(f"empty polynomial {text!r}")
    return Poly(parse_rational(p) for p in parts)


def _load_json(text_or_path: str, is_path: bool):
    try:
        if is_path:
            with open(text_or_path) as fh:
                return json.load(fh)
        return json.loads(text_or_path)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {text_or_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed JSON: {exc}") from exc


def _family(args, default: Family) -> Family:
    if getattr(args, "family", None) is None:
        return default
    key = args.family.lower()
    if key not in FAMILY_NAMES:
        raise UsageError(f"unknown family {args.family!r}; one of {sorted(f.value for f in Family)}")
    return FAMILY_NAMES[key]


def _systems(args, default_family: Family) -> list[System]:
    family = _family(args, default_family)
    out = []
    for text in args.system or []:
        out.append(_from_obj(_load_json(text, False), family, args))
    for path in args.input or []:
        out.append(_from_obj(_load_json(path, True), family, args))
    if args.poly:
        if args.n is None:
            raise UsageError("--poly needs --n")
        out.append(make_system(family, [_parse_poly(p) for p in args.poly], args.n))
    for s in out:
        _match_flags(s, args)
    return out


def _from_obj(obj, family: Family, args) -> System:
    if isinstance(obj, dict) and isinstance(obj.get("system"), dict):
        obj = obj["system"]
    if isinstance(obj, dict) and "family" not in obj:
        obj = dict(obj, family=family.value)
    if isinstance(obj, dict) and getattr(args, "family", None) is not None:
        obj = dict(obj, family=family.value)
    if isinstance(obj, dict) and "n" not in obj and args.n is not None:
        obj = dict(obj, n=args.n)
    if isinstance(obj, dict) and "d" not in obj:
        degs = [len(p["coeffs"] if isinstance(p, dict) else p) - 1 for p in obj.get("polys", [])]
        if degs and len(set(degs)) > 1:
            obj = dict(obj, degrees=degs)
        elif degs:
            obj = dict(obj, d=degs[0])
    if not isinstance(obj, dict):
        raise InvalidInputError("system JSON must be an object")
    return system_from_json(obj)


def _match_flags(s: System, args) -> None:
    for name in ("d", "m", "n"):
        want = getattr(args, name, None)
        if want is not None and getattr(s.space, name) != want:
            raise InvalidInputError(f"--{name} {want} does not match the input ({getattr(s.space, name)})")


def _one_system(args, default_family: Family) -> System:
    systems = _systems(args, default_family)
    if len(systems) != 1:
        raise UsageError(f"expected exactly one input system, got {len(systems)}")
    return systems[0]


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join(f"--{n}" for n in missing))


def _seed(args) -> int:
    if args.seed is None:
        if args.json:
            raise UsageError("--seed is mandatory for stochastic subcommands with --json")
        return 0
    return args.seed


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, text, exit code)


def cmd_check(args):
    s = _one_system(args, Family.POLY_C)
    member = is_member(s)
    stratum = None
    if not member and all(p.is_real() for p in s.polys):
        sig = stratum_signature(s)
        stratum = list(sig.as_tuple()) if sig is not None else None
    payload = {"family": s.space.family.value, "d": s.space.d, "m": s.space.m, "n": s.space.n,
               "member": member, "stratum": stratum}
    text = f"family {s.space.family.value}: member={str(member).lower()}"
    if stratum is not None:
        text += f", stratum=({stratum[0]},{stratum[1]})"
    return payload, text, EXIT_OK


def cmd_jet(args):
    _require(args, "n")
    if not args.poly or len(args.poly) != 1:
        raise UsageError("jet takes exactly one --poly")
    out = jet_embedding(_parse_poly(args.poly[0]), args.n)
    payload = {"system": system_to_json(out), "member": is_member(out)}
    text = "\n".join(str(p) for p in out.polys) + f"\nmember of Poly_R (m={args.n}, n=1): {payload['member']}"
    return payload, text, EXIT_OK


def _system_output(out: System):
    return {"system": system_to_json(out)}, "\n".join(str(p) for p in out.polys), EXIT_OK


def cmd_stabilize(args):
    return _system_output(stabilize(_one_system(args, Family.POLY_R), slot=args.slot))


def cmd_product(args):
    systems = _systems(args, Family.POLY_R)
    if len(systems) != 2:
        raise UsageError("product needs exactly two input systems")
    return _system_output(loop_product(*systems))


def cmd_double(args):
    return _system_output(double_to_hplus(_one_system(args, Family.POLY_R)))


def cmd_scan(args):
    s = _one_system(args, Family.Q_R)
    loop = eval_real_loop(s, resolution=args.resolution)
    cls = loop_class_mod2(loop)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            loop.to_csv(fh)
    payload = {"points": len(loop.t), "max_step": loop.max_step(), "class_mod2": cls,
               "d_mod2": s.space.d % 2}
    text = f"{len(loop.t)} points, max chordal step {loop.max_step():.4f}, loop class {cls}"
    return payload, text, EXIT_OK


def _dims_text(dims) -> str:
    nz = dims.nonzero()
    return "{" + ", ".join(f"{q}: {v}" for q, v in nz.items()) + "}"


def cmd_betti(args):
    field = FieldChoice.parse(args.field)
    key = args.space.lower()
    if key == "loop":
        if args.N2 is None and args.N1 is None:
            raise UsageError("--space loop needs --N2 and/or --N1")
        qmax = args.qmax if args.qmax is not None else 30
        dims = betti_loop_model(args.N2, args.N1, field, qmax, args.james_cut).reduce()
        formula = None
    else:
        if key not in SPACE_NAMES:
            raise UsageError(f"unknown space {args.space!r}")
        _require(args, "d", "m", "n")
        f = space_formula(SPACE_NAMES[key], args.d, args.m, args.n)
        qmax = args.qmax if args.qmax is not None else stability_dims(args.d, args.m, args.n)[1] + 10
        dims = betti_of_formula(f, field, qmax)
        formula = f
    payload = {"space": key, "field": field.value, "qmax": qmax, "reduced": True,
               "dims": dict((str(q), v) for q, v in dims.nonzero().items()),
               "formula": formula.to_json() if formula else None}
    text = f"reduced dims {_dims_text(dims)}"
    if formula:
        text = f"{formula}\n{text}"
    return payload, text, EXIT_OK


def cmd_e1(args):
    _require(args, "d", "m", "n")
    table = e1_table(args.d, args.m, args.n, FieldChoice.parse(args.field), truncate=not args.untruncated)
    return table.to_json(), table.to_text(), EXIT_OK


def parse_grid(spec: str) -> list[tuple[int, int, int]]:
    """Cells (d, m, n) from e.g. "mn in {3,4,6}; d<=20" (also m/n/d in {...}, d>=N)."""
    sets: dict[str, set] = {}
    dmin, dmax = None, 30
    for clause in (c.strip() for c in spec.split(";")):
        if not clause:
            continue
        mt = re.fullmatch(r"(mn|m|n|d)\s+in\s+\{([\d,\s]+)\}", clause)
        if mt:
            sets[mt.group(1)] = {int(x) for x in mt.group(2).split(",") if x.strip()}
            continue
        mt = re.fullmatch(r"d\s*(<=|>=|<|>)\s*(\d+)", clause)
        if mt:
            op, v = mt.group(1), int(mt.group(2))
            if op == "<=":
                dmax = v
            elif op == "<":
                dmax = v - 1
            elif op == ">=":
                dmin = v
            else:
                dmin = v + 1
            continue
        raise UsageError(f"cannot parse grid clause {clause!r}")
    if "mn" not in sets and not ("m" in sets and "n" in sets):
        raise UsageError("grid needs an 'mn in {...}' clause (or both m and n sets)")
    if "d" in sets:
        dmax = max(sets["d"])
    cells = []
    top = max(sets.get("mn", {0}) | {max(sets.get("m", {1})) * max(sets.get("n", {1}))})
    for m in range(1, top + 1):
        for n in range(1, top + 1):
            if (m, n) == (1, 1) or m * n < 3:
                continue
            if "mn" in sets and m * n not in sets["mn"]:
                continue
            if "m" in sets and m not in sets["m"]:
                continue
            if "n" in sets and n not in sets["n"]:
                continue
            for d in range(max(n, dmin or n), dmax + 1):
                if "d" in sets and d not in sets["d"]:
                    continue
                cells.append((d, m, n))
    if not cells:
        raise UsageError(f"grid {spec!r} is empty")
    return sorted(cells)


def _verify_cell(task):
    d, m, n, field, qmax = task
    return verify_theorems(d, m, n, field, qmax).to_json()


def cmd_verify(args):
    fields = [FieldChoice.F2, FieldChoice.Q] if args.field.lower() == "both" else [FieldChoice.parse(args.field)]
    if args.grid:
        cells = parse_grid(args.grid)
    else:
        _require(args, "d", "m", "n")
        cells = [(args.d, args.m, args.n)]
    tasks = [(d, m, n, f, args.qmax) for (d, m, n) in cells for f in fields]
    threads = args.threads or os.cpu_count() or 1
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_verify_cell, tasks, chunksize=8))
    else:
        results = [_verify_cell(t) for t in tasks]
    failed = [r for r in results if not r["passed"]]
    payload = {"cells": results, "cell_count": len(results), "failed": len(failed),
               "passed": not failed}
    lines = [f"{len(results)} cells, {len(failed)} failed"]
    for r in failed:
        bad = [c for c in r["checks"] if not c["passed"]]
        lines.append(f"  FAIL d={r['d']} m={r['m']} n={r['n']} {r['field']}: "
                     + ", ".join(f"({c['id']}) at q={c['failures'][0][0]}" for c in bad))
    return payload, "\n".join(lines), EXIT_OK if not failed else EXIT_FAIL


def cmd_oracle(args):
    if args.kind == "fn":
        _require(args, "j")
        dims = fox_neuwirth_betti(args.j, args.qmax)
        return {"j": args.j, "dims": list(dims.dims)}, f"C_{args.j}: {list(dims.dims)}", EXIT_OK
    _require(args, "d", "m", "n")
    seed = _seed(args)
    rep = planted_root_fuzz(args.d, args.m, args.n, args.trials, seed, plant=args.kind == "fuzz")
    payload = rep.to_json()
    text = (f"{rep.trials} trials (seed {seed}): members {rep.member_count}, "
            f"strata {payload['stratum_histogram']}, failures {len(rep.failures)}")
    return payload, text, EXIT_OK if rep.ok else EXIT_FAIL


def cmd_pi0(args):
    _require(args, "d")
    seed = _seed(args)
    rep = pi0_experiment_12(args.d, args.trials, seed, paths=args.paths)
    payload = rep.to_json()
    text = (f"labels {payload['histogram']} (missing {rep.missing_labels}); "
            f"{rep.paths_checked} certified paths, {len(rep.path_violations)} violations "
            "(consistent with, not a proof of, the component count)")
    return payload, text, EXIT_OK if rep.ok else EXIT_FAIL


COMMANDS = {
    "check": cmd_check,
    "jet": cmd_jet,
    "stabilize": cmd_stabilize,
    "product": cmd_product,
    "double": cmd_double,
    "scan": cmd_scan,
    "betti": cmd_betti,
    "e1": cmd_e1,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "pi0": cmd_pi0,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--d", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--field", default="f2")
    common.add_argument("--qmax", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int, default=10_000)
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--json", action="store_true")

    inputs = _Parser(add_help=False)
    inputs.add_argument("--system", action="append", help="inline system JSON")
    inputs.add_argument("--input", action="append", help="path to a system JSON file")
    inputs.add_argument("--poly", action="append", help="ascending coefficients, e.g. 1,0,1")
    inputs.add_argument("--family", help="Poly_C, Poly_R, Q_R or Poly_R_Hplus")

    p = _Parser(prog="polyspaces", description="Spaces of non-resultant polynomial systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[common, inputs], help="membership and stratum")
    sub.add_parser("jet", parents=[common, inputs], help="f -> (f, f+f', ...)")
    sp = sub.add_parser("stabilize", parents=[common, inputs], help="degree d -> d+1")
    sp.add_argument("--slot", type=int, help="raise only this 1-based slot")
    sub.add_parser("product", parents=[common, inputs], help="loop product of two systems")
    sub.add_parser("double", parents=[common, inputs], help="map into the upper-half-plane family")
    sp = sub.add_parser("scan", parents=[common, inputs], help="real loop and its mod-2 class")
    sp.add_argument("--resolution", type=int, default=64)
    sp.add_argument("--csv", help="write the loop sample here")
    sp = sub.add_parser("betti", parents=[common], help="Betti numbers of a splitting or loop model")
    sp.add_argument("--space", required=True, help="polyC, polyR, QR, B, P or loop")
    sp.add_argument("--N2", type=int)
    sp.add_argument("--N1", type=int)
    sp.add_argument("--james-cut", type=int)
    sp = sub.add_parser("e1", parents=[common], help="E1 page")
    sp.add_argument("--untruncated", action="store_true")
    sp = sub.add_parser("verify", parents=[common], help="stable-range checks over a grid")
    sp.add_argument("--grid", help='e.g. "mn in {3,4,6}; d<=20"')
    sp.add_argument("--threads", type=int)
    sp = sub.add_parser("oracle", parents=[common], help="brute-force certificates")
    sp.add_argument("kind", choices=["fn", "fuzz", "unplanted"])
    sp.add_argument("--j", type=int)
    sp = sub.add_parser("pi0", parents=[common], help="components of Poly^{d,1}_2(R)")
    sp.add_argument("--paths", type=int, default=100)
    return p


def _emit_error(exc: BaseException, code: int, as_json: bool, stderr) -> int:
    if as_json:
        stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc),
                                 "exit_code": code}) + "\n")
    else:
        stderr.write(f"error: {exc}\n")
    return code


def _glue_values(argv: list[str]) -> list[str]:
    # "--poly -1,1" would otherwise read as an unknown option
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--poly" and i + 1 < len(argv) and re.match(r"-\d", argv[i + 1]):
            out.append(f"--poly={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        payload, text, code = COMMANDS[args.command](args)
    except (UsageError, InvalidInputError, UnsupportedParametersError) as exc:
        return _emit_error(exc, EXIT_USAGE, as_json, stderr)
    except (NumericalFailure, RefineFirstError, InternalConsistencyError, PolySpacesError) as exc:
        return _emit_error(exc, EXIT_FAIL, as_json, stderr)
    if as_json:
        if args.command == "verify":
            payload = {"command": ["polyspaces"] + argv,
                       "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                       **payload}
        stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        stdout.write(text + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
