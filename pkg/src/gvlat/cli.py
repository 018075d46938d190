"""Command-line front end.

Exit codes: 0 all requested checks pass, 1 a check fails, 2 usage error,
3 data error (the error name is printed).
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from fractions import Fraction

from . import extension, fock, modular
from .errors import ConvergenceNotReached, GVLatError, MalformedInput, NonDiscreteCharacter, TwistNotTrivial, Unsolvable
from .gvcat import GVCategory, axiom_sweep, sampled_axiom_sweep
from .lattice import discriminant_enumerate, from_json, random_coset
from .linalg import fmt_fraction, to_fraction

DEFAULT_ORDER = 10
DEFAULT_LEVEL = 6
DEFAULT_TOL = 1e-6
# structure tables and axiom sweeps grow like |G|^3 and |G|^4; larger groups are sampled
EXHAUSTIVE_LIMIT = 16
# failures of a verification, as opposed to bad input
CHECK_ERRORS = (ConvergenceNotReached, Unsolvable, TwistNotTrivial)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- input --------------------------------------------------------------------------

def load_data(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"{path} is not valid JSON") from exc
    return from_json(obj)


def parse_label(data, text: str):
    text = text.strip()
    try:
        if text.startswith("["):
            items = json.loads(text)
            if not isinstance(items, list):
                raise ValueError
        else:
            items = [t for t in text.split(",")]
        if any(isinstance(x, (bool, float)) for x in items):
            raise ValueError
        v = tuple(to_fraction(x) for x in items)
    except (ValueError, TypeError, ZeroDivisionError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"bad label {text!r}; expected comma-separated p/q entries") from exc
    if len(v) != data.dim:
        raise MalformedInput(f"label {text!r} must have {data.dim} entries")
    return data.coset(v)


def _threads() -> int:
    raw = os.environ.get("GVLAT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"GVLAT_THREADS must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise UsageError("GVLAT_THREADS must be a positive integer")
    return n


def _exhaustive(data, args) -> bool:
    return data.is_finite and (getattr(args, "exhaustive", False) or data.snf.order <= EXHAUSTIVE_LIMIT)


def _labels(data, args, rng=None, limit: bool = False) -> list:
    if data.is_finite and (not limit or _exhaustive(data, args)):
        return discriminant_enumerate(data)
    rng = rng or random.Random(args.seed)
    pool = {data.zero(), data.ff}
    target = min(args.samples, 24, data.snf.order) if data.is_finite else min(args.samples, 24)
    while len(pool) < target:
        pool.add(random_coset(data, rng))
    return sorted(pool)


# -- commands --------------------------------------------------------------------

def cmd_validate(args):
    data = load_data(args.input)
    return {"valid": True, "dim": data.dim, "rank": data.lattice.rank, "discriminant_finite": data.is_finite}, True


def cmd_decompose(args):
    return load_data(args.input).to_json(), True


def cmd_structure(args):
    data = load_data(args.input)
    cat = GVCategory(data)
    labels = _labels(data, args, limit=True)
    sampled = not _exhaustive(data, args)
    rows = [
        {
            "label": a.to_json(),
            "q": cat.quadratic_form(a).to_json(),
            "theta": cat.twist(a).to_json(),
            "dual": cat.dual_object(a).to_json(),
        }
        for a in labels
    ]
    braid = [[cat.braiding(a, b).to_json() for b in labels] for a in labels]
    assoc = [
        {"labels": [a.to_json(), b.to_json(), c.to_json()], "F": cat.associator(a, b, c).to_json()}
        for a, b, c in itertools.product(labels, repeat=3)
    ]
    out = {
        "labels": [a.to_json() for a in labels],
        "objects": rows,
        "braiding": braid,
        "associator": assoc,
        "dualizing_object": cat.dualizing_object().to_json(),
        "sampled": sampled,
    }
    if sampled:
        out["seed"] = args.seed
    return out, True


def cmd_axioms(args):
    data = load_data(args.input)
    cat = GVCategory(data)
    if _exhaustive(data, args):
        rep = axiom_sweep(cat, discriminant_enumerate(data))
        rep["mode"] = "exhaustive"
    else:
        rng = random.Random(args.seed)
        pool = [random_coset(data, rng) for _ in range(max(8, args.samples // 4))] + [data.zero(), data.ff]
        rep = sampled_axiom_sweep(cat, pool, rng, args.samples)
        rep["mode"] = "sampled"
        rep["seed"] = args.seed
        rep["samples"] = args.samples
    return rep, rep["pass"]


def cmd_fuse(args):
    data = load_data(args.input)
    cat = GVCategory(data)
    a, b = parse_label(data, args.a), parse_label(data, args.b)
    return {"a": a.to_json(), "b": b.to_json(), "fusion": cat.fuse(a, b).to_json()}, True


def cmd_dual(args):
    data = load_data(args.input)
    cat = GVCategory(data)
    a = parse_label(data, args.a)
    return {"label": a.to_json(), "dual": cat.dual_object(a).to_json(), "dualizing_object": cat.dualizing_object().to_json()}, True


def cmd_characters(args):
    data = load_data(args.input)
    labels = [parse_label(data, args.label)] if args.label else _labels(data, args)
    rows = []
    for a in labels:
        row = {"label": a.to_json()}
        try:
            row["character"] = modular.character_qseries(data, a, args.order)
        except NonDiscreteCharacter as exc:
            row["character"] = None
            row["reason"] = exc.name
        row["factorization"] = modular.character_factorize(data, a, args.order).to_json()
        rows.append(row)
    if args.output == "text":
        for row in rows:
            if row["character"] is not None:
                row["character"] = row["character"].to_text()
    else:
        for row in rows:
            if row["character"] is not None:
                row["character"] = row["character"].to_json()
    out = {"order": fmt_fraction(args.order), "characters": rows}
    if not data.is_finite and not args.label:
        out["seed"] = args.seed
    return out, True


def cmd_tmatrix(args):
    data = load_data(args.input)
    labels = discriminant_enumerate(data)
    rows = []
    ok = True
    for a in labels:
        row = {"label": a.to_json()}
        wanted = modular._T_ALIASES.get(args.convention, args.convention)
        for conv in modular.T_CONVENTIONS:
            if wanted in (conv, "both"):
                row[conv] = modular.t_phase(data, a, conv).to_json()
        if args.check:
            rep = modular.check_t_termwise(data, a, args.order)
            row["termwise"] = rep["conventions"]
            ok = ok and rep["pass"]
        rows.append(row)
    return {"convention": args.convention, "rows": rows, "note": "derived = bare phase times exp(-i pi dim/12)"}, ok


def cmd_smatrix(args):
    data = load_data(args.input)
    S = modular.s_matrix(data)
    defect = S.unitarity_defect()
    out = S.to_json()
    out["symmetric"] = S.is_symmetric()
    out["unitarity_defect"] = defect
    out["square"] = modular.charge_conjugation_report(data, S)
    return out, defect < 1e-9 and out["symmetric"]


def cmd_verify_s(args):
    data = load_data(args.input)
    reports = [modular.verify_s_numeric(data, t, args.radius, args.tol) for t in args.t]
    return {"reports": reports}, all(r["pass"] for r in reports)


def cmd_verlinde(args):
    data = load_data(args.input)
    if args.labels:
        if len(args.labels) != 3:
            raise UsageError("verlinde takes either no labels or exactly three")
        lam, mu, rho = (parse_label(data, t) for t in args.labels)
        n = modular.verlinde(data, lam, mu, rho)
        want = 1.0 if lam + mu == rho else 0.0
        return {"N": [n.real, n.imag], "expected": want, "deviation": abs(n - want)}, abs(n - want) < 1e-9
    rep = modular.verlinde_table(data)
    return rep, rep["pass"]


def cmd_fock_check(args):
    data = load_data(args.input)
    cat = GVCategory(data)
    rng = random.Random(args.seed)
    labels = _labels(data, args, rng)
    weights = [a.representative for a in labels[:3]]
    out = {
        "virasoro": fock.check_virasoro(data, args.level, 3, weights),
        "virasoro_heisenberg": fock.check_virasoro_heisenberg(data, min(args.level, 4), 3, weights),
        "central_charge": str(fock.fock_space(data).central_charge),
    }
    contra = []
    for a in labels:
        got = fock.contragredient_weight(data, a)
        contra.append({"label": a.to_json(), "contragredient": got.to_json(), "pass": got == cat.dual_object(a)})
    out["contragredient"] = {"pass": all(r["pass"] for r in contra), "rows": contra}
    if data.is_finite:
        skew = [fock.check_skew_symmetry(cat, a, b, min(args.level, 3)) for a, b in itertools.product(labels, repeat=2)]
        out["skew_symmetry"] = {"pass": all(r["pass"] for r in skew), "rows": skew}
        assoc = [
            fock.check_associativity_numeric(cat, a, b, c, tol=args.tol)
            for a, b, c in itertools.product(labels, repeat=3)
        ]
        out["associativity"] = {"pass": all(r["pass"] for r in assoc), "rows": assoc}
    else:
        out["seed"] = args.seed
    ok = all(v["pass"] for v in out.values() if isinstance(v, dict))
    return out, ok


def cmd_extend(args):
    base = load_data(args.base)
    target = load_data(args.target)
    method = "brute" if args.brute_force else "linear"
    rep = extension.extend(base, target, method, seed=args.seed)
    rep["seed"] = args.seed
    return rep, rep["pass"]


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=200)

    p = _Parser(prog="gvlat", description="Ribbon GV categories and modular data from bosonic lattice data.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text, needs_input=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if needs_input:
            sp.add_argument("input", help="lattice data JSON file")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "validate lattice data")
    add("decompose", cmd_decompose, "dual-lattice decomposition and Smith data")
    for name, fn, text in (
        ("structure", cmd_structure, "braiding, associator, q and twist tables"),
        ("axioms", cmd_axioms, "pentagon, hexagon, balancing and ribbon checks"),
    ):
        sp = add(name, fn, text)
        sp.add_argument(
            "--exhaustive",
            action="store_true",
            help=f"enumerate every label even when the group has more than {EXHAUSTIVE_LIMIT} elements",
        )
    sp = add("fuse", cmd_fuse, "fuse two labels")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("dual", cmd_dual, "GV dual of a label")
    sp.add_argument("a")
    sp = add("characters", cmd_characters, "character q-series and factorisation")
    sp.add_argument("--order", type=Fraction, default=Fraction(DEFAULT_ORDER))
    sp.add_argument("--label")
    sp = add("tmatrix", cmd_tmatrix, "T phases in both conventions")
    sp.add_argument("--convention", choices=("bare", "derived", "both", "paper"), default="both")
    sp.add_argument("--order", type=Fraction, default=Fraction(DEFAULT_ORDER))
    sp.add_argument("--no-check", dest="check", action="store_false", help="skip the term-by-term q-series check")
    add("smatrix", cmd_smatrix, "S matrix, unitarity and S^2 permutation")
    sp = add("verify-s", cmd_verify_s, "numeric S-transformation check at tau = it")
    sp.add_argument("--t", type=float, action="append", help="may be repeated; default 0.8, 1.0, 1.3")
    sp.add_argument("--radius", type=float, default=None, help="default: derived from t")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp = add("verlinde", cmd_verlinde, "Verlinde multiplicities")
    sp.add_argument("labels", nargs="*")
    sp = add("fock-check", cmd_fock_check, "Virasoro, skew-symmetry, associativity and contragredient checks")
    sp.add_argument("--level", type=int, default=DEFAULT_LEVEL)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp = add("extend", cmd_extend, "simple-current extension report", needs_input=False)
    sp.add_argument("--base", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--brute-force", action="store_true")
    return p


# -- output --------------------------------------------------------------------------------

def _text(obj, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj) or all(
            isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x) for x in obj
        ):
            lines.append(f"{pad}{json.dumps(obj)}")
        else:
            for x in obj:
                lines.append(f"{pad}-")
                lines.extend(_text(x, indent + 1))
    else:
        lines.append(f"{pad}{json.dumps(obj)}")
    return lines


def emit(obj, fmt: str, stream) -> None:
    if fmt == "text":
        stream.write("\n".join(_text(obj)) + "\n")
    else:
        stream.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    fmt = "json"
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        fmt = args.output
        if getattr(args, "samples", 1) < 1:
            raise UsageError("--samples must be positive")
        if getattr(args, "t", None) is None and args.command == "verify-s":
            args.t = [0.8, 1.0, 1.3]
        threads = _threads()
        report, ok = args.func(args)
        report = {"command": args.command, "pass": bool(ok), "threads": threads, "result": report}
        emit(report, fmt, sys.stdout)
        return 0 if ok else 1
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except CHECK_ERRORS as exc:
        emit({"pass": False, "error": exc.name, "message": str(exc), "report": _report_of(exc)}, fmt, sys.stdout)
        return 1
    except GVLatError as exc:
        emit({"pass": False, "error": exc.name, "message": str(exc)}, fmt, sys.stdout)
        sys.stderr.write(f"{exc.name}: {exc}\n")
        return 3
    except RecursionError:
        emit({"pass": False, "error": "MalformedInput", "message": "input too deeply nested"}, fmt, sys.stdout)
        return 3


def _report_of(exc):
    for attr in ("report", "witness"):
        val = getattr(exc, attr, None)
        if val is not None:
            try:
                json.dumps(val)
                return val
            except TypeError:
                return repr(val)
    return None


if __name__ == "__main__":
    sys.exit(main())
