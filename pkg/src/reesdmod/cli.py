"""Command line: ``reesdmod [command] input.txt [options]``.

Input file::

    vars: x y z
    tvars: a b c d        # optional
    matrix:
      x, 0, 0
      y, x, 0
      z, y, x^2
      0, z, z^2

Rows may be separated by commas or, if no comma is present, by whitespace.
Instead of ``matrix:`` a ``gens:`` block lists one generator per line.
"""
from __future__ import annotations

import argparse
import json
import multiprocessing as mp
import sys
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .bfun import BFunction, RangeExhausted
from .corepoly import ParseError, Ring, parse_poly
from .gbcomm import NonMinimalShape, PresMatrix
from .rees import (NotPrincipal, ReesInput, b_p, fiber_invariants, infer_generator_degrees,
                   k_support_from_b, validate_input)

COMMANDS = ("validate", "bfunction", "ksupport", "fiber", "oracle", "report")

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_TIMEOUT = 0, 2, 3, 4


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input files


def parse_input(text: str) -> ReesInput:
    xnames: List[str] = []
    tnames: List[str] = []
    block = None
    rows: List[Tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        key = head.strip().lower()
        if sep and key in ("vars", "tvars", "matrix", "gens"):
            if key == "vars":
                xnames = rest.replace(",", " ").split()
            elif key == "tvars":
                tnames = rest.replace(",", " ").split()
            else:
                if block is not None:
                    raise InputError(f"line {lineno}: only one of matrix/gens may be given")
                block = key
                if rest.strip():
                    rows.append((lineno, rest.strip()))
            continue
        if block is None:
            raise InputError(f"line {lineno}: expected 'vars:', 'tvars:', 'matrix:' or 'gens:'")
        rows.append((lineno, line))
    if not xnames:
        raise InputError("missing 'vars:' line")
    if block is None or not rows:
        raise InputError("missing 'matrix:' or 'gens:' block")
    ring = Ring.polynomial(xnames)

    def poly(lineno, s):
        try:
            return parse_poly(s, ring)
        except ParseError as exc:
            raise InputError(f"line {lineno}: {exc}") from None

    if tnames and len(tnames) != ring.nvars + 1:
        raise InputError(f"'tvars:' needs {ring.nvars + 1} names, got {len(tnames)}")
    clash = set(tnames) & set(xnames)
    if clash:
        raise InputError(f"names used for both vars and tvars: {sorted(clash)}")
    if block == "matrix":
        entries = []
        for lineno, line in rows:
            cells = [c.strip() for c in line.split(",")] if "," in line else line.split()
            entries.append([poly(lineno, c) for c in cells])
        if len({len(r) for r in entries}) != 1:
            raise InputError("matrix rows have different lengths")
        return ReesInput(ring, PresMatrix(ring, entries), tnames=tuple(tnames))
    gens = []
    for lineno, line in rows:
        for piece in line.split(","):
            if piece.strip():
                gens.append(poly(lineno, piece.strip()))
    return ReesInput(ring, gens=gens, tnames=tuple(tnames))


def parse_range(text: str) -> List[int]:
    """``3..7``, ``3,5,9`` or ``4``."""
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError("empty range")
    return sorted(set(out))


# ---------------------------------------------------------------------------
# b-functions with per-p timeouts


def _child(inp, p, roots, method, conn):
    try:
        b = b_p(inp, p, roots, method)
        conn.send(("ok", [str(r) for r in b.roots]))
    except RangeExhausted as exc:
        conn.send(("range", str(exc)))
    except Exception as exc:  # reported by the parent
        conn.send(("error", f"{type(exc).__name__}: {exc}"))
    finally:
        conn.close()


@dataclass
class POutcome:
    p: int
    status: str                       # ok | timeout | range | error
    b: Optional[BFunction] = None
    message: str = ""
    seconds: float = 0.0


def compute_bfunctions(inp: ReesInput, ps: Sequence[int], roots=None, jobs: int = 1,
                       timeout: float = 300.0, method: str = "auto") -> List[POutcome]:
    """b_p for every p, each in a worker process killed after ``timeout`` seconds."""
    from fractions import Fraction

    ctx = mp.get_context("fork")
    pending = list(ps)
    running: Dict[int, tuple] = {}
    done: Dict[int, POutcome] = {}
    while pending or running:
        while pending and len(running) < max(1, jobs):
            p = pending.pop(0)
            recv, send = ctx.Pipe(duplex=False)
            proc = ctx.Process(target=_child, args=(inp, p, roots, method, send), daemon=True)
            proc.start()
            send.close()
            running[p] = (proc, recv, time.monotonic())
        for p in list(running):
            proc, recv, start = running[p]
            elapsed = time.monotonic() - start
            if recv.poll():
                try:
                    kind, payload = recv.recv()
                except EOFError:
                    kind, payload = "error", "worker exited without a result"
                proc.join()
                if kind == "ok":
                    done[p] = POutcome(p, "ok", BFunction(tuple(Fraction(r) for r in payload)),
                                       seconds=elapsed)
                else:
                    done[p] = POutcome(p, kind, message=payload, seconds=elapsed)
                del running[p]
            elif not proc.is_alive():
                proc.join()
                done[p] = POutcome(p, "error", message=f"worker died (exit code {proc.exitcode})",
                                   seconds=elapsed)
                del running[p]
            elif elapsed > timeout:
                proc.terminate()
                proc.join()
                done[p] = POutcome(p, "timeout", message=f"exceeded {timeout:g} s", seconds=elapsed)
                del running[p]
        if running:
            time.sleep(0.005)
    return [done[p] for p in sorted(done)]


# ---------------------------------------------------------------------------
# report assembly


def _root_json(r) -> object:
    return int(r) if r.denominator == 1 else str(r)


def build_report(inp: ReesInput, command: str, args) -> Tuple[dict, int]:
    rep: dict = {"command": command, "timings": {}}
    code = EXIT_OK
    t0 = time.monotonic()
    val = validate_input(inp)
    rep["validation"] = {"ok": val.ok, "checks": val.as_dict()}
    rep["timings"]["validation"] = round(time.monotonic() - t0, 3)
    if not val.ok and not args.force:
        return rep, EXIT_INPUT
    if command == "validate":
        return rep, EXIT_OK if val.ok else EXIT_INPUT
    d = inp.d
    nu = inp.nu
    rep["d"], rep["nu"], rep["column_degrees"] = d, nu, inp.nus
    roots = parse_range(args.root_range) if args.root_range else None

    if command in ("bfunction", "ksupport", "report"):
        ps = parse_range(args.p) if args.p else list(range(d, d + 2 * (nu - d) + 3))
        ps = [p for p in ps if p >= d]
        outs = compute_bfunctions(inp, ps, roots, args.jobs, args.timeout, args.method)
        rep["bfunctions"] = []
        rep["errors"] = []
        for o in outs:
            rep["timings"][f"b_{o.p}"] = round(o.seconds, 3)
            if o.status == "ok":
                rep["bfunctions"].append({"p": o.p, "roots": [_root_json(r) for r in o.b.roots],
                                          "factored": str(o.b)})
            else:
                rep["errors"].append({"p": o.p, "stage": "bfunction", "kind": o.status,
                                      "message": o.message})
                if o.status == "timeout":
                    code = max(code, EXIT_TIMEOUT) if code != EXIT_MATH else code
                elif o.status == "range":
                    code = EXIT_MATH
                else:
                    code = EXIT_MATH if code == EXIT_OK else code
        good = [(o.p, o.b) for o in outs if o.status == "ok"]
        support = sorted(set().union(*[k_support_from_b(b, p, nu, d) for p, b in good])) if good else []
        rep["ksupport"] = [{"p": p, "u": u} for p, u in support]
        if command == "report":
            guess = infer_generator_degrees(good, nu, d)
            rep["heuristic_generators"] = {"label": guess.label, "degrees": guess.pairs(),
                                           "reltype_lower_bound": guess.reltype_lower_bound}
    oracle_mode = args.oracle or ("both" if command in ("oracle", "report") else "none")
    if command in ("oracle", "report") or (command == "ksupport" and oracle_mode != "none"):
        from .oracle import k_bigraded_dim, solution_kernel_dim

        if command == "ksupport":
            grid = [(e["p"], u) for e in rep["bfunctions"] for u in range(0, nu - d + 1)]
        else:
            ps = parse_range(args.p) if (args.p and command == "oracle") else list(range(d, d + 4))
            us = parse_range(args.u) if args.u else list(range(0, nu - d + 1))
            grid = [(p, u) for p in ps for u in us]
        t1 = time.monotonic()
        rows = []
        supp = {(e["p"], e["u"]) for e in rep.get("ksupport", [])}
        known_p = {e["p"] for e in rep.get("bfunctions", [])}
        for p, u in grid:
            row = {"p": p, "u": u}
            if oracle_mode in ("hilbert", "both"):
                row["hilbert"] = k_bigraded_dim(inp, p, u)
            if oracle_mode in ("kernel", "both"):
                row["kernel"] = solution_kernel_dim(inp, p, u) if u >= 0 else 0
            if p in known_p:
                row["from_b"] = (p, u) in supp
            dims = [row[k] for k in ("hilbert", "kernel") if k in row]
            nonzero = {x > 0 for x in dims} | ({row["from_b"]} if "from_b" in row else set())
            row["consistent"] = len(set(dims)) <= 1 and len(nonzero) <= 1
            rows.append(row)
        rep["oracle"] = rows
        rep["timings"]["oracle"] = round(time.monotonic() - t1, 3)
        dims = {(r["p"], r["u"]): r.get("hilbert", r.get("kernel")) for r in rows}
        for e in rep.get("ksupport", []):
            if (e["p"], e["u"]) in dims:
                e["dim"] = dims[(e["p"], e["u"])]
    if command in ("fiber", "report"):
        t1 = time.monotonic()
        try:
            fi = fiber_invariants(inp)
            rep["fiber"] = {"p0": fi.p0, "reltype": fi.reltype, "reg": fi.reg,
                            "e": fi.multiplicity, "r": fi.reduction_number,
                            "equation": str(fi.fiber_equation)}
        except NotPrincipal as exc:
            rep.setdefault("errors", []).append({"stage": "fiber", "kind": "not_principal",
                                                 "message": str(exc)})
            code = EXIT_MATH
        rep["timings"]["fiber"] = round(time.monotonic() - t1, 3)
    return rep, code


def render_text(rep: dict) -> str:
    out: List[str] = []
    cmd = rep.get("command")
    val = rep.get("validation", {})
    if cmd == "validate" or not val.get("ok", True):
        for name, c in val.get("checks", {}).items():
            out.append(f"{'ok  ' if c['ok'] else 'FAIL'} {name}: {c['detail']}")
        if cmd == "validate" or "d" not in rep:
            return "\n".join(out)
    if cmd in ("bfunction",):
        out.extend(e["factored"] for e in rep.get("bfunctions", []))
    if cmd in ("ksupport", "report"):
        if cmd == "report":
            out.append(f"d = {rep['d']}, nu = {rep['nu']}, column degrees {rep['column_degrees']}")
            out.append("b-functions:")
            out.extend(f"  p = {e['p']}: {e['factored']}" for e in rep.get("bfunctions", []))
        out.append("support of K (p, u):")
        for e in rep.get("ksupport", []):
            extra = f"  dim {e['dim']}" if "dim" in e else ""
            out.append(f"  ({e['p']}, {e['u']}){extra}")
    if "oracle" in rep and cmd in ("oracle", "report"):
        out.append("oracle grid (p, u): " + "  ".join(
            k for k in ("hilbert", "kernel", "from_b") if any(k in r for r in rep["oracle"])))
        for r in rep["oracle"]:
            vals = [str(r[k]) for k in ("hilbert", "kernel", "from_b") if k in r]
            flag = "" if r["consistent"] else "  INCONSISTENT"
            out.append(f"  ({r['p']}, {r['u']}): " + " ".join(vals) + flag)
    if "fiber" in rep:
        f = rep["fiber"]
        out.append(f"fiber: p0 = {f['p0']}, reltype = {f['reltype']}, reg = {f['reg']}, "
                   f"e = {f['e']}, r = {f['r']}")
        out.append(f"  equation: {f['equation']}")
    if "heuristic_generators" in rep:
        h = rep["heuristic_generators"]
        degs = ", ".join(f"({p},{u})" for p, u in h["degrees"])
        out.append(f"generator degrees of K [{h['label']}]: {degs}; "
                   f"reltype >= {h['reltype_lower_bound']}")
    for e in rep.get("errors", []):
        where = f"p = {e['p']}" if "p" in e else e["stage"]
        out.append(f"error ({where}, {e['kind']}): {e['message']}")
    return "\n".join(out)


def render_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# entry point


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="reesdmod", description=(
        "b-functions and bigraded support of the kernel Sym(I) -> R(I) "
        "for height-two perfect ideals given by a presentation matrix."))
    ap.add_argument("words", nargs="+", metavar="[command] input",
                    help=f"command ({', '.join(COMMANDS)}; default report) and input file")
    ap.add_argument("--p", help="T-degrees, e.g. 3..7 or 3,5")
    ap.add_argument("--u", help="x-degrees for the oracle grid")
    ap.add_argument("--root-range", help="candidate roots, e.g. --root-range=-4..0")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for b-functions")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--timeout", type=float, default=300.0, help="seconds per p (default 300)")
    ap.add_argument("--force", action="store_true", help="continue past failed validation")
    ap.add_argument("--oracle", choices=("hilbert", "kernel", "both", "none"))
    ap.add_argument("--method", choices=("auto", "graded", "gb"), default="auto",
                    help="how the ideals J_i are computed")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    words = args.words
    if len(words) == 1:
        command, path = "report", words[0]
    elif len(words) == 2 and words[0] in COMMANDS:
        command, path = words
    else:
        ap.error(f"expected [command] input, command one of {', '.join(COMMANDS)}")
    if args.timeout <= 0:
        ap.error("--timeout must be positive")
    try:
        for r in (args.p, args.u, args.root_range):
            if r:
                parse_range(r)
    except ValueError as exc:
        print(f"error: bad range: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        with open(path) as fh:
            inp = parse_input(fh.read())
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        rep, code = build_report(inp, command, args)
    except (NonMinimalShape, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render_json(rep) if args.format == "json" else render_text(rep)
    if text:
        print(text)
    if code == EXIT_INPUT and command != "validate":
        print("error: validation failed (use --force to continue)", file=sys.stderr)
    if args.format == "json":
        for e in rep.get("errors", []):
            print(f"error: {e.get('stage')} p={e.get('p', '-')}: {e['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
