"""Command-line front end.

Exit status: 0 success, 1 property failure or invalid lattice, 2 resource
cap hit, 3 usage error.

Resource caps can be overridden with the environment variables
LATCON_MAX_ELEMENTS, LATCON_MAX_COORDINATES, LATCON_NODE_BUDGET and
LATCON_STATE_BUDGET.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import congruence as cg
from . import free, kuratowski, lattice, replication, semilattice
from .errors import (LatticeError, NotAHom, NotALattice, NotAPartialOrder, ParseError,
                     ResourceCap, UnknownCheck)

ENV_CAPS = {
    "max_elements": "LATCON_MAX_ELEMENTS",
    "max_coordinates": "LATCON_MAX_COORDINATES",
    "node_budget": "LATCON_NODE_BUDGET",
    "state_budget": "LATCON_STATE_BUDGET",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def config_from_env(env=None):
    env = os.environ if env is None else env
    kw = {}
    for field, var in ENV_CAPS.items():
        if var in env:
            try:
                kw[field] = int(env[var])
            except ValueError:
                raise UsageError(f"{var} must be an integer") from None
    try:
        return replication.Config(**kw)
    except ValueError as e:
        raise UsageError(str(e)) from None


def read_any(path):
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such file: {path}")
    text = p.read_text()
    if p.suffix == ".dot" or text.lstrip().startswith("digraph"):
        return lattice.parse_dot(text)
    return lattice.read_lattice(text)


def build_parser():
    env_help = ", ".join(ENV_CAPS.values())
    ap = _Parser(prog="latcon", description="Finite lattices and their congruences.",
                 epilog=f"Resource caps may be overridden through {env_help}.")
    ap.add_argument("--format", choices=["text", "structured", "dot"], default="text")
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=["text", "structured", "dot"], default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    lat = sub.add_parser("lattice").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for a in ("validate", "show", "dot"):
        lat.add_parser(a, parents=[fmt]).add_argument("file")

    con = sub.add_parser("con").add_subparsers(dest="action", required=True, parser_class=_Parser)
    con.add_parser("compute", parents=[fmt]).add_argument("file")

    fr = sub.add_parser("free").add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = fr.add_parser("build", parents=[fmt])
    b.add_argument("--variety", choices=["m3", "n5", "two"], required=True)
    b.add_argument("--chains", type=int, required=True)
    b.add_argument("--bounded", action="store_true")
    b.add_argument("--provenance", help="write the coordinate assignments to this file")

    ck = sub.add_parser("check", parents=[fmt])
    ck.add_argument("prop", choices=["urp", "wurp", "wd", "splitting"])
    ck.add_argument("file")
    ck.add_argument("--at", help="element (default: top); 'all' for every element")
    ck.add_argument("--con", action="store_true",
                    help="check the congruence semilattice of the lattice instead")
    ck.add_argument("--target", help="wd: target lattice file")
    ck.add_argument("--map", help="wd: lattice map as 'x=y,...' (labels or indices)")

    ku = sub.add_parser("kuratowski").add_subparsers(dest="action", required=True, parser_class=_Parser)
    ku.add_parser("search", parents=[fmt]).add_argument("file")

    rp = sub.add_parser("replicate", parents=[fmt])
    rp.add_argument("check")
    rp.add_argument("arg", nargs="?",
                    help="size bound for basicdistr/distr_urp/splitting, or a case (m3, n5)")
    rp.add_argument("--case", type=str.upper, choices=["M3", "N5"])
    rp.add_argument("--timing", action="store_true")
    return ap


# ---------------------------------------------------------------------------


def _lattice_cmd(args, out):
    L = read_any(args.file)
    if args.action == "validate":
        problems = L.check_axioms()
        if problems:
            out(f"axioms fail: {problems}")
            return 1
        dist, w = lattice.is_distributive(L)
        if args.format == "structured":
            out(f"valid = true\nsize = {L.size}\ndistributive = {str(dist).lower()}")
        else:
            out(f"valid lattice with {L.size} elements; distributive: {dist}"
                + ("" if dist else f" (witness {tuple(L.label(x) for x in w)})"))
        return 0
    if args.action == "dot" or args.format == "dot":
        out(lattice.to_dot(L, Path(args.file).stem), end="")
        return 0
    out(lattice.format_lattice(L), end="")
    return 0


def _con_cmd(args, out):
    L = read_any(args.file)
    con = cg.enumerate_con(L)
    if args.format == "dot":
        CL = con.lattice
        CL.names = {str(c): i for i, c in enumerate(con.elements)}
        out(lattice.to_dot(CL, "Con"), end="")
        return 0
    dist, _ = lattice.is_distributive(con.lattice)
    if args.format == "structured":
        out(f"size = {len(con)}\ndistributive = {str(dist).lower()}")
        for i, c in enumerate(con.elements):
            out(f"congruence.{i} = {c}")
        return 0
    out(f"|Con| = {len(con)}; distributive: {dist}")
    for i, c in enumerate(con.elements):
        out(f"  {i}: {c}")
    return 0


def _free_cmd(args, out, config):
    if args.chains < 0:
        raise UsageError("--chains must be non-negative")
    V = free.VarietySpec.named(args.variety)
    P = free.ChainPresentation.chains(args.chains, args.bounded)
    F = free.free_over_chains(V, P, max_elements=config.max_elements,
                              max_coordinates=config.max_coordinates)
    if args.provenance:
        lines = [f"# {F.raw_coordinates} assignments, {len(F.coordinates)} kept",
                 "# generators: " + " ".join(P.generator_names)]
        lines += ["coordinate " + " ".join(map(str, row)) for row in F.coordinates.tolist()]
        Path(args.provenance).write_text("\n".join(lines) + "\n")
    if args.format == "dot":
        out(lattice.to_dot(F.lattice, f"free_{args.variety}_{args.chains}"), end="")
        return 0
    comment = (f"free product of {args.chains} two-element chains in HSP({args.variety})"
               + (" with bounds adjoined" if args.bounded else ""))
    if args.format == "structured":
        out(f"size = {F.size}\ncoordinates = {len(F.coordinates)}")
    else:
        out(f"{F.size} elements, {len(F.coordinates)} coordinates")
    out(lattice.format_lattice(F.lattice, comment), end="")
    return 0


def _check_cmd(args, out, config):
    L = read_any(args.file)
    if args.prop == "splitting":
        ok, w = cg.is_congruence_splitting(L)
        out(f"congruence splitting: {ok}" + ("" if ok else f" (witness a={L.label(w[0])}, "
                                                          f"b={L.label(w[1])}, pieces {w[2]}, {w[3]})"))
        return 0 if ok else 1
    if args.prop == "wd":
        if not (args.target and args.map):
            raise UsageError("check wd needs --target and --map")
        T = read_any(args.target)
        mapping = {}
        for item in args.map.split(","):
            k, _, v = item.partition("=")
            mapping[L.index(k.strip())] = T.index(v.strip())
        f = lattice.check_hom(mapping, L, T)
        ok, w = cg.is_weak_distributive(cg.con_map(f).table, cg.enumerate_con(L),
                                        cg.enumerate_con(T))
        out(f"Con(f) weak-distributive: {ok}" + ("" if ok else f" (witness {w})"))
        return 0 if ok else 1
    S = semilattice.as_semilattice(cg.enumerate_con(L) if args.con else L)
    if args.at in (None, "top"):
        points = [_top(S)]
    elif args.at == "all":
        points = list(range(S.size))
    else:
        points = [L.index(args.at)] if not args.con else [int(args.at)]
    fn = semilattice.check_URP_at if args.prop == "urp" else semilattice.check_WURP_at
    all_ok = True
    for e in points:
        res = fn(S, e, node_budget=config.node_budget)
        all_ok &= res.holds
        name = S.label(e)
        if res.holds:
            out(f"{args.prop.upper()} holds at {name} ({len(res.pairs)} pairs)")
            if args.format == "text":
                out(res.witness.format(S))
        else:
            cert = []
            for c in res.certificate:
                if c[0] == "pair":
                    i, j = c[1], c[2]
                    pi, pj = res.pairs[i], res.pairs[j]
                    cert.append(f"pair i=({S.label(pi[0])},{S.label(pi[1])}) "
                                f"j=({S.label(pj[0])},{S.label(pj[1])})")
                else:
                    cert.append(str(c))
            out(f"{args.prop.upper()} fails at {name}: " + "; ".join(cert))
    return 0 if all_ok else 1


def _top(S):
    top = 0
    for x in range(S.size):
        top = int(S.join[top, x])
    return top


def _kuratowski_cmd(args, out):
    try:
        m = kuratowski.load_set_mapping(args.file)
    except FileNotFoundError:
        raise UsageError(f"no such file: {args.file}") from None
    t = kuratowski.find_free_triple(m)
    if t is None:
        out("no free triple")
        return 1
    out("free triple: " + " ".join(map(str, t)))
    return 0


def _replicate_cmd(args, out, config):
    case, arg = args.case, None
    if args.arg is not None:
        if args.arg.upper() in replication.CASES:
            if case and case != args.arg.upper():
                raise UsageError(f"conflicting cases {args.arg} and --case {case}")
            case = args.arg.upper()
        elif args.arg.isdigit():
            arg = int(args.arg)
        else:
            raise UsageError(f"expected a size bound or a case, got {args.arg!r}")
    reports = replication.run_check(args.check, config, case=case, arg=arg)
    for r in reports:
        if args.format == "structured":
            out(r.structured(timing=args.timing))
            out("")
        else:
            out(r.text(timing=args.timing))
    return 0 if all(r.verdict for r in reports) else 1


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def out(s="", end="\n"):
        stdout.write(s + end)

    def err(s):
        stderr.write(s + "\n")

    try:
        args = build_parser().parse_args(argv)
        config = config_from_env()
        if args.cmd == "lattice":
            return _lattice_cmd(args, out)
        if args.cmd == "con":
            return _con_cmd(args, out)
        if args.cmd == "free":
            return _free_cmd(args, out, config)
        if args.cmd == "check":
            return _check_cmd(args, out, config)
        if args.cmd == "kuratowski":
            return _kuratowski_cmd(args, out)
        return _replicate_cmd(args, out, config)
    except UsageError as e:
        err(f"usage error: {e}")
        return 3
    except UnknownCheck as e:
        err(f"usage error: {e}")
        return 3
    except KeyError as e:
        err(f"usage error: unknown element or incomplete map: {e}")
        return 3
    except ResourceCap as e:
        if isinstance(e.partial, replication.CheckReport):
            err(e.partial.text())
        else:
            err(f"resource cap: {e} (limit {e.limit}, reached {e.partial})")
        return 2
    except (NotALattice, NotAPartialOrder) as e:
        err(f"{type(e).__name__}: {e}; witness {e.witness}")
        return 1
    except NotAHom as e:
        err(f"NotAHom: {e}; witness {e.witness} ({e.law})")
        return 1
    except (ParseError, LatticeError) as e:
        err(f"{type(e).__name__}: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
