"""Command-line front end.

Thirteen subcommands expose the toolkit: h2, h1, extend, classify, twist,
fibers, crossed, imprimitivity, stabilize, hirsch, bound, verdict, witness.
Each prints one canonical JSON document to stdout (sorted keys, compact
separators, trailing newline) and human-readable derivation notes to
stderr.  Exit codes: 0 success, 1 domain error, 2 usage error.

Groups are addressed as builtin names with optional parameters (klein,
cyclic:12, dihedral:4) or as @path to a JSON document; cocycles as trivial,
paper-klein, or @path; subgroups as 'center', a comma list of element
indices, or gen:i,j.  Descriptors take shorthand (Z, Z^2, finite:5,
trivial, Zinv:2), inline JSON, or @path.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds as bnd
from . import descriptors as dsc
from .cocycles import Cocycle2, builtin_cocycle, cocycle_from_json, trivial_cocycle
from .errors import TwistkitError
from .extensions import classify_extension, extension_report, sample_extension
from .groups import (
    FiniteGroup,
    Subgroup,
    center,
    generated_subgroup,
    group_from_json,
    resolve_group_string,
    subgroup_as_group,
)
from .homology import h1, h2
from .staralg import (
    block_profile,
    crossed_product,
    scalar_system,
    system_from_normal,
    twisted_group_algebra,
    verify_imprimitivity,
    verify_stabilization,
)
from .witness import ORACLES, finite_subset_witness, verify_witness


def _pyify(x):
    if isinstance(x, dict):
        return {k: _pyify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_pyify(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _emit(doc, out):
    out.write(json.dumps(_pyify(doc), sort_keys=True, separators=(",", ":")) + "\n")


def _read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_group(spec: str) -> FiniteGroup:
    if spec.startswith("@"):
        return group_from_json(_read_json(spec[1:]))
    return resolve_group_string(spec)


def load_cocycle(spec: str, G: FiniteGroup) -> Cocycle2:
    if spec.startswith("@"):
        return cocycle_from_json(_read_json(spec[1:]), group=G)
    return builtin_cocycle(spec, G)


def load_subgroup(spec: str, G: FiniteGroup) -> Subgroup:
    if spec == "center":
        return center(G)
    if spec.startswith("gen:"):
        gens = [int(x) for x in spec[4:].split(",") if x]
        if not gens:
            raise ValueError("gen: needs at least one element index")
        return generated_subgroup(G, gens)
    members = {int(x) for x in spec.split(",") if x}
    return Subgroup(G, tuple(sorted(members | {0})))


def load_descriptor(spec: str) -> dsc.GroupDescriptor:
    if spec.startswith("@"):
        return dsc.descriptor_from_json(_read_json(spec[1:]))
    if spec.startswith("{"):
        return dsc.descriptor_from_json(json.loads(spec))
    if spec == "Z":
        return dsc.FreeAbelian(1)
    if spec.startswith("Z^"):
        return dsc.FreeAbelian(int(spec[2:]))
    if spec == "trivial":
        return dsc.Finite(1)
    if spec.startswith("finite:"):
        return dsc.Finite(int(spec.split(":", 1)[1]))
    if spec.startswith("Zinv:"):
        return dsc.Zinv(int(spec.split(":", 1)[1]))
    raise ValueError(f"unknown descriptor shorthand {spec!r}")


# ---------------------------------------------------------------------------
# handlers: each returns (json document, stderr note lines)


def _cmd_h2(args):
    G = load_group(args.group)
    inv = h2(G)
    return {"h2": inv.to_json()}, [f"group {G.name} of order {G.order}: H2 = {inv}"]


def _cmd_h1(args):
    G = load_group(args.group)
    inv = h1(G)
    return {"h1": inv.to_json()}, [f"group {G.name} of order {G.order}: H1 = {inv}"]


def _cmd_extend(args):
    G = load_group(args.group)
    ext = sample_extension(G, seed=args.seed)
    doc = {
        "base": G.name,
        "h2": ext.h2.to_json(),
        "order": ext.total.order,
        "abelian": ext.total.is_abelian(),
        "offset": list(ext.offset),
    }
    notes = [
        f"extension of {G.name} (order {G.order}) by H2 of order {ext.h2.order()}",
        f"identity offset {ext.offset}, splitting seed {args.seed}",
    ]
    return doc, notes


def _cmd_classify(args):
    G = load_group(args.group)
    ext = sample_extension(G, seed=args.seed)
    cls = classify_extension(ext)
    doc = {"class": cls.label, "order4_lifts": list(cls.order4_lifts)}
    return doc, [f"total group of order {ext.total.order} -> {cls.label}"]


def _cmd_twist(args):
    G = load_group(args.group)
    omega = load_cocycle(args.cocycle, G)
    A = twisted_group_algebra(G, omega)
    notes = [f"twisted group algebra over {G.name}, cocycle {args.cocycle}"]
    if args.blocks:
        prof = block_profile(A, seed=args.seed)
        return {"blocks": list(prof.blocks)}, notes
    return {"dim": int(A.basis.shape[0])}, notes


def _cmd_fibers(args):
    G = load_group(args.group)
    ext = sample_extension(G, seed=args.seed)
    rep = extension_report(ext, seed=args.seed)
    return rep, [f"{len(rep['fibers'])} character fibers over H2 of {G.name}"]


def _cmd_crossed(args):
    G = load_group(args.group)
    N = load_subgroup(args.normal, G)
    sigma = load_cocycle(args.cocycle, G) if args.cocycle else None
    sys_ = system_from_normal(G, N, sigma)
    big = crossed_product(sys_)
    prof = block_profile(big, seed=args.seed)
    doc = {"blocks": list(prof.blocks), "dim": int(big.basis.shape[0])}
    notes = [
        f"crossed product: fiber over subgroup of order {N.order}, "
        f"quotient of order {G.order // N.order}"
    ]
    return doc, notes


def _cmd_imprimitivity(args):
    G = load_group(args.group)
    S = load_subgroup(args.subgroup, G)
    Hgrp, _ = subgroup_as_group(S)
    omega = load_cocycle(args.cocycle, Hgrp) if args.cocycle else trivial_cocycle(Hgrp)
    sys_ = scalar_system(Hgrp, omega)
    rep = verify_imprimitivity(sys_.algebra, S, sys_, seed=args.seed)
    return rep, [f"induced from a subgroup of index {rep['index']}"]


def _cmd_stabilize(args):
    G = load_group(args.group)
    omega = load_cocycle(args.cocycle, G) if args.cocycle else trivial_cocycle(G)
    sys_ = scalar_system(G, omega)
    rep = verify_stabilization(sys_, seed=args.seed)
    return rep, [f"stabilized over {G.name}; deviation {rep['sigma_deviation']:.2e}"]


def _cmd_hirsch(args):
    d = load_descriptor(args.descriptor)
    h = dsc.hirsch_length(d)
    card = dsc.cardinality(d)
    doc = {
        "hirsch": "infinite" if h == dsc.INF else int(h),
        "cardinality": None if card is None else ("infinite" if card == dsc.INF else int(card)),
        "flags": dsc.flags(d).to_json(),
    }
    return doc, dsc.derivation_lines(d)


def _cmd_bound(args):
    chosen = [
        args.f is not None,
        args.twisted is not None,
        args.hw is not None,
        args.nilpotent is not None,
        args.wreath_finite_k is not None,
    ]
    if sum(chosen) != 1:
        raise ValueError("pick exactly one of --f, --twisted, --hw, --nilpotent, --wreath-finite-k")
    if args.f is not None:
        n = args.f
        val = bnd.f_bound(n)
        return val, [f"f({n}) by recursion; closed form agrees: {bnd.f_closed_form(n) == val}"]
    if args.twisted is not None:
        hg, hh2 = args.twisted
        return bnd.twisted_bound(hg, hh2), [f"f({hg} + {hh2})"]
    if args.hw is not None:
        a, l, d = args.hw
        return bnd.hw_product_bound(a, l, d), [f"{a} * {l} * ({d}+1) - 1"]
    if args.nilpotent is not None:
        k, dimx = args.nilpotent
        pair = bnd.nilpotent_input_bounds(k, dimx)
        return list(pair), [f"(3^{k}, 3^{k} * ({dimx}+1))"]
    k = args.wreath_finite_k
    return bnd.wreath_bound_finite_K(k), [f"2 * 9^{k}"]


def _cmd_verdict(args):
    K = load_descriptor(args.base)
    H = load_descriptor(args.top)
    if args.which == "dimnuc":
        v = dsc.wreath_dimnuc_verdict(K, H)
    else:
        v = dsc.wreath_dr_verdict(K, H)
    notes = [
        f"base flags: {dsc.flags(K).to_json()}",
        f"top flags: {dsc.flags(H).to_json()}",
    ]
    return {"verdict": v}, notes


def _cmd_witness(args):
    oracle = ORACLES[args.group]
    w = finite_subset_witness(oracle, args.n)
    rep = verify_witness(oracle, w, args.radius)
    notes = [f"{w.case} construction, {rep['checked']} translates checked"]
    return rep, notes


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, handler, helptext):
        sp = sub.add_parser(name, help=helptext)
        sp.set_defaults(handler=handler)
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
        return sp

    sp = add("h2", _cmd_h2, "second homology of a finite group")
    sp.add_argument("--group", required=True)

    sp = add("h1", _cmd_h1, "first homology (abelianization invariants)")
    sp.add_argument("--group", required=True)

    sp = add("extend", _cmd_extend, "build the central extension for a splitting")
    sp.add_argument("--group", required=True)

    sp = add("classify", _cmd_classify, "isomorphism label of the extension group")
    sp.add_argument("--group", required=True)

    sp = add("twist", _cmd_twist, "twisted group algebra for a cocycle")
    sp.add_argument("--group", required=True)
    sp.add_argument("--cocycle", required=True)
    sp.add_argument("--blocks", action="store_true", help="print the block profile")

    sp = add("fibers", _cmd_fibers, "character fibers of the extension group algebra")
    sp.add_argument("--group", required=True)

    sp = add("crossed", _cmd_crossed, "crossed product over a normal subgroup")
    sp.add_argument("--group", required=True)
    sp.add_argument("--normal", required=True, help="center | i,j,... | gen:i,j")
    sp.add_argument("--cocycle")

    sp = add("imprimitivity", _cmd_imprimitivity, "induce from a subgroup and compare profiles")
    sp.add_argument("--group", required=True)
    sp.add_argument("--subgroup", required=True, help="center | i,j,... | gen:i,j")
    sp.add_argument("--cocycle", help="cocycle on the subgroup")

    sp = add("stabilize", _cmd_stabilize, "tensor against a matrix block to kill the twist")
    sp.add_argument("--group", required=True)
    sp.add_argument("--cocycle")

    sp = add("hirsch", _cmd_hirsch, "Hirsch length of a group descriptor")
    sp.add_argument("--descriptor", required=True)

    sp = add("bound", _cmd_bound, "numeric bound formulas")
    sp.add_argument("--f", type=int)
    sp.add_argument("--twisted", type=int, nargs=2, metavar=("HG", "HH2"))
    sp.add_argument("--hw", type=int, nargs=3, metavar=("ASDIM1", "LTC1", "DSTAB"))
    sp.add_argument("--nilpotent", type=int, nargs=2, metavar=("K", "DIMX"))
    sp.add_argument("--wreath-finite-k", type=int)

    sp = add("verdict", _cmd_verdict, "wreath-product finiteness verdicts")
    sp.add_argument("--base", required=True, help="descriptor for the fiber group")
    sp.add_argument("--top", required=True, help="descriptor for the acting group")
    sp.add_argument("--which", choices=("dimnuc", "dr"), default="dimnuc")

    sp = add("witness", _cmd_witness, "finite subset no nontrivial translation fixes")
    sp.add_argument("--group", required=True, choices=sorted(ORACLES))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--radius", type=int, default=20)

    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return 2 if code is None else int(code)
    try:
        doc, notes = args.handler(args)
    except (TwistkitError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    for line in notes:
        err.write(line + "\n")
    _emit(doc, out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
