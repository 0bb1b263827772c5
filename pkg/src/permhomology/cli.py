"""Command line driver with reproducible reports.

Every report embeds the tool version, the seed, the method that
produced each value, and the conjugation convention picked by the
startup self-test, so the same invocation yields byte-identical
output.  Caches change runtime, never results.

Exit codes: 0 on success, 2 when a resource cap stops the run, 3 when
an internal invariant fails.  Invariant failures are never downgraded
to warnings.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import random
import sys
from fractions import Fraction

from . import catalog, polytope
from .coxeter import essential_poset, polygon_solid, simplex_face_counts
from .coxeter import vertex_degree as wythoff_vertex_degree
from .equivariant import (
    SimplexFlags,
    expand_chain,
    flag_edge_orbits,
    orbit_decompose,
)
from .errors import CapExceeded, InvariantViolation
from .homology import (
    AbelianInvariants,
    ce_convention,
    ce_ppart_general,
    cyclic_sylow_ppart,
    resolution_homology,
)
from .intlinalg import smith_normal_form
from .permgroup import PermGroup
from .resolution import bar_resolution, resolution_small
from .sylow import p_part, sylow_ascent, weyl_exponent
from .wall import from_cells, splice, wall_assemble
from . import __version__

SMALL_ORDER_CAP = 128

MATHIEU_NAMES = "M11,M12,M21,M22,M23,M24"


def _group(spec: str) -> PermGroup:
    """Catalog name, or inline JSON {"degree": n, "generators": [...]}."""
    if spec.lstrip().startswith("{"):
        return catalog.group_from_json(json.loads(spec))
    return catalog.lookup(spec)


def _fingerprint(G: PermGroup) -> str:
    data = json.dumps(
        [G.degree, G.order(), sorted(G.generators)]
    ).encode()
    return hashlib.sha256(data).hexdigest()[:16]


def _least_prime(q: int) -> int:
    d = 2
    while d * d <= q:
        if q % d == 0:
            return d
        d += 1
    return q


def _prime_list(order: int, p: int | None, p_min: int | None) -> list:
    if p is not None:
        return [p]
    out = []
    rest = order
    d = 2
    while d * d <= rest:
        if rest % d == 0:
            out.append(d)
            while rest % d == 0:
                rest //= d
        d += 1
    if rest > 1:
        out.append(rest)
    return [q for q in out if q >= (p_min or 0)]


def _restrict(inv: AbelianInvariants, primes) -> list:
    """Torsion entries whose prime lies in the restriction, sorted by
    (prime, power).  Free summands belong to no prime and drop out."""
    keep = set(primes)
    items = sorted(
        (p, q) for q in inv.torsion if (p := _least_prime(q)) in keep
    )
    return [q for _, q in items]


# -- homology ------------------------------------------------------------


def _sylow_invariants(G, p, n, seed):
    if G.order() % p:
        return [], "sylow"
    if p_part(G.order(), p) == p:
        return list(cyclic_sylow_ppart(G, p, n).torsion), "sylow"
    P = sylow_ascent(G, p, seed=seed)
    return list(ce_ppart_general(G, P, n).torsion), "sylow-ce"


def _polygon_complex(G: PermGroup):
    m = G.degree
    if m < 3:
        raise ValueError("polygon complex needs degree >= 3")
    edges = {frozenset((i, (i + 1) % m)) for i in range(m)}
    for g in G.generators:
        for e in edges:
            if frozenset(g[i] for i in e) not in edges:
                raise ValueError(
                    "generators are not symmetries of the polygon; "
                    "pass a complex the group actually acts on"
                )
    return polygon_solid(m)


def _wall_resolution(G, base_kind, dims, n, max_dim, flag_cap, rank_cap):
    if base_kind == "polygon":
        ecc = orbit_decompose(_polygon_complex(G), G, 2)
        try:
            return wall_assemble(splice(ecc), n, rank_cap=rank_cap)
        except InvariantViolation:
            pass  # not a one-orbit top; fall through to the finite form
        return wall_assemble(from_cells(ecc), n, rank_cap=rank_cap)
    ecc = orbit_decompose(
        SimplexFlags(G.degree, dims), G, max_dim, flag_cap=flag_cap
    )
    return wall_assemble(from_cells(ecc), n, rank_cap=rank_cap)


def _cmd_homology(args):
    G = _group(args.group)
    top = args.to if args.to is not None else args.degree
    if top < args.degree:
        raise ValueError("--to must not be below --degree")
    degrees = list(range(args.degree, top + 1))
    restriction = None
    if args.prime is not None:
        restriction = args.prime
    elif args.p_min is not None:
        restriction = f">={args.p_min}"

    method = args.method
    if method == "auto":
        if restriction is not None:
            method = "sylow"
        elif G.order() <= SMALL_ORDER_CAP:
            method = "small"
        else:
            raise CapExceeded(
                f"group order {G.order()} exceeds the resolution cap "
                f"{SMALL_ORDER_CAP}; restrict to a prime or pick "
                "--method wall with a complex"
            )

    results = []
    if method == "sylow":
        if restriction is None:
            raise ValueError("--method sylow needs -p or --p-min")
        primes = _prime_list(G.order(), args.prime, args.p_min)
        for n in degrees:
            parts = []
            used = "sylow"
            for p in primes:
                tor, used = _sylow_invariants(G, p, n, args.seed)
                parts += [(_least_prime(q), q) for q in tor]
            inv = [q for _, q in sorted(parts)]
            results.append({"degree": n, "invariants": inv, "method": used})
    else:
        if method == "small":
            R = resolution_small(G, top + 1, cache_dir=args.cache_dir)
        elif method == "bar":
            R = bar_resolution(G, top + 1)
        else:
            R = _wall_resolution(
                G, args.complex, args.dims, top,
                args.max_dim if args.max_dim is not None else top + 1,
                args.flag_cap, args.rank_cap,
            )
        for n in degrees:
            inv = resolution_homology(R, n)
            if restriction is None:
                out = inv.as_list()
            else:
                out = _restrict(inv, _prime_list(G.order(), args.prime, args.p_min))
            results.append({"degree": n, "invariants": out, "method": method})

    return {
        "group": _fingerprint(G),
        "group_name": args.group,
        "order": G.order(),
        "p_restriction": restriction,
        "results": results,
    }


# -- torsion pattern table -----------------------------------------------


def _cmd_ppart_table(args):
    primes = [int(s) for s in args.primes.split(",")]
    rows = []
    for name in args.groups.split(","):
        name = name.strip()
        G = _group(name)
        cells = {}
        for p in primes:
            if G.order() % p:
                cells[str(p)] = None
            else:
                cells[str(p)] = weyl_exponent(G, p, seed=args.seed).pattern
        rows.append({"group": name, "order": G.order(), "patterns": cells})
    return {"primes": primes, "rows": rows}


# -- flag complex reports ------------------------------------------------


def _cmd_wythoff(args):
    G = _group(args.group)
    dims = args.dims
    poset = essential_poset(G.degree - 1, dims)
    counts = simplex_face_counts(poset, G.degree)
    order = G.order()
    classes = []
    f_vector = {}
    for i, cls in enumerate(poset.classes):
        c = counts[i]
        classes.append({
            "index": i,
            "height": cls.height,
            "core": sorted(cls.core),
            "count": c,
            "stabilizer_order": order // c if c and order % c == 0 else None,
        })
        f_vector[cls.height] = f_vector.get(cls.height, 0) + c
    payload = {
        "group": _fingerprint(G),
        "group_name": args.group,
        "order": order,
        "rings": list(dims),
        "classes": classes,
        "f_vector": {str(h): v for h, v in sorted(f_vector.items())},
        "vertex_degree": wythoff_vertex_degree(poset, G.degree),
    }
    try:
        payload["edge_orbits"] = flag_edge_orbits(G, dims)
    except ValueError:
        payload["edge_orbits"] = None
    if args.orbit_dim is not None:
        ecc = orbit_decompose(
            SimplexFlags(G.degree, dims), G, args.orbit_dim,
            flag_cap=args.flag_cap,
        )
        payload["orbits"] = {
            "counts": list(ecc.counts),
            "chain_ranks": list(ecc.chain_ranks),
            "stabilizer_orders": [list(x) for x in ecc.stab_orders],
        }
    return payload


# -- orbit polytope skeleton ---------------------------------------------


def _cmd_edge_degree(args):
    G = _group(args.group)
    v = tuple(Fraction(s) for s in args.vector.split(","))
    pts = polytope.orbit_points(G, v, cap=args.orbit_cap)
    i = args.vertex if args.vertex is not None else pts.index(v)
    if args.dump_points:
        with open(args.dump_points, "w", newline="") as fh:
            polytope.points_csv(pts, fh)
    deg = polytope.vertex_degree(pts, i, threads=args.threads)
    return {
        "group": _fingerprint(G),
        "group_name": args.group,
        "points": len(pts),
        "vertex_index": i,
        "degree": deg,
        "edges": polytope.edge_count(pts, deg),
        "lp_count": len(pts) - 1,
    }


# -- resolution inspection -----------------------------------------------


def _cmd_resolution(args):
    G = _group(args.group)
    if args.method == "bar":
        R = bar_resolution(G, args.length)
    else:
        R = resolution_small(G, args.length, cache_dir=args.cache_dir)
    return {
        "group": R._fingerprint(G),
        "group_name": args.group,
        "order": R.G.n,
        "method": args.method,
        "ranks": list(R.ranks),
        "homology": [
            {"degree": k, "invariants": resolution_homology(R, k).as_list()}
            for k in range(1, args.length)
        ],
    }


# -- invariant sweep -----------------------------------------------------


def _cmd_selftest(args):
    checks = []

    def check(name, fn):
        fn()
        checks.append({"check": name, "ok": True})

    def snf_sweep():
        rng = random.Random(args.seed)
        for _ in range(100):
            m = rng.randint(1, 40)
            n = rng.randint(1, 40)
            A = [[rng.randint(-1000, 1000) for _ in range(n)] for _ in range(m)]
            diag, U, V = smith_normal_form(A)
            S = [
                [sum(U[i][k] * A[k][j] for k in range(m)) for j in range(n)]
                for i in range(m)
            ]
            S = [
                [sum(S[i][k] * V[k][j] for k in range(n)) for j in range(n)]
                for i in range(m)
            ]
            for i in range(m):
                for j in range(n):
                    want = diag[i] if i == j and i < len(diag) else 0
                    if S[i][j] != want:
                        raise InvariantViolation("U M V does not equal S")

    def resolutions():
        # construction re-verifies d.d = 0 and h d + d h = 1 throughout
        for name in ("S3", "Z4", "V4", "A4"):
            resolution_small(_group(name), 4)
        bar_resolution(_group("Z6"), 3)

    def complexes():
        from .coxeter import simplex_complex

        cases = [
            (catalog.dihedral(4), polygon_solid(4), 2),
            (catalog.alternating(4), simplex_complex(3), 3),
        ]
        for G, base, dim in cases:
            ecc = orbit_decompose(base, G, dim)
            sizes, mats = expand_chain(ecc)
            for k in range(1, len(mats)):
                prod_nonzero = any(
                    sum(mats[k - 1][i][t] * mats[k][t][j] for t in range(sizes[k]))
                    for i in range(sizes[k - 1])
                    for j in range(sizes[k + 1])
                )
                if prod_nonzero:
                    raise InvariantViolation("cell boundaries do not square to zero")

    def wall_oracle():
        R = resolution_small(catalog.cyclic(4), 4)
        ecc = orbit_decompose(polygon_solid(4), catalog.cyclic(4), 2)
        W = wall_assemble(splice(ecc), 3)
        for k in (1, 2, 3):
            if W.homology(k) != resolution_homology(R, k):
                raise InvariantViolation(f"wall and oracle differ at degree {k}")

    check("snf-transforms", snf_sweep)
    check("resolution-identities", resolutions)
    check("cell-boundaries", complexes)
    check("wall-vs-oracle", wall_oracle)
    checks.append({"check": "ce-convention", "ok": True, "value": ce_convention()})
    return {"checks": checks}


# -- plumbing ------------------------------------------------------------


def _csv_rows(command, payload):
    if command == "homology":
        yield ["degree", "invariants", "method"]
        for r in payload["results"]:
            yield [r["degree"], " ".join(map(str, r["invariants"])), r["method"]]
    elif command == "ppart-table":
        primes = payload["primes"]
        yield ["group"] + [str(p) for p in primes]
        for row in payload["rows"]:
            yield [row["group"]] + [
                row["patterns"][str(p)] or "-" for p in primes
            ]
    elif command == "wythoff":
        yield ["class", "height", "core", "count", "stabilizer_order"]
        for c in payload["classes"]:
            yield [
                c["index"], c["height"],
                " ".join(map(str, c["core"])), c["count"],
                c["stabilizer_order"],
            ]
    elif command == "edge-degree":
        yield ["points", "vertex_index", "degree", "edges"]
        yield [
            payload["points"], payload["vertex_index"],
            payload["degree"], payload["edges"],
        ]
    else:
        raise ValueError(f"no csv form for {command}")


def _emit(args, payload):
    out = {
        "command": args.command,
        "tool": "permhomology",
        "version": __version__,
        "seed": args.seed,
        "ce_convention": ce_convention(),
    }
    out.update(payload)
    if args.format == "csv":
        w = csv.writer(sys.stdout)
        for row in _csv_rows(args.command, out):
            w.writerow(row)
    else:
        json.dump(out, sys.stdout, sort_keys=True)
        sys.stdout.write("\n")


def _dims(s: str) -> tuple:
    out = tuple(int(x) for x in s.split(","))
    if len(set(out)) != len(out) or any(x < 0 for x in out):
        raise argparse.ArgumentTypeError("ring dims must be distinct and >= 0")
    return out


def _parser():
    top = argparse.ArgumentParser(
        prog="permhomology",
        description="integral homology of finite permutation groups",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument(
            "--cache-dir",
            default=os.environ.get("PERMHOMOLOGY_CACHE"),
            help="resolution cache (env PERMHOMOLOGY_CACHE)",
        )
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument(
            "--json", dest="format", action="store_const", const="json",
            default="json",
        )
        fmt.add_argument("--csv", dest="format", action="store_const", const="csv")

    p = sub.add_parser("homology", help="homology of one group over a degree range")
    p.add_argument("group", help="catalog name (M24, S5, Z12, ...) or JSON")
    p.add_argument("-n", "--degree", type=int, required=True)
    p.add_argument("--to", type=int, help="top of the degree range")
    p.add_argument("-p", "--prime", type=int)
    p.add_argument("--p-min", type=int, help="restrict to primes >= this")
    p.add_argument(
        "--method", choices=("auto", "sylow", "wall", "bar", "small"),
        default="auto",
    )
    p.add_argument(
        "--complex", choices=("polygon", "flags"), default="polygon",
        help="geometric source for --method wall",
    )
    p.add_argument(
        "--dims", type=_dims, default=(0, 1),
        help="flag ring dims for --complex flags",
    )
    p.add_argument("--max-dim", type=int, help="truncation of the flag complex")
    p.add_argument("--flag-cap", type=int, default=500_000)
    p.add_argument("--rank-cap", type=int, default=50_000)
    common(p)
    p.set_defaults(func=_cmd_homology)

    p = sub.add_parser("ppart-table", help="periodic torsion patterns 2ek-1")
    p.add_argument("--groups", default=MATHIEU_NAMES)
    p.add_argument("--primes", default="5,7,11,23")
    common(p)
    p.set_defaults(func=_cmd_ppart_table)

    p = sub.add_parser("wythoff", help="flag complex face counts and orbits")
    p.add_argument("group")
    p.add_argument("--rings", dest="dims", type=_dims, required=True)
    p.add_argument(
        "--orbit-dim", type=int,
        help="also decompose orbits up to this dimension",
    )
    p.add_argument("--flag-cap", type=int, default=500_000)
    common(p)
    p.set_defaults(func=_cmd_wythoff)

    p = sub.add_parser("edge-degree", help="orbit polytope vertex degree")
    p.add_argument("group")
    p.add_argument("--vector", required=True, help="comma list of rationals")
    p.add_argument("--vertex", type=int, help="index into the sorted orbit")
    p.add_argument("--orbit-cap", type=int, default=polytope.ORBIT_CAP)
    p.add_argument("--dump-points", metavar="PATH", help="write points CSV")
    common(p)
    p.set_defaults(func=_cmd_edge_degree)

    p = sub.add_parser("resolution", help="free resolution ranks and homology")
    p.add_argument("group")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--method", choices=("small", "bar"), default="small")
    common(p)
    p.set_defaults(func=_cmd_resolution)

    p = sub.add_parser("selftest", help="invariant sweep")
    common(p)
    p.set_defaults(func=_cmd_selftest)

    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        payload = args.func(args)
    except CapExceeded as exc:
        json.dump({"error": "cap-exceeded", "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except InvariantViolation as exc:
        json.dump({"error": "invariant-violation", "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 3
    except ValueError as exc:
        json.dump({"error": "bad-input", "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    _emit(args, payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
