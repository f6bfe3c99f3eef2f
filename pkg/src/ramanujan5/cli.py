"""Command line pipeline: order, gates, reductions, labels and complexes.

Exit codes: 0 success, 2 invalid configuration, 3 failed mathematical check,
4 missing cache.  Every command prints one JSON summary on stdout.
"""

import argparse
import hashlib
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path

from . import building, complexes, gates, modn, orders

log = logging.getLogger("ramanujan5")

EXIT_OK, EXIT_CONFIG, EXIT_MATH, EXIT_CACHE = 0, 2, 3, 4


class ConfigError(Exception):
    pass


class MathError(Exception):
    def __init__(self, check, detail=""):
        super().__init__(f"{check}: {detail}" if detail else check)
        self.check = check


class CacheMissing(Exception):
    pass


def _is_prime(p):
    return p > 1 and all(p % d for d in range(2, int(p ** 0.5) + 1))


@dataclass
class RunConfig:
    p: int = 11
    n: int = 3
    bound: str = "34"
    cache_dir: str = ".ramanujan5"
    candidates: str = ""
    gates: str = ""
    out: str = ""
    seed: int = 0
    threads: int = 1
    force: bool = False
    strict_bound: bool = False
    partial_ok: bool = True
    include_v: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def e(self):
        return gates.exponent_for(self.p)

    def validate(self, need_n=False):
        if not _is_prime(self.p) or self.p in (2, 7):
            raise ConfigError(f"p = {self.p} must be a prime other than 2 and 7")
        if need_n:
            if self.n < 1 or gcd(self.n, 14 * self.p) != 1:
                raise ConfigError(f"n = {self.n} must be prime to 2 * 7 * p")
            if self.n % 11 == 0 and not self.include_v:
                raise ConfigError("11 | n needs --include-v")

    @property
    def order_path(self):
        return Path(self.cache_dir) / "order.json"

    def gates_path(self):
        return Path(self.gates) if self.gates else Path(self.cache_dir) / f"gates_p{self.p}.json"


def _hash_file(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]


def _load_order(cfg):
    if not cfg.order_path.exists():
        raise CacheMissing(f"{cfg.order_path} (run build-order first)")
    return orders.OrderBundle.from_json(cfg.order_path.read_text())


def _write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# ---------------------------------------------------------------- commands

def cmd_build_order(cfg):
    if cfg.order_path.exists() and not cfg.force:
        return {"cached": str(cfg.order_path), "hash": _hash_file(cfg.order_path)}
    t = time.time()
    bundle = orders.OrderBundle.build()
    h = _write(cfg.order_path, bundle.to_json())
    return {"written": str(cfg.order_path), "hash": h, "seconds": round(time.time() - t, 2),
            "bmax_matches_reference": orders.same_lattice(bundle.bmax, orders.reference_bmax())}


def cmd_verify_order(cfg):
    bundle = _load_order(cfg)
    rep = orders.verify_order_properties(bundle)
    rep = {k: (str(v) if k == "index" else v) for k, v in rep.items()}
    failed = [k for k, v in rep.items() if isinstance(v, bool) and not v]
    rep["failed"] = failed
    if failed:
        raise MathError("verify-order", ", ".join(failed) + " | " + json.dumps(rep, default=str))
    return rep


def cmd_find_gates(cfg):
    bundle = _load_order(cfg)
    if not cfg.candidates:
        raise ConfigError("--candidates is required")
    if not Path(cfg.candidates).exists():
        raise CacheMissing(cfg.candidates)
    cands, rejected = gates.load_candidates(cfg.candidates, return_rejected=True)
    bound = gates.Fraction(cfg.bound)
    if cfg.strict_bound and bound > gates.sufficiency_bound(cfg.p, cfg.e):
        raise ConfigError("bound exceeds the sufficiency bound")
    t = time.time()
    rep = gates.solve_norm_equation_report(bundle, cfg.p, cfg.e, bound, cands, cfg.threads)
    found = gates.gates_from_solutions(cfg.p, cfg.e, rep.solutions, source=_hash_file(cfg.candidates))
    path = cfg.gates_path()
    h = _write(path, json.dumps([g.to_dict() for g in found], indent=1, sort_keys=True))
    return {"p": cfg.p, "e": cfg.e, "bound": str(bound), "enumerated": rep.enumerated,
            "prefilter_hits": rep.prefilter_hits, "charpoly_matches": len(rep.charpoly_matches),
            "norm_failures": len(rep.norm_failures),
            "membership_failures": len(rep.membership_failures),
            "gates": len(found), "rejected_candidates": len(rejected),
            "written": str(path), "hash": h, "order_hash": _hash_file(cfg.order_path),
            "seconds": round(time.time() - t, 2)}


def cmd_count_gates(cfg):
    out = {"p": cfg.p, "e": cfg.e, "split": gates.is_split(cfg.p),
           "formula": gates.gate_count_formula(cfg.p)}
    if not gates.is_split(cfg.p):
        out["distinct_labels"] = gates.inert_label_count(cfg.p)
    if cfg.extra.get("enumerate") and gates.is_split(cfg.p):
        out["enumerated"] = building.count_split_labels(cfg.p)
        if out["enumerated"] != out["formula"]:
            raise MathError("split label census", json.dumps(out, default=str))
    return out


def _load_gate_file(cfg):
    path = cfg.gates_path()
    if not path.exists():
        raise CacheMissing(str(path))
    return gates.load_gates(path)


def _bundle_or_worked(cfg):
    bundle = _load_order(cfg)
    if cfg.extra.get("worked") and not cfg.gates_path().exists():
        return bundle, [gates.worked_gate(bundle)]
    found = _load_gate_file(cfg)
    if not found and cfg.extra.get("worked"):
        found = [gates.worked_gate(bundle)]
    return bundle, found


def cmd_reduce_gates(cfg):
    cfg.validate(need_n=True)
    bundle, found = _bundle_or_worked(cfg)
    triv = modn.build_Bn(cfg.n, cfg.seed)
    cn = modn.build_Cn(triv.hermitian())
    mats = []
    for g in found:
        try:
            mats.append(modn.reduce_gate(g, triv, cn))
        except ArithmeticError as exc:
            raise MathError("reduce-gate unitarity", str(exc))
    out = Path(cfg.out) if cfg.out else Path(cfg.cache_dir) / f"reduced_p{cfg.p}_n{cfg.n}.json"
    h = _write(out, modn.export_reduced(mats, cfg.n))
    return {"n": cfg.n, "lambda": str(cn.lam), "reduced": len(mats), "written": str(out),
            "hash": h, "sizes": {k: str(v) for k, v in modn.group_sizes(cfg.n, cfg.p).items()}}


def cmd_label_gates(cfg):
    if gates.is_split(cfg.p):
        bundle, found = _bundle_or_worked(cfg)
        if cfg.p == 11:
            triv = modn.build_Vp0(bundle, 1, cfg.seed)
        else:
            triv = modn.build_Bn(cfg.p, cfg.seed)
        rp = gates.rho_p(cfg.p)
        table, failures = [], []
        for i, g in enumerate(found):
            try:
                table.append({"gate": i, "label": [list(r) for r in
                                                   building.match_gate_split(g, triv, cfg.p, rp)]})
            except (building.GateMatchError, modn.NotIntegral, ValueError) as exc:
                failures.append({"gate": i, "error": str(exc)})
        labels = [tuple(map(tuple, t["label"])) for t in table]
        if len(set(labels)) != len(labels):
            raise MathError("label injectivity")
        out = Path(cfg.out) if cfg.out else Path(cfg.cache_dir) / f"labels_p{cfg.p}.json"
        h = _write(out, json.dumps({"labels": table, "failures": failures}, sort_keys=True))
        res = {"p": cfg.p, "labelled": len(table), "failures": failures, "written": str(out),
               "hash": h, "expected": gates.gate_count_formula(cfg.p)}
        if failures and not cfg.partial_ok:
            raise MathError("label-gates", json.dumps(failures))
        return res
    n2 = cfg.p ** 2
    model = building.InertModel(cfg.p, modn.build_Bn(n2, cfg.seed).hermitian())
    part = model.partition()
    sizes = sorted({len(v) for v in part.values()})
    total = sum(len(v) for v in part.values())
    return {"p": cfg.p, "distinct_labels": total, "formula": gates.gate_count_formula(cfg.p),
            "corrected_count": gates.inert_label_count(cfg.p),
            "distance_one": {"lines": len(model.isotropic_subspaces(1)),
                             "planes": len(model.isotropic_subspaces(2))},
            "fibre_sizes": sizes}


def _real_template(found, p):
    """Template from the available gates: labelled gates give chains, others only edges."""
    q, gmap_keys, simplices = [], {}, []
    for i, g in enumerate(found):
        key = g.label if g.label is not None else ("gate", i)
        q.append(key)
        gmap_keys[key] = i
        simplices.append((key,))
    labelled = [k for k in q if not (isinstance(k, tuple) and k and k[0] == "gate")]
    if labelled:
        simplices = [c for c in building.split_simplices(labelled, p)] + \
            [(k,) for k in q if k not in labelled]
    return complexes.Template(q=q, simplices=simplices), gmap_keys


def cmd_explore(cfg):
    cfg.validate(need_n=True)
    case = "split" if gates.is_split(cfg.p) else "inert"
    path = cfg.gates_path()
    found = gates.load_gates(path) if path.exists() else []
    if not found and cfg.extra.get("worked") and cfg.p == 11:
        found = [gates.worked_gate(_load_order(cfg))]
    triv = modn.build_Bn(cfg.n, cfg.seed)
    cn = modn.build_Cn(triv.hermitian())
    scalars = complexes.unit_circle(cfg.n) if case == "split" else None
    G = complexes.MatrixGroupModN(cfg.n, scalars)
    template, idx = _real_template(found, cfg.p)
    gate_map = {k: G.key(modn.reduce_gate(found[i], triv, cn)) for k, i in idx.items()}
    star = complexes.explore_vertex(G, gate_map, template, G.identity(), cfg.extra.get("radius", 1), case)
    expected_count = gates.gate_count_formula(cfg.p) if case == "split" else gates.inert_label_count(cfg.p)
    star.complete = len(found) == expected_count
    table = building.valency_table(cfg.p, case)
    bounds = complexes.degree_bounds(table, case)
    rep = complexes.validate_structure(star, bounds, group=G, gates=list(gate_map.values()))
    res = {"p": cfg.p, "n": cfg.n, "case": case, "gates": len(found),
           "complete": star.complete, "degrees": star.degrees(), "bounds": bounds,
           "violations": [list(map(str, v)) for v in rep.violations]}
    if rep.violations:
        raise MathError("explore degree audit", json.dumps(res, default=str))
    return res


def toy_instance(name):
    """Small named instances: (group, gate_map, template, case)."""
    T = complexes.Template
    if name == "cyclic7":
        return (complexes.CyclicGroup(7), {"a": 1, "b": 3},
                T(q=["a", "b"], simplices=[("a",), ("b",), ("a", "b")]), "split")
    if name == "cyclic12":
        q = ["a", "b", "c"]
        return (complexes.CyclicGroup(12, colors=3), {"a": 1, "b": 4, "c": 2},
                T(q=q, simplices=[("a",), ("b",), ("c",), ("a", "c")],
                  colors={"a": 1, "b": 1, "c": 2}), "split")
    if name == "dihedral10":
        G = complexes.DihedralGroup(5)
        return (G, {"a": (1, 0), "b": (0, 1), "c": (2, 1)},
                T(q=["a", "b", "c"], simplices=[("a",), ("b",), ("c",), ("a", "b"), ("b", "c")]),
                "split")
    if name == "s4":
        G = complexes.PermutationGroup([(1, 0, 2, 3), (1, 2, 3, 0)])
        return (G, {"a": (1, 2, 3, 0), "b": (0, 2, 1, 3)},
                T(q=["a", "b"], simplices=[("a",), ("b",), ("a", "b")]), "split")
    if name == "inert-cyclic15":
        return (complexes.CyclicGroup(15), {"a": 3, "b": 5, "c": 6},
                T(q=["a", "b", "c"], simplices=[], parts={0: ["a"], 1: ["b", "c"]},
                  chambers=[(0, 1)]), "inert")
    if name == "inert-dihedral12":
        G = complexes.DihedralGroup(6)
        return (G, {"a": (1, 0), "b": (2, 1), "c": (3, 0), "d": (0, 1)},
                T(q=["a", "b", "c", "d"], simplices=[], parts={0: ["a"], 1: ["b", "c"], 2: ["d"]},
                  chambers=[(0, 1), (1, 2)]), "inert")
    if name == "inert-singletons":
        return (complexes.CyclicGroup(9), {"a": 1, "b": 4},
                T(q=["a", "b"], simplices=[], parts={0: ["a"], 1: ["b"]}, chambers=[(0, 1)]),
                "inert")
    raise ConfigError(f"unknown toy instance {name!r}")


TOYS = ("cyclic7", "cyclic12", "dihedral10", "s4", "inert-cyclic15", "inert-dihedral12",
        "inert-singletons")


def _build_toy(name):
    G, gm, T, case = toy_instance(name)
    if case == "split":
        c = complexes.build_split_complex(G, gm, T)
        oracle = complexes.brute_force_split(G, gm, T)
    else:
        c = complexes.build_inert_complex(G, gm, T)
        oracle = complexes.brute_force_inert(G, gm, T)
    return c, oracle, G, gm, T, case


def cmd_build_toy(cfg):
    name = cfg.extra.get("toy", "cyclic7")
    c, oracle, *_ = _build_toy(name)
    same = complexes.equals_oracle(c, oracle)
    out = Path(cfg.out) if cfg.out else Path(cfg.cache_dir) / f"toy_{name}.jsonl"
    h = _write(out, c.to_jsonl())
    res = {"toy": name, "counts": c.counts(), "matches_oracle": same,
           "downward_closed": c.is_downward_closed(), "written": str(out), "hash": h}
    if not same:
        raise MathError("toy oracle equivalence", json.dumps(res, default=str))
    return res


def cmd_validate(cfg):
    name = cfg.extra.get("toy", "cyclic7")
    c, _, G, gm, T, case = _build_toy(name)
    star = complexes.explore_vertex(G, gm, T, G.identity(), 1, case)
    expected = {d: n for d, n in star.degrees().items() if d > 0}
    rep = complexes.validate_structure(c, expected, group=G, gates=list(gm.values()))
    res = {"toy": name, "ok": rep.ok, "expected": expected,
           "violations": [list(map(str, v)) for v in rep.violations]}
    if not rep.ok:
        raise MathError("validate-structure", json.dumps(res, default=str))
    return res


COMMANDS = {
    "build-order": cmd_build_order,
    "verify-order": cmd_verify_order,
    "find-gates": cmd_find_gates,
    "count-gates": cmd_count_gates,
    "reduce-gates": cmd_reduce_gates,
    "label-gates": cmd_label_gates,
    "explore": cmd_explore,
    "build-toy": cmd_build_toy,
    "validate": cmd_validate,
}


def make_parser():
    ap = argparse.ArgumentParser(prog="ramanujan5", description=__doc__)
    ap.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    ap.add_argument("--cache-dir")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--cache-dir", dest="sub_cache_dir")
        sp.add_argument("--p", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--bound")
        sp.add_argument("--candidates")
        sp.add_argument("--gates")
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--threads", type=int)
        sp.add_argument("--force", action="store_true", default=None)
        sp.add_argument("--strict-bound", action="store_true", default=None)
        sp.add_argument("--no-partial", dest="partial_ok", action="store_false", default=None)
        sp.add_argument("--include-v", action="store_true", default=None)
        sp.add_argument("--worked", action="store_true",
                        help="fall back to the worked p = 11 gate when no gate file exists")
        sp.add_argument("--enumerate", action="store_true", help="count-gates: enumerate labels")
        sp.add_argument("--radius", type=int, default=1)
        sp.add_argument("--toy", choices=TOYS, default="cyclic7")
    return ap


def config_from_args(args):
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config: {exc}")
    known = set(RunConfig.__dataclass_fields__) - {"extra"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    cfg = RunConfig(**data)
    for name in known:
        v = getattr(args, name, None)
        if v is not None:
            setattr(cfg, name, v)
    if args.sub_cache_dir or args.cache_dir:
        cfg.cache_dir = args.sub_cache_dir or args.cache_dir
    cfg.extra = {"worked": args.worked, "enumerate": args.enumerate, "radius": args.radius,
                 "toy": args.toy}
    return cfg


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        cfg = config_from_args(args)
        cfg.validate()
        result = COMMANDS[args.command](cfg)
        code = EXIT_OK
    except ConfigError as exc:
        result, code = {"error": "config", "detail": str(exc)}, EXIT_CONFIG
    except MathError as exc:
        result, code = {"error": "assertion", "check": exc.check, "detail": str(exc)}, EXIT_MATH
    except CacheMissing as exc:
        result, code = {"error": "missing cache", "detail": str(exc)}, EXIT_CACHE
    print(json.dumps({"command": args.command, "result": result}, sort_keys=True, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
