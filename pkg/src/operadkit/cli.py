"""``operadkit`` command line.

Each subcommand prints a short human-readable result on stdout, writes its
JSON artifact to ``--output`` (``-`` means stdout, replacing the summary) and
emits a run manifest as one JSON line on stderr.  Exit status: 0 on success,
1 on a domain error or malformed input, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import fm, homology as H, labels as L, partial as PM, sigma as S
from . import trees as T, wconstruction as W


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- plumbing

def jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    if isinstance(x, PM.TensorClass):
        return {"arity": x.arity, "index": x.index}
    return x


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class Run:
    def __init__(self, args):
        self.args = args
        self.inputs: dict[str, str] = {}

    def load(self, path: str, field: str):
        if path is None:
            raise InputError(f"--{field} is required")
        try:
            data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"--{field}: cannot read {path}: {exc.strerror}") from None
        self.inputs[field] = _digest(data)
        try:
            return json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"--{field}: invalid JSON at line {exc.lineno} column {exc.colno}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _monoid(run: Run, path: str, field: str = "monoid") -> PM.PartialMonoid:
    obj = run.load(path, field)
    if not isinstance(obj, dict):
        raise InputError(f"--{field}: expected a JSON object")
    return PM.PartialMonoid.from_json(obj)


def _label_operad(name: str, max_arity: int, nullary: bool = False):
    if name == "ass":
        return S.AssociativeOperad(max_arity, nullary)
    if name == "com":
        return S.CommutativeOperad(max_arity, nullary)
    return S.FreeOperad(S.free_sigma2_generator(), max_arity, 2 * max_arity)


# ---------------------------------------------------------------- commands

def cmd_trees(run, a):
    ts = T.enumerate_trees(a.k, planar=not a.nonplanar, min_valence=a.min_valence,
                           max_vertices=a.max_vertices)
    text = None
    if a.format == "dot":
        text = "".join(T.to_dot(t, f"tree{i}") for i, t in enumerate(ts))
    return f"{len(ts)} trees", {"k": a.k, "count": len(ts), "trees": [T.to_json(t) for t in ts]}, text


def cmd_f_vector(run, a):
    p = W.face_poset(a.k)
    fv = W.f_vector(p)
    art = {"k": a.k, "f_vector": list(fv), "faces": len(p),
           "euler_characteristic": W.euler_characteristic(p)}
    return str(tuple(fv)), art, p.to_dot() if a.format == "dot" else None


def _generator_labels(t):
    """Let a bare generator name stand for its corolla in the free operad."""
    if W.is_twig(t):
        return t
    label = t.label
    if isinstance(label, str):
        label = (label, tuple(range(1, len(t.children) + 1)))
    return W.WVertex(label, tuple(_generator_labels(c) for c in t.children), t.length)


def cmd_w_normalize(run, a):
    t = W.from_json(run.load(a.input, "input"))
    k = W.arity(t)
    A = _label_operad(a.operad, max(k, 2) + 2)
    if a.operad == "free":
        t = _generator_labels(t)
    W.check_wtree(t, A)
    nf = W.normalize_wtree(t, A, symmetric=not a.nonsymmetric)
    art = {"input": W.to_json(t), "normal_form": W.to_json(nf)}
    if a.all_orders:
        forms = W.normal_forms_all_orders(t, A, symmetric=not a.nonsymmetric)
        art["confluent"] = len(forms) == 1
    return json.dumps(jsonable(W.to_json(nf)), sort_keys=True), art, None


def cmd_compose(run, a):
    host = run.load(a.input, "input")
    guest = run.load(a.guest, "guest")
    if a.kind == "tree":
        out = T.graft(T.from_json(host), a.slot, T.from_json(guest))
        return T.canonical_code(out), {"tree": T.to_json(out)}, \
            T.to_dot(out) if a.format == "dot" else None
    out = fm.fm_compose(fm.from_json(host), a.slot, fm.from_json(guest))
    return repr(out), fm.to_json(out), _fm_text(out, a.format)


def _fm_text(x, fmt):
    if fmt == "dot":
        return fm.to_dot(x)
    if fmt == "svg":
        return fm.to_svg(x)
    return None


def cmd_complete_monoid(run, a):
    A = _monoid(run, a.input, "input")
    C = PM.complete_monoid(A, a.max_len, strict=False)
    art = {"monoid": A.name, "bound": a.max_len, "count": len(C),
           "normal_forms": [list(f) for f in C.normal_forms],
           "violations": [list(map(list, v)) for v in C.violations]}
    msg = f"{len(C)} normal forms"
    if C.violations:
        msg += f", {len(C.violations)} confluence violations"
    return msg, art, None


def cmd_tensor(run, a):
    A = _monoid(run, a.monoid)
    F = _label_operad(a.operad, a.max_letters, nullary=True)
    X = PM.PartialAlgebra(A, F)
    Tn = PM.tensor_over_operad(PM.OperadModule(F), F, X, max_arity=0, max_letters=a.max_letters)
    classes = []
    for cls in Tn.elements(0):
        c, pi, xs = Tn.representative(cls)
        classes.append({"operation": c, "labels": list(xs),
                        "filtration": Tn.filtration_index(cls), "members": len(Tn.members(cls))})
    return f"{len(classes)} classes", {"operad": a.operad, "max_letters": a.max_letters,
                                       "classes": classes}, None


def _points(obj, field):
    pts = obj.get("points") if isinstance(obj, dict) else obj
    if not isinstance(pts, list):
        raise InputError(f"--{field}: expected a list of points or an object with 'points'")
    try:
        return [fm.as_point(p) for p in pts]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--{field}: bad point ({exc})") from None


def cmd_cluster(run, a):
    x = fm.cluster(_points(run.load(a.input, "input"), "input"), a.theta)
    return repr(x), fm.to_json(x), _fm_text(x, a.format)


def cmd_resolve(run, a):
    x = fm.from_json(run.load(a.input, "input"))
    eps = a.eps if a.eps is not None else min(fm.resolve_bound(x) / 2, Fraction(1, 1600))
    pts = fm.resolve(x, eps)
    art = {"eps": eps, "bound": fm.resolve_bound(x), "points": [list(p) for p in pts]}
    return f"{len(pts)} points at eps={eps}", art, None


def cmd_blow_down(run, a):
    x = fm.from_json(run.load(a.input, "input"))
    pts = fm.blow_down(x)
    return " ".join("(" + ", ".join(map(str, p)) + ")" for p in pts), \
        {"points": [list(p) for p in pts]}, None


def cmd_discs_to_fm(run, a):
    t = fm.disc_tree_from_json(run.load(a.input, "input"), a.dim)
    x = fm.little_discs_to_fm(t, a.dim)
    return repr(x), fm.to_json(x), _fm_text(x, a.format)


def cmd_config_normalize(run, a):
    A = _monoid(run, a.monoid)
    c = L.config_from_json(run.load(a.input, "input"))
    out = L.normalize_config(c, A, strict=not a.allow_collisions)
    msg = f"{len(out)} particles" + (" (collision)" if out.collision else "")
    return msg, L.config_to_json(out), None


def cmd_scan(run, a):
    c = L.config_from_json(run.load(a.input, "input"))
    out = L.scan_1d(c, a.t)
    return f"{len(out)} particles at t={a.t}", L.config_to_json(out), None


def cmd_homology(run, a):
    if a.input is not None:
        c = H.ChainComplex.from_json(run.load(a.input, "input"))
        source = "input"
    elif a.associahedron is not None:
        p = W.face_poset(a.associahedron)
        c = H.order_complex(p, W.boundary(p) if a.boundary else None)
        source = f"face poset k={a.associahedron}" + (" boundary" if a.boundary else "")
    else:
        raise InputError("give --input or --associahedron")
    res = H.homology(c)
    return str(res), {"source": source, "ranks": c.ranks, **res.to_json()}, None


def cmd_bar(run, a):
    if a.monoid is not None:
        A = _monoid(run, a.monoid)
        if not A.is_total():
            A = PM.complete_monoid(A, a.bound, strict=True)
    elif a.cyclic is not None:
        A = H.cyclic_group(a.cyclic)
    else:
        raise InputError("give --monoid or --cyclic")
    c = H.bar_complex(A, a.qmax)
    res = H.homology(c)
    return str(res), {"qmax": a.qmax, "ranks": c.ranks, **res.to_json()}, None


def cmd_check_axioms(run, a):
    n = a.max_arity
    if a.operad == "ass":
        op = S.AssociativeOperad(n)
    elif a.operad == "com":
        op = S.CommutativeOperad(n)
    elif a.operad == "free":
        op = S.free_operad(S.free_sigma2_generator(), n, n)
    else:
        op = S.semidirect_product(S.CommutativeOperad(n), S.cyclic_group(2))
    rep = S.check_operad_axioms(op, sample_budget=a.budget, seed=a.seed)
    art = {"operad": a.operad, "max_arity": n, "ok": rep.ok, "exhaustive": rep.exhaustive,
           "checked": rep.checked, "violations": [str(v) for v in rep.violations[:50]]}
    total = sum(rep.checked.values())
    return f"{'ok' if rep.ok else 'FAILED'}: {total} checks, {len(rep.violations)} violations", art, None


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="operadkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--output", "-o", help="artifact path; '-' for stdout")
        sp.add_argument("--format", choices=("json", "dot", "svg"), default="json")
        sp.add_argument("--seed", type=int, default=0)
        sp.set_defaults(func=func)
        return sp

    sp = add("trees", cmd_trees, "enumerate trees with k leaves")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--nonplanar", action="store_true")
    sp.add_argument("--min-valence", type=int, default=2)
    sp.add_argument("--max-vertices", type=int)

    sp = add("f-vector", cmd_f_vector, "face counts of the associahedron K_k")
    sp.add_argument("--k", type=int, required=True)

    sp = add("w-normalize", cmd_w_normalize, "normal form of a W-tree")
    sp.add_argument("--input", required=True)
    sp.add_argument("--operad", choices=("ass", "com", "free"), default="free")
    sp.add_argument("--nonsymmetric", action="store_true")
    sp.add_argument("--all-orders", action="store_true", help="also check confluence")

    sp = add("compose", cmd_compose, "graft trees or insert an FM point")
    sp.add_argument("--kind", choices=("tree", "fm"), default="fm")
    sp.add_argument("--input", required=True)
    sp.add_argument("--guest", required=True)
    sp.add_argument("--slot", type=int, required=True, help="1-based twig")

    sp = add("complete-monoid", cmd_complete_monoid, "bounded monoid completion")
    sp.add_argument("--input", required=True)
    sp.add_argument("--max-len", type=int, required=True)

    sp = add("tensor", cmd_tensor, "F ⊗_F A for a partial monoid A")
    sp.add_argument("--monoid", required=True)
    sp.add_argument("--operad", choices=("ass", "com"), default="com")
    sp.add_argument("--max-letters", type=int, default=3)

    sp = add("cluster", cmd_cluster, "FM point read off a configuration")
    sp.add_argument("--input", required=True)
    sp.add_argument("--theta", type=_fraction, default=Fraction(1, 10))

    sp = add("resolve", cmd_resolve, "genuine configuration near an FM point")
    sp.add_argument("--input", required=True)
    sp.add_argument("--eps", type=_fraction)

    sp = add("blow-down", cmd_blow_down, "macroscopic locations of an FM point")
    sp.add_argument("--input", required=True)

    sp = add("discs-to-fm", cmd_discs_to_fm, "FM point of a little-discs W-tree")
    sp.add_argument("--input", required=True)
    sp.add_argument("--dim", type=int, default=2)

    sp = add("config-normalize", cmd_config_normalize, "merge coincident labelled particles")
    sp.add_argument("--input", required=True)
    sp.add_argument("--monoid", required=True)
    sp.add_argument("--allow-collisions", action="store_true")

    sp = add("scan", cmd_scan, "evaluate the scanning loop at t")
    sp.add_argument("--input", required=True)
    sp.add_argument("--t", type=_fraction, required=True)

    sp = add("homology", cmd_homology, "integer homology of a chain complex")
    sp.add_argument("--input")
    sp.add_argument("--associahedron", type=int, metavar="K")
    sp.add_argument("--boundary", action="store_true")

    sp = add("bar", cmd_bar, "homology of the normalized bar complex")
    sp.add_argument("--monoid")
    sp.add_argument("--cyclic", type=int, metavar="N")
    sp.add_argument("--qmax", type=int, default=5)
    sp.add_argument("--bound", type=int, default=8, help="completion bound for partial input")

    sp = add("check-axioms", cmd_check_axioms, "operad axiom suite")
    sp.add_argument("--operad", choices=("ass", "com", "free", "semidirect"), default="ass")
    sp.add_argument("--max-arity", type=int, default=4)
    sp.add_argument("--budget", type=int, default=200000)
    return p


DOMAIN_ERRORS = (ValueError, KeyError, TypeError, IndexError, ArithmeticError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run = Run(args)
    try:
        summary, artifact, text = args.func(run, args)
    except DOMAIN_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"operadkit {args.command}: error: {msg}", file=sys.stderr)
        return 1
    payload = (text if text is not None else dumps(artifact)).encode()
    if args.output == "-":
        sys.stdout.write(payload.decode())
    else:
        print(summary)
        if args.output:
            Path(args.output).write_bytes(payload)
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "command", "output") and v is not None}
    manifest = {"subcommand": args.command, "parameters": jsonable(params),
                "inputs": run.inputs, "output_digest": _digest(payload),
                "seed": args.seed, "version": __version__}
    print(json.dumps(manifest, sort_keys=True), file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
