"""Command-line interface: construct, verify, enumerate, cohomology.

Exit codes: 0 success, 1 a requested check failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .acm import (
    CheckReport,
    ConstructionError,
    MatrixFactorization,
    acm_check,
    bundle_modules,
    companion_module_check,
    duality_report,
    enumerate_betti,
    general_vanishing_probe,
    identity_suite,
    n_module,
    pfaffian_construction,
    split_factorization,
    split_test,
    verify_factorization,
    HypersurfaceContext,
)
from .cohomology import cohomology_table
from .homalg import GradedFreeModule, GradedMap, PresentedModule, quotient_by_hypersurface, exterior_square
from .ring import Field, ParseError, PolyMatrix, Polynomial, Ring

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

PFAFFIAN_NAMES = ("f", "g", "h", "a", "b", "c")
MODULE_NAMES = ("E", "G", "ExG", "EvE", "Fbar", "O", "OX")


class UsageError(Exception):
    pass


# serialization


def poly_to_json(p):
    field = p.ring.field
    return [[list(e), field.to_string(c)] for e, c in p.sorted_terms()]


def poly_from_json(ring, data):
    terms = {}
    for exps, c in data:
        if len(exps) != ring.nvars:
            raise UsageError(f"monomial {exps} has the wrong number of variables")
        k = ring.key(tuple(exps))
        terms[k] = ring.field.from_string(str(c))
    return Polynomial(ring, {k: v for k, v in terms.items() if v})


def matrix_to_json(m):
    return [[poly_to_json(e) for e in row] for row in m.rows]


def matrix_from_json(ring, data, ncols):
    return PolyMatrix(ring, [[poly_from_json(ring, e) for e in row] for row in data], ncols)


def factorization_to_json(mf):
    return {
        "F": poly_to_json(mf.context.F),
        "e": mf.e,
        "phi": matrix_to_json(mf.phi.matrix),
        "psi": matrix_to_json(mf.psi.matrix),
        "F0_degrees": list(mf.phi.target.degrees),
        "F1_degrees": list(mf.phi.source.degrees),
    }


def factorization_from_json(ring, data):
    try:
        F = poly_from_json(ring, data["F"])
        t = GradedFreeModule(data["F0_degrees"])
        s = GradedFreeModule(data["F1_degrees"])
        ctx = HypersurfaceContext.of(F)
        phi = GradedMap(matrix_from_json(ring, data["phi"], s.rank), s, t, check=False)
        psi_src = GradedFreeModule(x + ctx.d for x in t.degrees)
        psi = GradedMap(matrix_from_json(ring, data["psi"], t.rank), psi_src, s, check=False)
        return MatrixFactorization(phi, psi, ctx, int(data["e"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad factorization data: {exc}") from None


def betti_to_json(b):
    return {"r": b.r, "e": b.e, "a": list(b.a)}


def dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_atomic(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# job assembly


def parse_window(text):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"bad window {text!r}; expected lo:hi") from None
    if lo > hi:
        raise UsageError(f"empty window {text!r}")
    return lo, hi


def load_job(path):
    if path is None:
        return {}
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read job file: {exc}") from None
    try:
        if p.suffix.lower() == ".toml":
            return tomllib.loads(raw.decode())
        return json.loads(raw)
    except (ValueError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot parse job file {path}: {exc}") from None


class Job:
    """Validated inputs of one invocation."""

    def __init__(self, args):
        data = load_job(getattr(args, "job", None))
        self.data = data
        field_spec = args.field or data.get("field") or "fp:32003"
        try:
            self.field = Field.parse(field_spec)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        nvars = args.vars or data.get("vars") or data.get("nvars")
        if nvars is None:
            raise UsageError("number of variables not given (--vars or 'vars' in the job file)")
        try:
            self.ring = Ring(int(nvars), self.field)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        window = getattr(args, "window", None) or data.get("window")
        if isinstance(window, str):
            window = parse_window(window)
        self.window = tuple(window) if window else None
        self.polys = self._collect_polys(getattr(args, "poly", None) or [], data)

    def parse(self, text):
        try:
            return self.ring.parse(str(text))
        except ParseError as exc:
            raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from None
        except ValueError as exc:
            raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from None

    def _collect_polys(self, flags, data):
        named = {}
        ordered = []
        src = data.get("polys")
        if isinstance(src, dict):
            named.update({str(k): v for k, v in src.items()})
        elif isinstance(src, list):
            ordered.extend(src)
        for item in flags:
            if "=" in item and item.split("=", 1)[0].strip() in PFAFFIAN_NAMES + ("F",):
                k, v = item.split("=", 1)
                named[k.strip()] = v
            else:
                ordered.append(item)
        out = {}
        for name, text in zip(PFAFFIAN_NAMES, ordered):
            out[name] = self.parse(text)
        for name, text in named.items():
            out[name] = self.parse(text)
        return out

    def factorization(self):
        if "factorization" in self.data:
            return factorization_from_json(self.ring, self.data["factorization"]), None
        split = self.data.get("split")
        if split is not None:
            F = self.parse(split["F"]) if "F" in split else self.polys.get("F")
            if F is None:
                raise UsageError("split job needs F")
            try:
                mf, _ = split_factorization(F, tuple(split.get("twists", (0, 1))))
            except ConstructionError as exc:
                raise UsageError(str(exc)) from None
            return mf, None
        missing = [n for n in PFAFFIAN_NAMES if n not in self.polys]
        if missing:
            raise UsageError(f"missing polynomials {', '.join(missing)} (need f g h a b c)")
        try:
            mf, ctx = pfaffian_construction(*(self.polys[n] for n in PFAFFIAN_NAMES))
        except ConstructionError as exc:
            raise UsageError(str(exc)) from None
        return mf, ctx


def default_window(d):
    return (-2 * d - 2, 2 * d + 2)


def header(job, command):
    return {"command": command, "field": job.field.spec, "vars": job.ring.nvars, "version": __version__}


# commands


def cmd_construct(args):
    job = Job(args)
    mf, _ = job.factorization()
    rep = verify_factorization(mf)
    ctx = mf.context
    out = header(job, "construct")
    out.update(
        n=ctx.n,
        d=ctx.d,
        e=mf.e,
        smooth=ctx.smooth,
        betti=betti_to_json(mf.betti),
        factorization=factorization_to_json(mf),
        checks=rep.to_json(),
    )
    text = [
        f"F = {ctx.F}",
        f"n = {ctx.n}, d = {ctx.d}, e = {mf.e}, smooth = {ctx.smooth}",
        f"betti = {mf.betti}",
        rep.render(),
    ]
    if not ctx.smooth:
        text.append("warning: F is not smooth")
    return out, "\n".join(text), 0


def _guard(report, name, fn):
    try:
        return fn()
    except (ValueError, ArithmeticError) as exc:
        report.add(name, False, f"error: {exc}")
        return None


def cmd_verify(args):
    job = Job(args)
    mf, _ = job.factorization()
    ctx = mf.context
    window = job.window or default_window(ctx.d)
    suite = args.suite
    reports = []
    fac = verify_factorization(mf)
    if args.expect_split:
        # split inputs are allowed unit entries
        fac.items = [i for i in fac.items if not i.name.startswith("minimal")]
    reports.append(fac)
    data = bundle_modules(mf, verify=False)
    main = CheckReport("bundle")
    reports.append(main)
    acm = _guard(main, "ACM (all twists)", lambda: acm_check(data))
    if acm is not None:
        main.add("ACM (all twists)", acm)
    splits = _guard(main, "split test", lambda: split_test(data)) if ctx.n >= 4 else None
    if splits is not None:
        expected = bool(args.expect_split)
        main.add("split test" + (" (expected split)" if expected else " (expected non-split)"),
                 splits == expected, f"splits = {splits}")
        main.add("split test agrees with r = 2", splits == (mf.rank == 2), f"r = {mf.rank}")
    if not args.expect_split and ctx.n >= 4:
        N = _guard(main, "N cyclic in degree -d", lambda: n_module(data))
        if N is not None:
            main.add("N cyclic in degree -d", True, f"dims {dict(sorted(N.dims.items()))}")
    if suite == "full":
        rep = _guard(main, "identity suite", lambda: identity_suite(data, window))
        if rep is not None:
            reports.append(rep)
        if not args.expect_split and ctx.n >= 4:
            rep = _guard(main, "companion module", lambda: companion_module_check(data))
            if rep is not None:
                reports.append(rep)
            if ctx.n in (4, 5):
                dual = _guard(main, "duality symmetry", lambda: duality_report(data))
                if dual is not None:
                    main.add("duality symmetry", dual.ok, str(dual.pairs))
            if ctx.n == 5 and ctx.d >= 3:
                probe = _guard(main, "special-hypersurface probe", lambda: general_vanishing_probe(data))
                if probe is not None:
                    main.add("special-hypersurface probe", probe.ok,
                             f"{len(probe.nonzero_monomials)} of {probe.tested} monomials act nonzero")
    ok = all(r.ok for r in reports)
    out = header(job, "verify")
    out.update(suite=suite, window=list(window), ok=ok, betti=betti_to_json(mf.betti), e=mf.e,
               n=ctx.n, d=ctx.d, reports=[r.to_json() for r in reports])
    text = "\n".join(r.render() for r in reports) + f"\noverall: {'PASS' if ok else 'FAIL'}"
    return out, text, 0 if ok else 1


def cmd_enumerate(args):
    d, e, n = args.d, args.e, args.n
    if d is None or d < 1:
        raise UsageError("d must be a positive integer")
    if e not in (0, -1):
        raise UsageError("e must be 0 or -1")
    if n < 4:
        raise UsageError("n must be at least 4")
    seqs = enumerate_betti(d, e, n)
    rows = [dict(betti_to_json(s), binding=s.binding(d)) for s in seqs]
    out = {"command": "enumerate", "d": d, "e": e, "n": n, "count": len(rows), "candidates": rows}
    lines = [f"d = {d}, e = {e}, n = {n}: {len(rows)} candidate(s)"]
    for s in seqs:
        lines.append(f"  r = {s.r}  a = {list(s.a)}  binding: {', '.join(s.binding(d)) or '-'}")
    if d == 1:
        note = "on a hyperplane every ACM bundle is a direct sum of line bundles"
        out["note"] = note
        lines.append(f"note: {note}")
    return out, "\n".join(lines), 0


def _named_module(job, name):
    ring = job.ring
    if name == "O":
        return PresentedModule.free(ring, [0]), (-ring.nvars - 1, 2)
    mf, _ = job.factorization()
    ctx = mf.context
    data = bundle_modules(mf, verify=False)
    F = ctx.F
    if name == "OX":
        M = ctx.structure_sheaf()
    elif name == "E":
        M = data.E_module
    elif name == "G":
        M = data.G_module
    elif name == "ExG":
        M = data.EG_module
    elif name == "EvE":
        M = data.end_module
    elif name == "Fbar":
        M = quotient_by_hypersurface(PresentedModule(exterior_square(mf.phi)), F)
    else:
        raise UsageError(f"unknown module {name!r}; choose from {', '.join(MODULE_NAMES)}")
    return M, default_window(ctx.d)


def cmd_cohomology(args):
    if args.module not in MODULE_NAMES:
        raise UsageError(f"unknown module {args.module!r}; choose from {', '.join(MODULE_NAMES)}")
    job = Job(args)
    M, window = _named_module(job, args.module)
    window = job.window or window
    table = cohomology_table(M, window)
    out = header(job, "cohomology")
    out.update(module=args.module, window=list(window), table=table.to_json())
    return out, f"module {args.module}\n" + table.render(), 0


# entry point


def build_parser():
    parser = argparse.ArgumentParser(prog="acmlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, job=True):
        if job:
            p.add_argument("job", nargs="?", help="TOML or JSON job file")
            p.add_argument("--field", help="q or fp:<p> (default fp:32003)")
            p.add_argument("--vars", type=int, help="number of variables n+1")
            p.add_argument("--poly", action="append", help="polynomial, positional (f g h a b c) or NAME=EXPR")
            p.add_argument("--window", help="twist window lo:hi")
        p.add_argument("--out", help="write the JSON report here (atomically)")
        p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("construct", help="Pfaffian construction of a matrix factorization")
    common(p)
    p.set_defaults(func=cmd_construct)
    p = sub.add_parser("verify", help="run the bundle checks")
    common(p)
    p.add_argument("--suite", choices=("full", "quick"), default="full")
    p.add_argument("--expect-split", action="store_true")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("enumerate", help="admissible Betti sequences")
    common(p, job=False)
    p.add_argument("-d", "--d", type=int, required=True)
    p.add_argument("-e", "--e", type=int, default=-1)
    p.add_argument("-n", "--n", type=int, default=4)
    p.set_defaults(func=cmd_enumerate)
    p = sub.add_parser("cohomology", help="cohomology table of a module of the construction")
    common(p)
    p.add_argument("--module", default="E", help=", ".join(MODULE_NAMES))
    p.set_defaults(func=cmd_cohomology)
    return parser


def check_threads():
    raw = os.environ.get("ACMLAB_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"ACMLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"ACMLAB_THREADS must be a positive integer, got {raw!r}")
    return n


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        check_threads()
        out, text, code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        write_atomic(args.out, dump(out))
    if args.format == "json":
        sys.stdout.write(dump(out))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
