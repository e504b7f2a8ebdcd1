"""Command-line front end: instance strings, suite orchestration and JSON output."""

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from .basering import Integers, Poly, parse_ring, parse_ring_prefix
from .errors import BuildError, ParseError, VrxError
from .exactnum import binom, check_binomial_identities
from .hsderiv import (CommHSVertexRing, PolyCarrier, check_hs_property, check_inverse_series,
                      check_iterative, check_power_rule, divided_power_hs, recover_hs_comm,
                      scalar_carrier, trivial_hs)
from .report import SCHEMA_VERSION, CheckReport, timed
from .virasoro import (VirasoroRing, check_dm_canonical, check_dm_power, check_l0_grading,
                       graded_dimensions, structure_constants)

DEFAULT_SEED = 0
DEFAULT_CUTOFF = 6
DEFAULT_SUITES = ("vacuum", "jacobi", "commutator", "associator", "skew", "modeshift", "tc",
                  "locality", "hs", "taylor")


# -- instance strings ----------------------------------------------------------------

@dataclass
class InstanceSpec:
    """Parsed instance string; ``str()`` gives back the canonical form."""

    kind: str
    ring: object = None
    params: dict = field(default_factory=dict)
    children: tuple = ()

    def __str__(self):
        if self.kind in ("dsum", "tensor"):
            inner = ",".join(str(c) for c in self.children)
            cap = f":cap={self.params['cap']}" if "cap" in self.params else ""
            return f"{self.kind}({inner}){cap}"
        if self.kind == "comm":
            return f"comm:{self._ring_str()}"
        if self.kind == "commhs":
            return f"commhs:{self.ring}:deg={self.params['deg']}"
        out = f"virasoro:{self.ring}:{self.ring.to_str(self.params['cprime'])}"
        if "lift" in self.params:
            out += f":lift={self.params['lift']}"
        if self.params.get("native"):
            out += ":native"
        if "N" in self.params:
            out += f":N={self.params['N']}"
        return out

    def _ring_str(self):
        if "deg" in self.params:
            return f"{self.ring}:deg={self.params['deg']}"
        return str(self.ring)


_INT = re.compile(r"\d+")


class _Parser:
    def __init__(self, s):
        self.s = s
        self.pos = 0

    def error(self, msg, pos=None):
        raise ParseError(msg, self.pos if pos is None else pos)

    def expect(self, tok):
        if not self.s.startswith(tok, self.pos):
            self.error(f"expected {tok!r}")
        self.pos += len(tok)

    def accept(self, tok):
        if self.s.startswith(tok, self.pos):
            self.pos += len(tok)
            return True
        return False

    def integer(self):
        m = _INT.match(self.s, self.pos)
        if not m:
            self.error("expected a nonnegative integer")
        self.pos = m.end()
        return int(m.group())

    def ring(self):
        R, self.pos = parse_ring_prefix(self.s, self.pos)
        return R

    def instance(self):
        for kind in ("dsum", "tensor"):
            if self.accept(kind + "("):
                a = self.instance()
                self.expect(",")
                b = self.instance()
                self.expect(")")
                params = {}
                if self.accept(":cap="):
                    params["cap"] = self.integer()
                return InstanceSpec(kind, None, params, (a, b))
        if self.accept("commhs:"):
            start = self.pos
            R = self.ring()
            if not isinstance(R, Poly):
                self.error("commhs needs a polynomial ring poly:<base>:<var>", start)
            self.expect(":deg=")
            return InstanceSpec("commhs", R, {"deg": self.integer()})
        if self.accept("comm:"):
            R = self.ring()
            params = {}
            if isinstance(R, Poly):
                self.expect(":deg=")
                params["deg"] = self.integer()
            return InstanceSpec("comm", R, params)
        if self.accept("virasoro:"):
            R = self.ring()
            self.expect(":")
            start = self.pos
            try:
                c, self.pos = R.parse_element_prefix(self.s, self.pos)
            except ParseError as exc:
                raise ParseError("expected the quasicentral charge", start) from exc
            params = {"cprime": c}
            while self.accept(":"):
                if self.accept("lift="):
                    params["lift"] = self.integer()
                elif self.accept("native"):
                    params["native"] = True
                elif self.accept("N="):
                    params["N"] = self.integer()
                elif _INT.match(self.s, self.pos):
                    params["lift"] = self.integer()
                else:
                    self.error("expected lift=, native or N=")
            return InstanceSpec("virasoro", R, params)
        self.error("expected comm:, commhs:, virasoro:, dsum( or tensor(")


def parse_instance(s):
    """Parse an instance string; ParseError carries the failing position."""
    p = _Parser(s.strip())
    spec = p.instance()
    if p.pos != len(p.s):
        p.error("trailing input")
    return spec


def build_instance(spec, cutoff=None):
    """Materialize a vertex ring from an InstanceSpec (or its string)."""
    from .structure import direct_sum, tensor_product

    if isinstance(spec, str):
        spec = parse_instance(spec)
    N = DEFAULT_CUTOFF if cutoff is None else cutoff
    try:
        if spec.kind == "comm":
            R = spec.ring
            if isinstance(R, Poly):
                car = PolyCarrier(R.base, R.var, spec.params["deg"])
                return CommHSVertexRing(car, trivial_hs(car, spec.params["deg"]))
            car = scalar_carrier(R)
            return CommHSVertexRing(car, trivial_hs(car, 0))
        if spec.kind == "commhs":
            R = spec.ring
            d = spec.params["deg"]
            car = PolyCarrier(R.base, R.var, d)
            return CommHSVertexRing(car, divided_power_hs(car, d))
        if spec.kind == "virasoro":
            p = spec.params
            return VirasoroRing(spec.ring, p["cprime"], p.get("N", N), lift=p.get("lift"),
                                native=p.get("native", False))
        a, b = (build_instance(c, cutoff) for c in spec.children)
        if spec.kind == "dsum":
            return direct_sum(a, b)
        return tensor_product(a, b, spec.params.get("cap"))
    except ParseError:
        raise
    except (VrxError, ValueError) as exc:
        raise BuildError(f"cannot build {spec}: {exc}") from exc


# -- suites ---------------------------------------------------------------------------

def _suite_fn(name):
    from .fields import taylor_suite
    from .vertexcore import SUITES

    if name == "taylor":
        return lambda V, mw, bound: taylor_suite(V, mw, bound)
    if name == "locality":
        return lambda V, mw, bound: SUITES["locality"](V, min(mw, 4) if mw is not None else 4,
                                                       box=bound)
    if name not in SUITES:
        raise ParseError(f"unknown suite {name!r}", 0)
    return SUITES[name]


def run_suite(spec, suites=DEFAULT_SUITES, max_weight=None, bound=4, cutoff=None):
    """Reports in declaration order for the named suites on one instance."""
    V = build_instance(spec, cutoff)
    mw = V.hi if max_weight is None else max_weight
    out = []
    for name in suites:
        fn = _suite_fn(name)
        rep = CheckReport(name, V.spec)
        with timed(rep):
            r = fn(V, mw, bound)
        r.wall_time = rep.wall_time
        out.append(r)
    return V, out


# -- output ---------------------------------------------------------------------------

def _emit(args, payload, lines=None):
    payload = dict(payload)
    payload["schemaVersion"] = SCHEMA_VERSION
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.json or not lines:
        print(text)
    else:
        print("\n".join(lines))


def _status(reports):
    return 0 if all(r.ok for r in reports) else 1


# -- subcommands ----------------------------------------------------------------------

def cmd_binom(args):
    if args.check_identities:
        r = args.range
        reps = check_binomial_identities(r, r, r)
        _emit(args, {"identities": [x.to_json() for x in reps]},
              [f"{'PASS' if x.passed else 'FAIL'} {x.identity} checked={x.checked}" for x in reps])
        return 0 if all(x.passed for x in reps) else 1
    if args.m is None or args.n is None:
        print("binom needs <m> <n> or --check-identities", file=sys.stderr)
        return 2
    value = binom(args.m, args.n)
    if args.json or args.out:
        _emit(args, {"m": args.m, "n": args.n, "value": str(value)}, [str(value)])
    else:
        print(value)
    return 0


def cmd_hs(args):
    base = parse_ring(args.base)
    cutoff = args.degree if args.cutoff is None else args.cutoff
    if not 0 <= cutoff <= args.degree:
        raise BuildError(f"--cutoff {cutoff} must lie between 0 and --degree {args.degree}")
    car = PolyCarrier(base, "x", args.degree)
    F = divided_power_hs(car, cutoff)
    V = CommHSVertexRing(car, F)
    samples = [{lab: base.one()} for lab in car.labels]
    reps = [
        check_hs_property(F, car.mul_states, samples, instance=V.spec),
        check_iterative(F, samples, instance=V.spec),
        check_inverse_series(F, samples, instance=V.spec),
        check_power_rule(F, samples, instance=V.spec),
    ]
    _, G = recover_hs_comm(V)
    agree = CheckReport("recovered_hs", V.spec)
    for m in range(min(F.cutoff, G.cutoff) + 1):
        for s in samples:
            agree.attempt(lambda m=m, s=s: F.apply(m, s) == G.apply(m, s), {"m": m})
    reps.append(agree)
    _emit(args, {"instance": V.spec, "reports": [r.to_json() for r in reps]},
          [r.line() for r in reps])
    return _status(reps)


def cmd_verify(args):
    suites = tuple(s.strip() for s in args.suite.split(",") if s.strip()) if args.suite else DEFAULT_SUITES
    if args.window != "auto":
        print("only --window auto is supported", file=sys.stderr)
        return 2
    V, reps = run_suite(args.instance, suites, args.max_weight, args.bound, args.cutoff)
    _emit(args, {"instance": V.spec, "reports": [r.to_json() for r in reps]},
          [r.line() for r in reps])
    return _status(reps)


def _cprime(base, s):
    c, end = base.parse_element_prefix(s, 0)
    if end != len(s):
        raise ParseError("trailing input in --cprime", end)
    return c


def cmd_virasoro(args):
    base = parse_ring(args.base)
    N = args.max_weight if args.max_weight is not None else 8
    V = VirasoroRing(base, _cprime(base, args.cprime), N, lift=args.lift, native=args.native)
    basis = {str(w): [V.label_str(l) for l in V.labels(w)] for w in V.weights()}
    sc = structure_constants(V, N)
    consts = [[V.label_str(u), n, V.label_str(v), V.state_json(r)]
              for (u, n, v), r in sorted(sc.items(), key=lambda kv: (
                  V.label_index()[kv[0][0]], kv[0][1], V.label_index()[kv[0][2]]))]
    dm = {}
    for lab in V.all_labels():
        for m in range(1, N - V.weight(lab) + 1):
            dm.setdefault(V.label_str(lab), []).append([m, V.state_json(V.D(m, {lab: base.one()}))])
    reps = [check_l0_grading(V), check_dm_canonical(V)]
    if isinstance(base, Integers):
        reps.append(check_dm_power(V, min(6, N)))
    payload = {"instance": V.spec, "basisByWeight": basis, "dimensions": graded_dimensions(V),
               "structureConstants": consts, "dmTables": dm,
               "checksRun": [r.to_json() for r in reps]}
    _emit(args, payload, [f"{V.spec} dims={graded_dimensions(V)} constants={len(consts)}"]
          + [r.line() for r in reps])
    return _status(reps)


def cmd_reconstruct(args):
    from .fields import reconstruct_from_generators
    from .virasoro import OMEGA

    V = build_instance(args.instance, args.cutoff)
    if isinstance(V, VirasoroRing):
        gens = [{OMEGA: V.base.one()}]
    elif isinstance(V, CommHSVertexRing) and V.carrier.deg > 0:
        gens = [{1: V.base.one()}]
    else:
        gens = []
    _, rep = reconstruct_from_generators(V, gens, args.max_weight)
    _emit(args, {"instance": V.spec, "report": rep.to_json()}, [rep.line()])
    return _status([rep])


def cmd_structure(args):
    from . import structure as st
    from .virasoro import OMEGA, check_virasoro_vector

    insts = args.instance or []
    if not insts:
        print("structure needs --instance", file=sys.stderr)
        return 2
    op = args.op
    reps = []
    if op in ("tensor", "dsum"):
        if len(insts) == 1:
            V = build_instance(insts[0], args.cutoff)
        elif len(insts) == 2:
            a, b = (build_instance(s, args.cutoff) for s in insts)
            V = st.tensor_product(a, b) if op == "tensor" else st.direct_sum(a, b)
        else:
            print(f"{op} takes one composite or two --instance flags", file=sys.stderr)
            return 2
        payload = {"instance": V.spec, "dimensions": {str(w): d for w, d in V.dims().items()}}
        if isinstance(V, st.TensorProduct):
            reps.append(st.check_tensor_hs(V, args.max_weight))
            if isinstance(V.U, VirasoroRing) and isinstance(V.V, VirasoroRing):
                one = V.base.one()
                nu = {**V.pure(V.U.vacuum, {OMEGA: one}), **V.pure({OMEGA: one}, V.V.vacuum)}
                c2 = V.base.add(V.U.cprime, V.V.cprime)
                reps.append(check_virasoro_vector(V, nu, c2, max_weight=min(V.hi, 4), box=3))
        else:
            center = st.center_truncated(V)
            ids = st.find_idempotents(V, center=center) if V.base.finite else []
            payload["idempotents"] = [V.state_json(e) for e in ids]
            for k in (0, 1):
                e = V.component_vacuum(k)
                A, B, rep = st.decompose_by_idempotent(V, e)
                reps.append(rep)
                reps.append(st.check_structure_constants_equal(
                    A, V.parts[k], lambda lab, k=k: (k, lab), args.max_weight))
        payload["reports"] = [r.to_json() for r in reps]
        _emit(args, payload, [r.line() for r in reps])
        return _status(reps)
    V = build_instance(insts[0], args.cutoff)
    center = st.center_truncated(V, args.max_weight)
    payload = {"instance": V.spec}
    if op == "center":
        payload["center"] = center.to_json()
        payload["characteristic"] = st.characteristic_of_vertex_ring(V)
        reps.append(center.report)
        reps.append(st.check_endo_iso(V, center, min(V.hi, args.max_weight or 4)))
    elif op == "idempotents":
        ids = st.find_idempotents(V, center=center)
        payload["idempotents"] = [V.state_json(e) for e in ids]
        payload["count"] = len(ids)
    elif op == "units":
        units = []
        info = center.by_weight.get(0)
        if info is not None and V.base.finite:
            for vec in info["module"].elements():
                a = st._state(V, info["labels"], vec)
                b = st.find_unit_inverse(V, a, center) if a else None
                if b is not None:
                    rep = st.check_unit(V, a, b, center)
                    reps.append(rep)
                    units.append([V.state_json(a), V.state_json(b)])
        payload["units"] = units
    elif op == "characteristic":
        payload["characteristic"] = st.characteristic_of_vertex_ring(V)
    else:
        print(f"unknown op {op!r}", file=sys.stderr)
        return 2
    payload["reports"] = [r.to_json() for r in reps]
    _emit(args, payload, [json.dumps({k: v for k, v in payload.items() if k != "reports"},
                                     sort_keys=True)] + [r.line() for r in reps])
    return _status(reps)


def cmd_pierce(args):
    from . import pierce as pc

    V = build_instance(args.instance, args.cutoff)
    bundle = pc.build_pierce_bundle(V)
    iso = pc.check_global_sections_iso(V, bundle, args.max_weight)
    indec = pc.check_stalk_indecomposable(bundle)
    vnr, witness, exhaustive = pc.is_vnr(V, bundle.B)
    stalks = []
    for s in bundle.stalks:
        try:
            simple = pc.is_simple(V, s.ring)[0]
        except VrxError:
            simple = None
        stalks.append({"atom": V.state_json(s.point.atom), "descriptor": s.descriptor,
                       "simple": simple,
                       "indecomposable": len(pc.idempotents_in(V, s.ring)) == 2})
    payload = {"instance": V.spec, "idempotentCount": len(bundle.B),
               "stonePoints": len(bundle.points), "stalks": stalks,
               "vnr": vnr, "vnrExhaustive": exhaustive,
               "vnrWitness": None if witness is None else V.state_json(witness),
               "globalSectionsIso": "pass" if iso.ok else "fail",
               "reports": [iso.to_json(), indec.to_json()]}
    _emit(args, payload, [f"{V.spec}: {len(bundle.B)} idempotents, {len(bundle.points)} points, "
                          f"stalks {[s['descriptor'] for s in stalks]}, vnr={vnr}",
                          iso.line(), indec.line()])
    return _status([iso, indec])


# -- entry point ----------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--max-weight", type=int, default=None)
    common.add_argument("--out", default=None, help="also write the JSON report here")
    common.add_argument("--cutoff", type=int, default=None,
                        help="truncation weight N for Virasoro instances")

    p = argparse.ArgumentParser(prog="vrx", description="Exact computations with vertex rings.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("binom", parents=[common])
    b.add_argument("m", type=int, nargs="?")
    b.add_argument("n", type=int, nargs="?")
    b.add_argument("--check-identities", action="store_true")
    b.add_argument("--range", type=int, default=20)
    b.set_defaults(fn=cmd_binom)

    h = sub.add_parser("hs", parents=[common])
    h.add_argument("action", choices=["demo"])
    h.add_argument("--base", default="z")
    h.add_argument("--degree", type=int, default=12)
    h.set_defaults(fn=cmd_hs)

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--instance", required=True)
    v.add_argument("--suite", default=None)
    v.add_argument("--bound", type=int, default=4)
    v.add_argument("--window", default="auto")
    v.set_defaults(fn=cmd_verify)

    vi = sub.add_parser("virasoro", parents=[common])
    vi.add_argument("action", choices=["build"])
    vi.add_argument("--base", default="z")
    vi.add_argument("--cprime", default="1")
    vi.add_argument("--lift", type=int, default=None)
    vi.add_argument("--native", action="store_true")
    vi.set_defaults(fn=cmd_virasoro)

    r = sub.add_parser("reconstruct", parents=[common])
    r.add_argument("--instance", required=True)
    r.set_defaults(fn=cmd_reconstruct)

    s = sub.add_parser("structure", parents=[common])
    s.add_argument("--instance", action="append")
    s.add_argument("--op", default="center",
                   choices=["center", "idempotents", "units", "characteristic", "tensor", "dsum"])
    s.set_defaults(fn=cmd_structure)

    pc = sub.add_parser("pierce", parents=[common])
    pc.add_argument("--instance", required=True)
    pc.set_defaults(fn=cmd_pierce)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, BuildError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VrxError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
