"""Command-line surface and local HTTP service.

Subcommands drive the library modules; `serve` exposes a single-session
JSON API for the interactive explorer.  All q-exponents are serialized
as exact fraction strings "a/b"; no floats cross the wire.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .qtorus import QLaurent, degree, to_text
from .seed import Seed, SeedError, mutate_word, freeze_seed, quantize, to_dot
from .words import (
    WordError, SignedWord, cartan_preset, word_indices,
    seed_from_formula, seed_from_trapezoid,
)
from .pattern import (
    TrackedSeed, BudgetError, mutate_tracked, mutate_tracked_word,
    is_green_to_red, DEFAULT_BUDGET,
)
from .freeze import FreezeError, frz
from .dbs import DBS, DBSError, t_system_check, t_system_instances, y_degree
from .bases import BasesError, kl_basis

EXIT_OK = 0
EXIT_MATH = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3

MATH_ERRORS = (SeedError, WordError, FreezeError, DBSError, BasesError,
               ValueError, ArithmeticError)


def _frac_str(a):
    a = Fraction(a)
    return f"{a.numerator}/{a.denominator}" if a.denominator != 1 \
        else str(a.numerator)


def laurent_json(z):
    """Exact JSON form of a quantum Laurent element plus its canonical text."""
    terms = []
    for g in sorted(z.terms, reverse=True):
        coeff = [[_frac_str(alpha), c]
                 for alpha, c in sorted(z.terms[g].terms.items())]
        terms.append({"exp": list(g), "coeff": coeff})
    return {"text": to_text(z), "terms": terms}


def quiver_json(seed):
    """Arrow list for rendering: i -> j with multiplicity b_{ij} > 0."""
    arrows = []
    for k in seed.I_uf:
        for i in seed.I:
            if i == k:
                continue
            bik = seed.b(i, k)
            if bik > 0:
                arrows.append({"from": i, "to": k, "weight": bik})
            elif bik < 0 and i not in seed.I_uf:
                arrows.append({"from": k, "to": i, "weight": -bik})
    return arrows


def parse_word(text, cartan_name):
    letters = [int(x) for x in str(text).replace(" ", "").split(",") if x]
    return SignedWord(letters, cartan_preset(cartan_name))


# ---------------------------------------------------------------------------
# session

class Session:
    """One mutable exploration state behind the CLI serve mode.

    Holds the current tracked seed, the optional word it came from, and
    an undo stack of previous states.
    """

    def __init__(self, budget=DEFAULT_BUDGET):
        self.budget = budget
        self.tracked = None
        self.word = None
        self.dbs = None
        self.undo_stack = []
        self.snapshots = {}

    def load_seed(self, seed):
        self.tracked = TrackedSeed.start(seed, self.budget)
        self.word = None
        self.dbs = None
        self.undo_stack = []

    def load_word(self, word, quantum=True):
        ctx = DBS(word, quantum=quantum, budget=self.budget)
        self.tracked = TrackedSeed.start(ctx.rsd, self.budget)
        self.word = word
        self.dbs = ctx
        self.undo_stack = []

    def _require(self):
        if self.tracked is None:
            raise SessionError("no seed loaded")

    def mutate(self, k):
        self._require()
        self.undo_stack.append(self.tracked)
        self.tracked = mutate_tracked(self.tracked, k)

    def freeze(self, F):
        self._require()
        self.undo_stack.append(self.tracked)
        frozen = freeze_seed(self.tracked.seed, F)
        self.tracked = TrackedSeed.start(frozen, self.budget)

    def undo(self):
        self._require()
        if not self.undo_stack:
            raise SessionError("nothing to undo")
        self.tracked = self.undo_stack.pop()

    def seed_payload(self):
        self._require()
        seed = self.tracked.seed
        layers = None
        if self.word is not None:
            idxs = word_indices(self.word)
            layers = {str(p): idxs.layer[p] for p in range(1, idxs.l + 1)}
        return {
            "seed": seed.to_json(),
            "history": list(self.tracked.history),
            "word": list(self.word.letters) if self.word else None,
            "layers": layers,
            "undo_depth": len(self.undo_stack),
        }

    def var_payload(self, i):
        self._require()
        if i not in self.tracked.vars:
            raise SessionError(f"unknown vertex {i}")
        return laurent_json(self.tracked.vars[i])

    def degrees_payload(self):
        self._require()
        return {str(i): list(self.tracked.var_degree(i))
                for i in self.tracked.seed.I}

    def quiver_payload(self):
        self._require()
        seed = self.tracked.seed
        return {"dot": to_dot(seed), "arrows": quiver_json(seed),
                "frozen": list(seed.I_f)}

    def dbs_degrees_payload(self):
        self._require()
        if self.dbs is None:
            raise SessionError("the session seed did not come from a word")
        ctx = self.dbs
        intervals = [
            {"j": var.j, "k": var.k, "beta": list(var.beta)}
            for var in ctx.interval_variables().values()
        ]
        intervals.sort(key=lambda e: (e["j"], e["k"]))
        return {"intervals": intervals,
                "flat_word": list(ctx.plan.word),
                "sigma": {str(k): v for k, v in ctx.plan.sigma.items()}}

    def dbs_tsystem_payload(self, j, s):
        self._require()
        if self.dbs is None:
            raise SessionError("the session seed did not come from a word")
        rep = t_system_check(self.dbs, j, s)
        return {"j": rep["j"], "s": rep["s"],
                "alpha": _frac_str(rep["alpha"]),
                "alpha_prime": _frac_str(rep["alpha_prime"]),
                "participants": [{"interval": list(iv), "exponent": e}
                                 for iv, e in rep["participants"]],
                "holds": rep["holds"]}


class SessionError(ValueError):
    """Invalid session request (no seed, bad vertex, missing word)."""


# ---------------------------------------------------------------------------
# verification suites

def _suite_kronecker_degrees():
    word = SignedWord((1, 2, 1, 1, 2, 2, 1), cartan_preset("K2"))
    ctx = DBS(word)
    table = {
        (3, 3): {1: -1, 3: 1}, (3, 4): {1: -1, 4: 1}, (3, 7): {1: -1, 7: 1},
        (5, 5): {2: -1, 5: 1}, (5, 6): {2: -1, 6: 1}, (4, 4): {3: -1, 4: 1},
        (4, 7): {3: -1, 7: 1}, (7, 7): {4: -1, 7: 1}, (6, 6): {5: -1, 6: 1},
    }
    cache = ctx.interval_variables()
    details = []
    for key, entries in table.items():
        want = tuple(entries.get(i, 0) for i in range(1, 8))
        got = cache[key].beta
        details.append({"interval": list(key), "expected": list(want),
                        "got": list(got), "ok": got == want})
    g2r = is_green_to_red(ctx.rsd, ctx.plan.word, ctx.plan.sigma)
    details.append({"green_to_red": g2r, "ok": g2r})
    return details


def _suite_y_degree():
    word = SignedWord((1, 2, 1, 1, 2, 2, 1), cartan_preset("K2"))
    f, expansion = y_degree(word, 4)
    want_f = (0, -2, 1, 0, 0, 2, -1)
    ok = (f == want_f
          and expansion == {(4, 4): -1, (7, 7): -1, (5, 6): 2})
    return [{"f": list(f), "expansion": {str(k): v for k, v in expansion.items()},
             "ok": ok}]


def _suite_freezing_example():
    seed = quantize(Seed((1, 2), (1,), (1, 1), [[0], [1]]))
    z = QLaurent.monomial(2, (-1, 0)) + QLaurent.monomial(2, (-1, 1))
    out = frz(z, {1}, seed, (-1, 0))
    ok = out == QLaurent.monomial(2, (-1, 0))
    return [{"frz": to_text(out), "ok": ok}]


def _suite_word_oracle(count=200):
    import random
    rng = random.Random(2024)
    presets = [cartan_preset(n) for n in ("A1", "A2", "A3", "B2", "G2", "K2")]
    fails = 0
    for _ in range(count):
        cart = rng.choice(presets)
        letters = [rng.choice(cart.J) * rng.choice((1, -1))
                   for _ in range(rng.randint(1, 8))]
        word = SignedWord(letters, cart)
        if seed_from_formula(word) != seed_from_trapezoid(word).dsd:
            fails += 1
    return [{"cases": count, "failures": fails, "ok": fails == 0}]


def _suite_tsystems():
    details = []
    for letters, cart in [((1, 2, 1), "A2"), ((1, 2, 1, 1, 2, 2, 1), "K2")]:
        ctx = DBS(SignedWord(letters, cartan_preset(cart)))
        for j, s in t_system_instances(ctx):
            rep = t_system_check(ctx, j, s)
            details.append({"word": list(letters), "j": j, "s": s,
                            "ok": rep["holds"]})
    return details


SUITES = {
    "kronecker-degrees": _suite_kronecker_degrees,
    "y-degree": _suite_y_degree,
    "freezing-example": _suite_freezing_example,
    "word-oracle": _suite_word_oracle,
    "tsystems": _suite_tsystems,
}


# ---------------------------------------------------------------------------
# subcommands

def _load_seed_file(path):
    try:
        with open(path) as fh:
            return Seed.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"cannot read seed file {path}: {exc}")


class ParseError(ValueError):
    """Bad input file or flag value."""


def cmd_word_seed(args):
    word = parse_word(args.word, args.cartan)
    kind = args.seed_kind
    if kind == "formula":
        seed = seed_from_formula(word)
    else:
        tz = seed_from_trapezoid(word)
        seed = tz.rsd if kind == "rsd" else tz.dsd
    if args.quantize:
        seed = quantize(seed)
    out = to_dot(seed) if args.emit == "dot" else seed.dumps()
    print(out)
    return EXIT_OK


def cmd_mutate(args):
    seed = _load_seed_file(args.seed)
    out = mutate_word(seed, args.at)
    print(to_dot(out) if args.emit == "dot" else out.dumps())
    return EXIT_OK


def cmd_freeze(args):
    seed = _load_seed_file(args.seed)
    out = freeze_seed(seed, args.at)
    print(to_dot(out) if args.emit == "dot" else out.dumps())
    return EXIT_OK


def cmd_dbs(args):
    word = parse_word(args.word, args.cartan)
    ctx = DBS(word)
    session = Session()
    session.load_word(word)
    report = {"plan": {"flat_word": list(ctx.plan.word),
                       "sigma": {str(k): v for k, v in ctx.plan.sigma.items()}},
              "degrees": session.dbs_degrees_payload()["intervals"]}
    if args.tsystem:
        j, s = args.tsystem
        report["tsystem"] = session.dbs_tsystem_payload(j, s)
    print(json.dumps(report, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_kl(args):
    word = parse_word(args.word, args.cartan)
    w = tuple(int(x) for x in args.w.replace(" ", "").split(","))
    element, coeffs = kl_basis(word, w, order=args.order)
    expansion = {
        ",".join(map(str, v)): [[_frac_str(a), c]
                                for a, c in sorted(bv.terms.items())]
        for v, bv in coeffs.items()
    }
    print(json.dumps({"element": to_text(element), "expansion": expansion},
                     indent=1, sort_keys=True))
    return EXIT_OK


def cmd_verify(args):
    if args.suite not in SUITES:
        raise ParseError(f"unknown suite {args.suite!r}; "
                         f"choose from {sorted(SUITES)}")
    details = SUITES[args.suite]()
    failed = sum(1 for d in details if not d.get("ok", False))
    print(json.dumps({"suite": args.suite, "pass": failed == 0,
                      "fail": failed, "details": details},
                     indent=1, sort_keys=True))
    return EXIT_OK if failed == 0 else EXIT_MATH


# ---------------------------------------------------------------------------
# serve mode

def create_app(session=None):
    from fastapi import FastAPI, HTTPException
    from fastapi.responses import JSONResponse

    app = FastAPI(title="qcluster", docs_url=None, redoc_url=None)
    sess = session if session is not None else Session()

    def run(fn):
        try:
            return fn()
        except SessionError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except BudgetError as exc:
            raise HTTPException(status_code=500,
                                detail=f"budget exceeded: {exc}")
        except MATH_ERRORS as exc:
            raise HTTPException(status_code=500, detail=str(exc))

    @app.get("/seed")
    def get_seed():
        return run(sess.seed_payload)

    @app.post("/load")
    def post_load(body: dict):
        def go():
            if "word" in body:
                word = SignedWord(body["word"],
                                  cartan_preset(body.get("cartan", "A2")))
                sess.load_word(word, quantum=body.get("quantum", True))
            elif "seed" in body:
                sess.load_seed(Seed.from_json(body["seed"]))
            else:
                raise SessionError("body must carry 'word' or 'seed'")
            return sess.seed_payload()
        try:
            return run(go)
        except (KeyError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=f"malformed load: {exc}")

    @app.post("/mutate")
    def post_mutate(body: dict):
        def go():
            if "k" not in body:
                raise SessionError("body must carry 'k'")
            sess.mutate(body["k"])
            return sess.seed_payload()
        return run(go)

    @app.post("/undo")
    def post_undo():
        def go():
            sess.undo()
            return sess.seed_payload()
        return run(go)

    @app.post("/freeze")
    def post_freeze(body: dict):
        def go():
            if "F" not in body:
                raise SessionError("body must carry 'F'")
            sess.freeze(body["F"])
            return sess.seed_payload()
        return run(go)

    @app.get("/var/{i}")
    def get_var(i: int):
        return run(lambda: sess.var_payload(i))

    @app.get("/degrees")
    def get_degrees():
        return run(sess.degrees_payload)

    @app.get("/quiver")
    def get_quiver():
        return run(sess.quiver_payload)

    @app.get("/dbs/degrees")
    def get_dbs_degrees():
        return run(sess.dbs_degrees_payload)

    @app.post("/dbs/tsystem")
    def post_tsystem(body: dict):
        def go():
            if "j" not in body or "s" not in body:
                raise SessionError("body must carry 'j' and 's'")
            return sess.dbs_tsystem_payload(body["j"], body["s"])
        return run(go)

    @app.exception_handler(Exception)
    def unhandled(request, exc):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    return app


def cmd_serve(args):
    import uvicorn
    app = create_app()
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def build_parser():
    p = argparse.ArgumentParser(prog="qcluster",
                                description="exact quantum cluster algebra tool")
    sub = p.add_subparsers(dest="command", required=True)

    ws = sub.add_parser("word-seed", help="seed of a signed word")
    ws.add_argument("--word", required=True)
    ws.add_argument("--cartan", default="A2")
    ws.add_argument("--seed-kind", choices=("rsd", "dsd", "formula"),
                    default="rsd")
    ws.add_argument("--quantize", action="store_true")
    ws.add_argument("--emit", choices=("json", "dot"), default="json")
    ws.set_defaults(func=cmd_word_seed)

    mu = sub.add_parser("mutate", help="mutate a seed file")
    mu.add_argument("--seed", required=True)
    mu.add_argument("--at", type=int, action="append", required=True)
    mu.add_argument("--emit", choices=("json", "dot"), default="json")
    mu.set_defaults(func=cmd_mutate)

    fr = sub.add_parser("freeze", help="freeze unfrozen vertices of a seed file")
    fr.add_argument("--seed", required=True)
    fr.add_argument("--at", type=int, action="append", required=True)
    fr.add_argument("--emit", choices=("json", "dot"), default="json")
    fr.set_defaults(func=cmd_freeze)

    db = sub.add_parser("dbs", help="interval-variable report for a word")
    db.add_argument("--word", required=True)
    db.add_argument("--cartan", default="A2")
    db.add_argument("--tsystem", type=int, nargs=2, metavar=("J", "S"))
    db.set_defaults(func=cmd_dbs)

    kl = sub.add_parser("kl", help="bar-invariant basis element")
    kl.add_argument("--word", required=True)
    kl.add_argument("--cartan", default="A2")
    kl.add_argument("--w", required=True)
    kl.add_argument("--order", choices=("rev", "lex"), default="rev")
    kl.set_defaults(func=cmd_kl)

    vf = sub.add_parser("verify", help="run a named verification suite")
    vf.add_argument("--suite", required=True)
    vf.set_defaults(func=cmd_verify)

    sv = sub.add_parser("serve", help="local JSON API for the explorer")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8787)
    sv.set_defaults(func=cmd_serve)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except MATH_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
