"""Command-line front end.

Exit codes: 0 for an affirmative result (valid / representable / model found
/ proof ok), 1 for a negative one (counterexample / inseparable / exhausted
/ proof failure), 2 for usage or I/O errors.  ``--json`` switches the report
to a machine-readable document; every report carries the seed.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import arr, choice, falg, laws, pfun, proofchk, term
from . import finder as finder_mod


def _parse_sig(text: str) -> list[str]:
    ops = [s.strip() for s in text.split(",") if s.strip()]
    bad = [op for op in ops if op not in term.OPS]
    if bad:
        raise ValueError(f"unknown operations {bad} (choose from ov,upd,at,mns)")
    if not ops:
        raise ValueError("empty signature")
    return ops


def _load_target(spec: str) -> falg.FiniteAlgebra:
    if spec == "L":
        return falg.builtin_L()
    if spec == "three":
        return falg.builtin_three()
    if spec.startswith("three:"):
        return falg.builtin_three(_parse_sig(spec[len("three:"):]))
    return falg.load(spec)


def _render_env(env: dict) -> str:
    return " ".join(f"{k}={env[k]}" for k in sorted(env, key=term.var_sort_key))


def _emit(args, doc: dict, lines: list[str]) -> None:
    if args.json:
        doc["seed"] = args.seed
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check(args) -> int:
    alg = falg.builtin_three(_parse_sig(args.sig))
    stmt = term.parse(args.law)
    if isinstance(stmt, term.Identity):
        cx = falg.check_identity(alg, stmt)
    elif isinstance(stmt, term.QuasiIdentity):
        cx = falg.check_quasi(alg, stmt)
    else:
        raise ValueError("expected an identity or quasi-identity, got a term")
    doc = {"command": "check", "law": term.render(stmt), "signature": args.sig,
           "valid": cx is None, "counterexample": cx}
    if cx is None:
        _emit(args, doc, ["valid"])
        return 0
    _emit(args, doc, [f"counterexample {_render_env(cx)}"])
    return 1


def _parse_env_bindings(pairs: list[str], as_pfun: bool) -> dict:
    env = {}
    for item in pairs:
        if "=" not in item:
            raise ValueError(f"bad --env binding {item!r} (want name=value)")
        name, value = item.split("=", 1)
        name = name.strip()
        value = value.strip()
        env[name] = pfun.parse_literal(value) if as_pfun else int(value)
    return env


def _cmd_eval(args) -> int:
    t = term.parse_term(args.term)
    if args.model == "pfun":
        env = _parse_env_bindings(args.env, as_pfun=True)
        result = term.evaluate(t, pfun.OPS, env)
        doc = {"command": "eval", "model": "pfun", "term": term.render(t),
               "result": pfun.literal(result)}
        _emit(args, doc, [pfun.literal(result)])
        return 0
    alg = _load_target(args.model)
    env = _parse_env_bindings(args.env, as_pfun=False)
    result = term.evaluate(t, alg.operations(), env)
    doc = {"command": "eval", "model": args.model, "term": term.render(t),
           "result": result}
    _emit(args, doc, [str(result)])
    return 0


def _cmd_synth(args) -> int:
    cf = choice.load(args.cf)
    t = choice.synthesize_update_term(cf, args.pivot)
    if args.simplify:
        t = choice.simplify_update_term(t, cf.universe)
    realized = choice.evaluate_on_generators(t, cf.universe)
    doc = {"command": "synth", "pivot": args.pivot, "term": term.render(t),
           "size": choice.term_size(t), "realizes": choice.to_json(realized)}
    _emit(args, doc, [term.render(t)])
    return 0


def _cmd_free(args) -> int:
    sig = _parse_sig(args.sig)
    if args.count_only and set(sig) == {"upd"}:
        count = choice.count_update_free(args.k)
        doc = {"command": "free", "k": args.k, "signature": sig,
               "count": count, "count_kind": "closed-form"}
        _emit(args, doc, [str(count)])
        return 0
    closure = choice.free_closure(args.k, sig)
    doc = {"command": "free", "k": args.k, "signature": sig,
           "count": len(closure), "count_kind": "enumerated"}
    lines = [str(len(closure))]
    if not args.count_only:
        doc["elements"] = [choice.to_json(cf) for cf in closure]
        lines += [json.dumps(choice.to_json(cf)["map"]) for cf in closure]
    _emit(args, doc, lines)
    return 0


def _cmd_faces(args) -> int:
    a = arr.load(args.arr)
    alg, faces = arr.face_semigroup(a, args.threads)
    doc = {"command": "faces", "count": len(faces),
           "faces": [arr.sign_str(f) for f in faces]}
    lines = [f"{len(faces)} faces: " + " ".join(arr.sign_str(f) for f in faces)]
    if args.table:
        doc["table"] = [list(r) for r in alg.tables["ov"]]
        header = "      " + " ".join(f"{arr.sign_str(f):>{len(faces[0])}}" for f in faces)
        lines.append(header)
        for i, f in enumerate(faces):
            row = " ".join(
                f"{arr.sign_str(faces[v]):>{len(faces[0])}}" for v in alg.tables["ov"][i]
            )
            lines.append(f"{arr.sign_str(f):>5s} {row}")
    code = 0
    if args.check_L:
        pair = falg.rep_check(alg, falg.builtin_L())
        doc["representable_vs_L"] = pair is None
        if pair is None:
            lines.append("representable vs L")
        else:
            doc["inseparable"] = [arr.sign_str(faces[pair[0]]), arr.sign_str(faces[pair[1]])]
            lines.append(
                f"inseparable vs L: {arr.sign_str(faces[pair[0]])}, {arr.sign_str(faces[pair[1]])}"
            )
            code = 1
    _emit(args, doc, lines)
    return code


def _cmd_prove(args) -> int:
    script = proofchk.load_script(args.script)
    failure = proofchk.check_proof(script, laws.load_library())
    concl = term.render(script.conclusion())
    doc = {"command": "prove", "script": args.script, "ok": failure is None,
           "conclusion": concl}
    if failure is None:
        _emit(args, doc, [f"ok: {concl}"])
        return 0
    doc["failure"] = {"step": failure.step, "reason": failure.reason}
    _emit(args, doc, [f"failed at {failure}"])
    return 1


def _cmd_findmodel(args) -> int:
    lib = laws.load_law_file(args.axioms)
    bad = [k for k, v in lib.items() if not isinstance(v, term.Identity)]
    if bad:
        raise ValueError(f"axioms must be identities; {bad} are not")
    goal = term.parse(args.goal)
    if not isinstance(goal, (term.Identity, term.QuasiIdentity)):
        raise ValueError("goal must be an identity or quasi-identity")
    result = finder_mod.find_model(list(lib.values()), goal, args.size, args.budget)
    doc = {"command": "findmodel", "status": result.status, "nodes": result.nodes}
    if result.status == finder_mod.MODEL:
        doc["algebra"] = falg.to_json(result.algebra)
        doc["witness"] = result.witness
        _emit(args, doc, [
            f"model of size {args.size} after {result.nodes} nodes",
            json.dumps(falg.to_json(result.algebra)),
            f"witness {_render_env(result.witness)}",
        ])
        return 0
    _emit(args, doc, [result.status])
    return 1


def _cmd_repcheck(args) -> int:
    alg = falg.load(args.alg)
    target = _load_target(args.target)
    pair = falg.rep_check(alg, target)
    doc = {"command": "repcheck", "target": args.target, "representable": pair is None}
    if pair is None:
        _emit(args, doc, ["representable"])
        return 0
    doc["inseparable"] = list(pair)
    _emit(args, doc, [f"inseparable {pair[0]} {pair[1]}"])
    return 1


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ovup",
        description="algebras of partial functions under override and update",
    )
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--seed", type=int, default=0, help="seed recorded in reports")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for parallelisable sweeps (results identical)")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="decide validity over partial functions via the 3-element algebra")
    c.add_argument("--sig", default="ov,upd,at,mns", help="comma-separated signature")
    c.add_argument("law")
    c.set_defaults(fn=_cmd_check)

    c = sub.add_parser("eval", help="evaluate a term in a model")
    c.add_argument("--model", required=True, help="three[:sig] | L | pfun | algebra.json")
    c.add_argument("--env", action="append", default=[], metavar="VAR=VALUE",
                   help="variable binding; {a:1}-literals for the pfun model")
    c.add_argument("term")
    c.set_defaults(fn=_cmd_eval)

    c = sub.add_parser("synth", help="update-term synthesis from a choice function")
    c.add_argument("--cf", required=True, help="choice-function JSON file")
    c.add_argument("--pivot", type=int, required=True)
    c.add_argument("--simplify", action="store_true")
    c.set_defaults(fn=_cmd_synth)

    c = sub.add_parser("free", help="free-algebra closure enumeration / count")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--sig", default="upd")
    c.add_argument("--count-only", action="store_true")
    c.set_defaults(fn=_cmd_free)

    c = sub.add_parser("faces", help="hyperplane face enumeration and face semigroup")
    c.add_argument("--arr", required=True, help="arrangement JSON file")
    c.add_argument("--table", action="store_true", help="print the product table")
    c.add_argument("--check-L", action="store_true", help="rep_check against L")
    c.set_defaults(fn=_cmd_faces)

    c = sub.add_parser("prove", help="check a proof script")
    c.add_argument("script")
    c.set_defaults(fn=_cmd_prove)

    c = sub.add_parser("findmodel", help="search for a finite counterexample model")
    c.add_argument("--axioms", required=True, help="law file (id: law per line)")
    c.add_argument("--goal", required=True)
    c.add_argument("--size", type=int, required=True)
    c.add_argument("--budget", type=int, default=200_000)
    c.set_defaults(fn=_cmd_findmodel)

    c = sub.add_parser("repcheck", help="separating-homomorphism representability test")
    c.add_argument("--alg", required=True, help="algebra JSON file")
    c.add_argument("--target", required=True, help="three[:sig] | L | algebra.json")
    c.set_defaults(fn=_cmd_repcheck)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.fn(args)
    except (ValueError, OSError, term.ParseError, term.EvalError,
            proofchk.ScriptError, falg.SweepBudgetError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
