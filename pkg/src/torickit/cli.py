"""Command-line front end.

Every invocation prints one JSON report on stdout (one per line in batch
mode). Exit codes: 0 computed and all asserted properties hold, 1 a
theorem-backed property failed, 2 invalid input or hypothesis violation.
"""

from __future__ import annotations

import argparse
import hashlib
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from . import classes, fan as fans, generators, morphism, recognize
from .documents import (
    DocumentError,
    dumps,
    fan_from_doc,
    fan_to_doc,
    morphism_from_doc,
    parse_json,
)
from .errors import HypothesisError
from .exactla import det

OK, ALARM, INVALID = 0, 1, 2


class Report:
    def __init__(self, command: str, digest: str):
        self.command = command
        self.digest = digest
        self.results: dict = {}
        self.diagnostics: list[str] = []
        self.exit_code = OK

    def fail(self, code: int, message: str) -> None:
        self.diagnostics.append(message)
        self.exit_code = max(self.exit_code, code)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.digest,
            "results": self.results,
            "diagnostics": self.diagnostics,
            "exit_code": self.exit_code,
        }


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _digest(texts: list[str]) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()


# -- command bodies --------------------------------------------------------

def _analyze(rep: Report, f: fans.Fan) -> None:
    v = fans.validate_fan(f)
    rep.results["valid"] = v.valid
    rep.results["issues"] = [list(i) for i in v.issues]
    if not v.valid:
        rep.fail(INVALID, "fan is not valid")
        return
    simplicial = fans.is_simplicial(f)
    complete = fans.is_complete(f)
    rep.results.update(
        rank=f.dim,
        ray_count=len(f.rays),
        simplicial=simplicial,
        smooth=fans.is_smooth(f),
        complete=complete,
    )
    try:
        free, torsion = classes.divisor_class_group(f)
        rep.results["class_group"] = {"free_rank": free, "torsion": torsion}
        rep.results["picard_rank"] = free if rep.results["smooth"] else None
    except HypothesisError as exc:
        rep.results["class_group"] = None
        rep.results["picard_rank"] = None
        rep.diagnostics.append(str(exc))
    if complete and simplicial:
        cert = recognize.is_projective(f)
        rep.results["projective"] = cert is not None
        rep.results["certificate"] = cert.as_dict() if cert else None
    else:
        rep.results["projective"] = None
        rep.diagnostics.append("projectivity test needs a complete simplicial fan")


def _sequences(rep: Report, f: fans.Fan) -> None:
    if not fans.validate_fan(f).valid:
        rep.fail(INVALID, "fan is not valid")
        return
    if not fans.is_complete(f):
        rep.fail(INVALID, "sequences need a complete fan")
        return
    seq = classes.verify_sequences(f)
    rep.results["sequence_report"] = seq.as_dict()
    smooth = fans.is_smooth(f)
    if smooth:
        rep.results["euler_jaczewski_summands"] = [
            list(c) for c in classes.euler_jaczewski_summands(f)
        ]
    if not seq.exact:
        rep.fail(ALARM, "sequence inexact: " + "; ".join(seq.failures))
    elif smooth and seq.class_torsion:
        rep.fail(ALARM, "torsion in Pic of a smooth complete fan")


def _recognize(rep: Report, f: fans.Fan) -> None:
    if not fans.validate_fan(f).valid:
        rep.fail(INVALID, "fan is not valid")
        return
    w = recognize.is_projective_space(f)
    rep.results["projective_space"] = w is not None
    rep.results["witness"] = w.matrix.tolist() if w else None
    if not fans.is_complete(f):
        rep.results["product"] = None
        rep.diagnostics.append("product search needs a complete fan")
        return
    try:
        split = recognize.is_product(f)
    except HypothesisError as exc:
        rep.fail(INVALID, str(exc))
        return
    rep.results["product"] = (
        {
            "parts": [list(p) for p in split.parts],
            "bases": [[list(v) for v in b] for b in split.bases],
            "factors": [fan_to_doc(x) for x in split.factors],
        }
        if split
        else None
    )


def _resolve(rep: Report, f: fans.Fan) -> None:
    if not fans.validate_fan(f).valid:
        rep.fail(INVALID, "fan is not valid")
        return
    history: list[list[int]] = []
    out = fans.resolve(f, history)
    rep.results["fan"] = fan_to_doc(out)
    rep.results["added_rays"] = [list(r) for r in out.rays if r not in set(f.rays)]
    rep.results["multiplicity_history"] = history
    if not fans.is_smooth(out) or not fans.refines(out, f):
        rep.fail(ALARM, "resolution output is not a smooth refinement")


def _morphism(rep: Report, m: morphism.ToricMorphism) -> None:
    for name, f in (("source", m.source), ("target", m.target)):
        if not fans.validate_fan(f).valid:
            rep.fail(INVALID, f"{name} fan is not valid")
            return
    comp = morphism.check_compatibility(m)
    rep.results["compatible"] = comp.compatible
    if not comp:
        rep.results["offending_cone"] = comp.offending_cone
        rep.fail(INVALID, f"source cone {comp.offending_cone} maps into no target cone")
        return
    try:
        finite, index = morphism.is_generically_finite(m)
        J_rank = morphism.J_of(m, "rank")
    except HypothesisError as exc:
        rep.fail(INVALID, str(exc))
        return
    rep.results["generically_finite"] = finite
    rep.results["index"] = index
    rep.results["J"] = J_rank
    if not finite:
        rep.diagnostics.append("J-spanning check and Stein factorization need a generically finite map")
        return
    if morphism.J_of(m, "fast") != J_rank:
        rep.fail(ALARM, "fast-path J disagrees with the rank formula")
    ok = morphism.lemma1_check(m)
    rep.results["lemma1"] = ok
    if not ok:
        rep.fail(ALARM, "counterexample alarm: rays in J do not span N")
    connected, finite_part = morphism.stein_factor(m)
    rep.results["stein"] = {
        "middle_fan": fan_to_doc(connected.target),
        "finite_index": abs(det(finite_part.matrix)),
    }
    if set(connected.target.rays) != {m.source.rays[i] for i in J_rank}:
        rep.fail(ALARM, "rays of the Stein middle fan differ from J")


def _theorem1(rep: Report, m: morphism.ToricMorphism) -> None:
    for name, f in (("source", m.source), ("target", m.target)):
        if not fans.validate_fan(f).valid:
            rep.fail(INVALID, f"{name} fan is not valid")
            return
    try:
        v = recognize.theorem1_toric_verify(m)
    except HypothesisError as exc:
        rep.results["verdict"] = "hypothesis violated"
        rep.fail(INVALID, str(exc))
        return
    rep.results["verdict"] = v.verdict
    rep.results.update(v.details)
    if not v.confirmed:
        rep.fail(ALARM, "counterexample alarm: target is not projective space")


def _theorem2(rep: Report, f: morphism.ToricMorphism, g: morphism.ToricMorphism) -> None:
    try:
        v = recognize.theorem2_toric_verify(f.source, f, g)
    except HypothesisError as exc:
        rep.results["verdict"] = "hypothesis violated"
        rep.fail(INVALID, str(exc))
        return
    rep.results["verdict"] = v.verdict
    rep.results.update(v.details)
    if not v.confirmed:
        rep.fail(ALARM, "no fiber-product witness for a toric double bundle")


FAN_COMMANDS: dict[str, Callable[[Report, fans.Fan], None]] = {
    "analyze": _analyze,
    "sequences": _sequences,
    "recognize": _recognize,
    "resolve": _resolve,
}
MORPHISM_COMMANDS = {"morphism": _morphism, "theorem1": _theorem1}


def _run_one(command: str, path: str, text: str | None = None) -> dict:
    if text is None:
        try:
            text = _read(path)
        except OSError as exc:
            rep = Report(command, _digest([]))
            rep.fail(INVALID, f"{path}: {exc.strerror}")
            return rep.as_dict()
    rep = Report(command, _digest([text]))
    try:
        doc = parse_json(text, path)
        if command in FAN_COMMANDS:
            FAN_COMMANDS[command](rep, fan_from_doc(doc, path))
        else:
            MORPHISM_COMMANDS[command](rep, morphism_from_doc(doc, path))
    except DocumentError as exc:
        rep.fail(INVALID, str(exc))
    except fans.FanError as exc:
        rep.fail(INVALID, str(exc))
    return rep.as_dict()


def _construct(args) -> dict:
    texts: list[str] = []

    def load_fan(path):
        t = _read(path)
        texts.append(t)
        return fan_from_doc(parse_json(t, path), path)

    def load_morphism(path):
        t = _read(path)
        texts.append(t)
        return morphism_from_doc(parse_json(t, path), path)

    kind, params = args.kind, args.params
    rep_results: dict = {}
    diagnostics: list[str] = []
    code = OK
    try:
        if kind == "projective-space":
            out = fans.projective_space_fan(int(params[0]))
        elif kind == "hirzebruch":
            out = fans.hirzebruch_fan(int(params[0]))
        elif kind == "product":
            out = fans.product_fan(load_fan(params[0]), load_fan(params[1]))
        elif kind == "star-subdivision":
            out = fans.star_subdivision(load_fan(params[0]), _ints(args.vector))
        elif kind == "split-bundle":
            out = fans.projectivized_split_bundle_fan(
                load_fan(params[0]), [_ints(t) for t in args.twist]
            )
        elif kind == "fiber-product":
            out = morphism.fiber_product_fan(load_morphism(params[0]), load_morphism(params[1]))
        elif kind == "blowup-chain":
            out = generators.blowup_chain(int(params[0]), args.steps, args.seed)
        elif kind == "random-singular":
            out = generators.random_singular_fan(int(params[0]), random.Random(args.seed))
        else:
            raise DocumentError("kind", f"unknown construction {kind!r}")
        rep_results["fan"] = fan_to_doc(out)
    except (DocumentError, fans.FanError, IndexError, ValueError, OSError) as exc:
        diagnostics.append(str(exc) or "missing parameter")
        code = INVALID
    return {
        "command": "construct",
        "input_digest": _digest(texts + [kind] + list(params)),
        "results": rep_results,
        "diagnostics": diagnostics,
        "exit_code": code,
    }


def _ints(text: str | None) -> list[int]:
    if text is None:
        raise DocumentError("--vector", "required")
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise DocumentError("vector", f"cannot parse {text!r} as integers") from None


def _theorem2_cmd(args) -> dict:
    try:
        ta, tb = _read(args.first), _read(args.second)
    except OSError as exc:
        rep = Report("theorem2", _digest([]))
        rep.fail(INVALID, f"{exc.filename}: {exc.strerror}")
        return rep.as_dict()
    rep = Report("theorem2", _digest([ta, tb]))
    try:
        f = morphism_from_doc(parse_json(ta, args.first), args.first)
        g = morphism_from_doc(parse_json(tb, args.second), args.second)
        _theorem2(rep, f, g)
    except (DocumentError, fans.FanError) as exc:
        rep.fail(INVALID, str(exc))
    return rep.as_dict()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torickit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in list(FAN_COMMANDS) + list(MORPHISM_COMMANDS):
        s = sub.add_parser(name)
        s.add_argument("inputs", nargs="*", default=["-"], help="document paths, '-' for stdin")
        s.add_argument("--jobs", type=int, default=1, help="parallel workers in batch mode")
    c = sub.add_parser("construct")
    c.add_argument("kind", choices=[
        "projective-space", "hirzebruch", "product", "star-subdivision",
        "split-bundle", "fiber-product", "blowup-chain", "random-singular",
    ])
    c.add_argument("params", nargs="*")
    c.add_argument("--vector", help="comma-separated lattice vector")
    c.add_argument("--twist", action="append", default=[], help="comma-separated divisor coefficients")
    c.add_argument("--steps", type=int, default=3)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--raw", action="store_true", help="print only the fan document")
    t = sub.add_parser("theorem2")
    t.add_argument("first", help="morphism document X -> Y")
    t.add_argument("second", help="morphism document X -> Z")
    return p


def _batch(command: str, paths: list[str], jobs: int) -> list[dict]:
    if jobs <= 1 or len(paths) == 1:
        return [_run_one(command, p) for p in paths]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, [command] * len(paths), paths))


def run(argv: list[str] | None = None) -> tuple[list[dict], bool]:
    """Parse arguments and compute reports; returns (reports, raw-output flag)."""
    args = build_parser().parse_args(argv)
    if args.command == "construct":
        return [_construct(args)], args.raw
    if args.command == "theorem2":
        return [_theorem2_cmd(args)], False
    return _batch(args.command, args.inputs, args.jobs), False


def main(argv: list[str] | None = None) -> int:
    reports, raw = run(argv)
    for r in reports:
        if raw and r["exit_code"] == OK:
            print(dumps(r["results"]["fan"]))
        else:
            print(dumps(r))
    return max(r["exit_code"] for r in reports)


if __name__ == "__main__":
    sys.exit(main())
