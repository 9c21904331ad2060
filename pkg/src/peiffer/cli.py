"""Command-line front end: validate objects, run the checkers, generate examples.

Exit codes: 0 when every check passes, 1 for malformed input or refused
requests, 2 when a validator or checker reports a violation.  Reports are
deterministic for a given input, seed and flag set; the seed is echoed in
every report.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .algebras import SimplicialOperadAlgebra, comm_collapse_rhs, lift_all, symmetric_example, theorem1_sides
from .dold_kan import build_K, random_chain_complex, random_simplicial_module, roundtrip_check
from .groups import FiniteGroup, GroupError, GroupHom, cyclic_group, symmetric_group
from .modules import ChainComplex, Ring, SimplicialModule, ValidationError
from .nearring import expand_degeneracy_expression, express_by_degeneracies, phi_check
from .operads import OPERADS, TruncatedOperad
from .sgroups import (
    CrossedModuleError,
    TruncatedSimplicialGroup,
    check_crossed_module,
    crossed_module_build,
    moore_subgroup,
    pc2_decompose,
    pc2_recompose,
    peiffer_certificate,
    theorem2_check,
)

EXIT_OK, EXIT_MALFORMED, EXIT_VIOLATION = 0, 1, 2


class MalformedInput(Exception):
    """Input that cannot be parsed or that asks for something out of range."""


# ---------------------------------------------------------------- reports


@dataclass
class Check:
    name: str
    ok: bool
    verdict: str
    details: dict = field(default_factory=dict)


@dataclass
class Report:
    command: list[str]
    seed: int
    checks: list[Check] = field(default_factory=list)
    error: str | None = None

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_MALFORMED
        return EXIT_OK if all(c.ok for c in self.checks) else EXIT_VIOLATION

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "status": {EXIT_OK: "ok", EXIT_MALFORMED: "malformed", EXIT_VIOLATION: "violation"}[self.exit_code],
            "exit_code": self.exit_code,
            "error": self.error,
            "checks": [{"name": c.name, "ok": c.ok, "verdict": c.verdict, "details": c.details} for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [f"command: {' '.join(self.command)}", f"seed: {self.seed}"]
        if self.error is not None:
            lines.append(f"error: {self.error}")
        for c in self.checks:
            lines.append(f"[{'ok' if c.ok else 'FAIL'}] {c.name}: {c.verdict}")
            for key, value in c.details.items():
                lines.append(f"    {key}: {value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)}")
        lines.append(f"status: {self.to_json()['status']}")
        return "\n".join(lines)


# ---------------------------------------------------------------- loading


def read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedInput(f"{path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict) or "kind" not in data:
        raise MalformedInput(f"{path}: expected a JSON object with a 'kind' field")
    return data


def crossed_module_from_json(data: dict):
    M = FiniteGroup.from_json(data["M"])
    P = FiniteGroup.from_json(data["P"])
    boundary = GroupHom(M, P, data["boundary"], validate=False)
    return M, P, boundary, np.asarray(data["action"], dtype=np.int64)


def crossed_module_to_json(M: FiniteGroup, P: FiniteGroup, boundary: GroupHom, act, name: str) -> dict:
    return {
        "kind": "crossed_module",
        "name": name,
        "M": M.to_json(),
        "P": P.to_json(),
        "boundary": [int(x) for x in boundary.images],
        "action": np.asarray(act).tolist(),
    }


LOADERS: dict[str, Callable[[dict], object]] = {
    "chain_complex": ChainComplex.from_json,
    "simplicial_module": SimplicialModule.from_json,
    "simplicial_group": TruncatedSimplicialGroup.from_json,
    "operad": TruncatedOperad.from_json,
    "operad_algebra": SimplicialOperadAlgebra.from_json,
    "crossed_module": crossed_module_from_json,
}


def load(path: str, kinds: Sequence[str] | None = None) -> tuple[str, object]:
    data = read_json(path)
    kind = data["kind"]
    if kind not in LOADERS or (kinds is not None and kind not in kinds):
        wanted = ", ".join(kinds or LOADERS)
        raise MalformedInput(f"{path}: kind {kind!r} not accepted here (expected {wanted})")
    try:
        return kind, LOADERS[kind](data)
    except GroupError:
        raise
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise MalformedInput(f"{path}: {type(exc).__name__}: {exc}") from exc


def as_simplicial_group(kind: str, obj, top: int) -> TruncatedSimplicialGroup:
    if kind == "crossed_module":
        M, P, bd, act = obj
        return crossed_module_build(M, P, bd, act, top, name="crossed module")
    return obj


def ring_from_args(args) -> Ring:
    if args.ring == "Z":
        return Ring.integers()
    if args.mod is None or args.mod < 2:
        raise MalformedInput("--ring mod needs --mod q with q >= 2")
    return Ring.mod(args.mod)


def parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Ordered map, spread over processes when ``jobs > 1``."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- validate


def _validate_object(kind: str, obj) -> Check:
    if kind == "crossed_module":
        try:
            check_crossed_module(*obj)
        except CrossedModuleError as exc:
            return Check("crossed module axioms", False, f"violation of {exc.axiom}", {"detail": str(exc)})
        return Check("crossed module axioms", True, "valid")
    if kind == "operad_algebra":
        bad = obj.operad.validate() or obj.validate()
    else:
        bad = obj.validate()
    if bad is None:
        return Check(f"{kind} identities", True, "valid")
    detail = bad if isinstance(bad, str) else str(bad)
    return Check(f"{kind} identities", False, "violation", {"identity": detail})


def cmd_validate(args, report: Report) -> None:
    try:
        kind, obj = load(args.path)
    except GroupError as exc:
        report.checks.append(Check("group axioms", False, "violation", {"detail": str(exc)}))
        return
    report.checks.append(_validate_object(kind, obj))


# ---------------------------------------------------------------- check


def _dold_kan_check(X) -> Check:
    w = roundtrip_check(X)
    verdict = "iso verified" if w.ok else "roundtrip failed"
    return Check(f"Dold-Kan roundtrip ({w.kind})", w.ok, verdict, {"squares": w.squares_checked, "failures": w.failures[:5]})


def _theorem1_level(job) -> Check:
    A, m = job
    R = theorem1_sides(A, m)
    details = {
        "lhs": R.lhs.describe(),
        "rhs": R.rhs.describe(),
        "tuple lengths": R.lengths,
        "degeneracies generate": R.hypothesis,
    }
    ok = R.verdict in ("equal", "lhs⊋rhs", "truncated")
    if A.operad.name.startswith("Comm"):
        same = comm_collapse_rhs(A, m) == R.rhs
        details["quadratic collapse agrees"] = same
        ok = ok and same
    tally = lift_all(A, m)
    details["pairing lifts certified"] = f"{tally.certified}/{tally.generators}"
    ok = ok and tally.rate == 1.0
    if R.verdict == "lhs⊋rhs":
        ok = ok and not R.hypothesis
    verdict = R.verdict
    if R.truncated:
        verdict += f" (omitted lengths {R.omitted_lengths})"
    if R.hypothesis is False:
        verdict += ", hypothesis fails"
    return Check(f"boundary formula at m={m}", ok, verdict, details)


def _theorem2_level(job) -> Check:
    G, n = job
    R = theorem2_check(G, n)
    verdict = R.verdict
    if not R.degenerate_generates:
        verdict += ", hypothesis fails"
    ok = R.rhs_in_lhs and R.certificates_ok and (R.verdict == "equal") == R.degenerate_generates
    details = {
        "lhs order": R.lhs.order,
        "rhs order": R.rhs.order,
        "lhs generators": [G.levels[n - 1].labels[g] for g in R.lhs.generators()],
        "certificates": [
            {
                "target": G.levels[n - 1].labels[c.target],
                "letters": [{"I": list(l.I), "J": list(l.J), "u": int(l.u), "v": int(l.v)} for l in c.letters],
                "verified": c.verified,
            }
            for c in R.certificates
        ],
    }
    return Check(f"Peiffer boundary at n={n}", ok, verdict, details)


def _levels(args, top: int, low: int) -> list[int]:
    if args.level is not None:
        if not low <= args.level <= top:
            raise MalformedInput(f"--level must lie in [{low}, {top}]")
        return [args.level]
    return list(range(low, top + 1))


def cmd_check(args, report: Report) -> None:
    if args.kind == "dold-kan":
        if args.path:
            _, X = load(args.path, ["chain_complex", "simplicial_module"])
            report.checks.append(_dold_kan_check(X))
            return
        rng = random.Random(args.seed)
        ring = ring_from_args(args)
        C = random_chain_complex(ring, args.top, 3, rng)
        A = random_simplicial_module(ring, args.top, 3, rng)
        report.checks.append(_dold_kan_check(C))
        report.checks.append(_dold_kan_check(A))
        return
    if not args.path:
        raise MalformedInput(f"check {args.kind} needs an input file")
    if args.kind == "theorem1":
        _, A = load(args.path, ["operad_algebra"])
        jobs = [(A, m) for m in _levels(args, A.top, 2)]
        report.checks.extend(parallel_map(_theorem1_level, jobs, args.jobs))
    else:
        kind, obj = load(args.path, ["simplicial_group", "crossed_module"])
        G = as_simplicial_group(kind, obj, args.top)
        jobs = [(G, n) for n in _levels(args, G.top, 2)]
        report.checks.extend(parallel_map(_theorem2_level, jobs, args.jobs))


# ---------------------------------------------------------------- generate


def _conjugation(P: FiniteGroup) -> np.ndarray:
    T, I = P.table, P.inverse
    p = np.arange(P.order)
    return T[T[p[:, None], p[None, :]], I[p][:, None]]


def preset_crossed_module(name: str):
    Z2 = cyclic_group(2)
    if name == "z2":
        return Z2, Z2, GroupHom.identity(Z2), np.tile(np.arange(2), (2, 1))
    if name == "s3":
        S3 = symmetric_group(3)
        return S3, S3, GroupHom.identity(S3), _conjugation(S3)
    if name == "z4z2":
        Z4 = cyclic_group(4)
        return Z4, Z2, GroupHom(Z4, Z2, np.arange(4) % 2), np.tile(np.arange(4), (2, 1))
    if name == "z3z2":
        Z3 = cyclic_group(3)
        return Z3, Z2, GroupHom(Z3, Z2, np.zeros(3, dtype=np.int64)), np.array([[0, 1, 2], [0, 2, 1]])
    raise MalformedInput(f"unknown crossed-module preset {name!r}")


def _complex_from_args(args, ring: Ring) -> ChainComplex:
    try:
        ranks = [int(x) for x in args.ranks.split(",")]
        mats = json.loads(args.matrices) if args.matrices else [[[0] * ranks[i - 1] for _ in range(ranks[i])] or [[]] for i in range(1, len(ranks))]
        C = ChainComplex.from_matrices(ring, ranks, mats)
    except (ValueError, TypeError, IndexError) as exc:
        raise MalformedInput(f"bad complex: {exc}") from exc
    bad = C.validate()
    if bad is not None:
        raise MalformedInput(f"not a chain complex: {bad}")
    return C


def cmd_generate(args, report: Report) -> dict:
    ring = ring_from_args(args)
    if args.kind == "kc":
        C = _complex_from_args(args, ring)
        A = build_K(C, args.top)
        if sum(level.rank for level in A.levels) > args.rank_cap:
            raise MalformedInput(f"refused: total rank exceeds {args.rank_cap}")
        out = A.to_json()
    elif args.kind == "crossed-module":
        M, P, bd, act = preset_crossed_module(args.preset)
        if args.as_group:
            try:
                out = crossed_module_build(M, P, bd, act, args.top, order_cap=args.order_cap, name=args.preset).to_json()
            except GroupError as exc:
                raise MalformedInput(f"refused: {exc}") from exc
            except ValueError as exc:
                raise MalformedInput(f"refused: {exc}") from exc
        else:
            out = crossed_module_to_json(M, P, bd, act, args.preset)
    elif args.kind == "symmetric-algebra":
        C = _complex_from_args(args, ring)
        if ring.prime is None:
            raise MalformedInput("symmetric algebras need --ring mod with a prime --mod")
        try:
            A = symmetric_example(C, args.cap, args.top, rank_cap=args.rank_cap, operad=OPERADS["comm"](ring, args.arity))
        except ValueError as exc:
            raise MalformedInput(f"refused: {exc}") from exc
        out = A.to_json()
    else:
        rng = random.Random(args.seed)
        out = random_chain_complex(ring, args.top, 3, rng).to_json()
    report.checks.append(Check(f"generate {args.kind}", True, "written", {"kind": out["kind"]}))
    return out


# ---------------------------------------------------------------- decompositions and certificates


def format_expression(expr) -> str:
    """Render [(ε, I), ...] as e.g. "-s_1 + s_0", with s_I written as s_{i_r}...s_{i_1}."""
    out = ""
    for k, (e, I) in enumerate(expr):
        name = "".join(f"s_{i}" for i in reversed(I)) or "id"
        if k == 0:
            out = ("-" if e < 0 else "") + name
        else:
            out += (" - " if e < 0 else " + ") + name
    return out


def cmd_express(args, report: Report) -> None:
    try:
        J = [int(x) for x in args.subset.split(",") if x.strip()] if args.subset else []
        expr = express_by_degeneracies(J, args.level)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc
    word = expand_degeneracy_expression(expr, args.level)
    ok = word.terms == ((1, tuple(J)),)
    phi = "φ_" + ("".join(map(str, J)) or "∅")
    report.checks.append(
        Check(
            f"{phi} at level {args.level}",
            ok,
            format_expression(expr),
            {"terms": [[e, list(I)] for e, I in expr], "re-expansion": str(word)},
        )
    )


def _element(G: TruncatedSimplicialGroup, n: int, text: str) -> int:
    H = G.levels[n]
    if text in H.labels:
        return H.labels.index(text)
    try:
        x = int(text)
    except ValueError:
        raise MalformedInput(f"element {text!r} not found at level {n}") from None
    if not 0 <= x < H.order:
        raise MalformedInput(f"element {x} not found at level {n}")
    return x


def cmd_decompose(args, report: Report) -> None:
    kind, obj = load(args.path, ["simplicial_group", "crossed_module"])
    G = as_simplicial_group(kind, obj, args.top)
    n = args.level if args.level is not None else G.top
    if not 0 <= n <= G.top:
        raise MalformedInput(f"--level must lie in [0, {G.top}]")
    x = _element(G, n, args.element)
    parts = pc2_decompose(G, n, x)
    back = pc2_recompose(G, n, parts)
    comps = [{"I": list(I), "component": G.levels[n - len(I)].labels[z]} for I, z in parts]
    nontrivial = [c for c in comps if c["component"] != G.levels[n - len(c["I"])].labels[0]]
    report.checks.append(
        Check(
            f"decomposition of {G.levels[n].labels[x]} at level {n}",
            back == x,
            "recomposes exactly" if back == x else "recomposition differs",
            {"components": comps, "nontrivial": nontrivial},
        )
    )


def cmd_phi_check(args, report: Report) -> None:
    kind, obj = load(args.path, ["simplicial_group", "crossed_module"])
    G = as_simplicial_group(kind, obj, args.top)
    R = phi_check(G)
    report.checks.append(
        Check(
            f"Φ naturality on {G.name or 'input'}",
            R.ok,
            "commutes and is onto" if R.ok else "failures found",
            {"squares": R.checked, "onto by level": R.surjective, "failures": [list(map(str, f)) for f in R.failures]},
        )
    )


def cmd_peiffer_cert(args, report: Report) -> None:
    kind, obj = load(args.path, ["simplicial_group", "crossed_module"])
    G = as_simplicial_group(kind, obj, args.top)
    n = args.level if args.level is not None else 2
    if not 2 <= n <= G.top:
        raise MalformedInput(f"--level must lie in [2, {G.top}]")
    x = _element(G, n, args.element)
    if x not in moore_subgroup(G, n):
        raise MalformedInput("element is not in the Moore subgroup")
    cert = peiffer_certificate(G, n, x)
    if cert is None:
        report.checks.append(Check("Peiffer certificate", False, "no certificate (degenerate elements do not generate)"))
        return
    report.checks.append(
        Check(
            "Peiffer certificate",
            cert.verified,
            "verified" if cert.verified else "did not verify",
            {
                "target": G.levels[n - 1].labels[cert.target],
                "letters": [{"I": list(l.I), "J": list(l.J), "u": int(l.u), "v": int(l.v)} for l in cert.letters],
            },
        )
    )


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", choices=["Z", "mod"], default="mod")
    common.add_argument("--mod", type=int, default=2, help="modulus q for --ring mod")
    common.add_argument("--top", type=int, default=3, help="top simplicial level")
    common.add_argument("--arity", type=int, default=3, help="operad arity cap")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--level", type=int, default=None)

    parser = argparse.ArgumentParser(prog="peiffer", description="Exact checks for simplicial algebra and simplicial groups.")
    parser.add_argument("--version", action="version", version=f"peiffer {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a JSON object")
    p.add_argument("path")

    p = sub.add_parser("check", parents=[common], help="run a checker")
    p.add_argument("kind", choices=["dold-kan", "theorem1", "theorem2"])
    p.add_argument("path", nargs="?")

    p = sub.add_parser("generate", parents=[common], help="write an example object as JSON")
    p.add_argument("kind", choices=["kc", "crossed-module", "symmetric-algebra", "random"])
    p.add_argument("--ranks", default="1,1", help="comma-separated ranks C_0,C_1,...")
    p.add_argument("--matrices", default=None, help="JSON list of boundary matrices (row convention)")
    p.add_argument("--cap", type=int, default=2, help="degree cap for symmetric algebras")
    p.add_argument("--preset", default="z2", help="crossed module: z2, s3, z4z2 or z3z2")
    p.add_argument("--as-group", action="store_true", help="write the nerve as a simplicial group")
    p.add_argument("--rank-cap", type=int, default=64)
    p.add_argument("--order-cap", type=int, default=5040)
    p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("decompose", parents=[common], help="Moore decomposition of a group element")
    p.add_argument("path")
    p.add_argument("--element", required=True, help="element label or index")

    p = sub.add_parser("express-degeneracies", parents=[common], help="write φ_J through degeneracies")
    p.add_argument("--subset", default="", help="comma-separated J")

    p = sub.add_parser("phi-check", parents=[common], help="naturality and surjectivity of Φ")
    p.add_argument("path")

    p = sub.add_parser("peiffer-cert", parents=[common], help="commutator certificate for d_n of a Moore element")
    p.add_argument("path")
    p.add_argument("--element", required=True)
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "check": cmd_check,
    "generate": cmd_generate,
    "decompose": cmd_decompose,
    "express-degeneracies": cmd_express,
    "phi-check": cmd_phi_check,
    "peiffer-cert": cmd_peiffer_cert,
}


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    report = Report(command=[args.command] + argv[1:], seed=args.seed)
    payload = None
    try:
        if args.jobs < 1 or args.top < 0 or args.arity < 1:
            raise MalformedInput("--jobs and --arity must be positive and --top non-negative")
        payload = COMMANDS[args.command](args, report)
    except MalformedInput as exc:
        report.error = str(exc)
    except ValidationError as exc:
        report.checks.append(Check("input validation", False, "violation", {"identity": str(exc)}))
    except GroupError as exc:
        report.checks.append(Check("group axioms", False, "violation", {"detail": str(exc)}))
    if args.command == "generate" and payload is not None and report.error is None:
        text = json.dumps(payload, ensure_ascii=False)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            stdout.write(text + "\n")
            return report.exit_code
    if args.format == "json":
        stdout.write(json.dumps(report.to_json(), ensure_ascii=False, indent=2) + "\n")
    else:
        stdout.write(report.to_text() + "\n")
    return report.exit_code


def main() -> None:
    sys.exit(run())
