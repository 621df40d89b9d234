"""Command-line front end: ``semicenter <command> INPUT [options]``."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .catalog import catalog_export, catalog_get, catalog_list, verify_paper
from .certify import (
    CertificationFailure,
    certify_polynomial_center,
    check_degree_bound,
    coregularity_obstruction,
    frobenius_analysis,
    rationality_verdict,
)
from .exactpoly import UsageError, parse_poly
from .invsearch import (
    DEFAULT_MONOMIAL_CAP,
    ResourceCapExceeded,
    build_table,
    generator_candidates,
    invariants_of_degree,
    proper_weights_up_to,
    semiinvariants_of_degree,
    truncation_estimate,
)
from .liecore import (
    InvalidAlgebra,
    LieAlgebra,
    algebra_from_dict,
    center,
    derived_algebra,
    is_solvable,
    is_unimodular,
)
from .structura import (
    fundamental_semiinvariant,
    index,
    magic_number,
    pin_symbolic_index,
    sample_frobenius_semiradical,
)

SCHEMA = "semicenter-report/1"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CERT = 2
EXIT_CAP = 3
EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


# input


def load_input(spec: str) -> tuple[LieAlgebra, dict]:
    """A JSON file path, or a catalog entry name."""
    path = Path(spec)
    if path.is_file():
        raw = path.read_bytes()
        try:
            data = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise InvalidAlgebra(f"{spec}: invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise InvalidAlgebra(f"{spec}: top level must be an object")
        L = algebra_from_dict(data)
        return L, {"source": "file", "path": path.name, "sha256": hashlib.sha256(raw).hexdigest()}
    if spec in catalog_list():
        canon = json.dumps(catalog_export(spec), sort_keys=True).encode()
        return catalog_get(spec).algebra, {
            "source": "catalog",
            "name": spec,
            "sha256": hashlib.sha256(canon).hexdigest(),
        }
    raise UsageError(f"input {spec!r} is neither a readable file nor a catalog entry")


# report pieces


def _subspace(L: LieAlgebra, s) -> dict:
    return {"dim": s.dim, "echelon": s.to_json(), "span": s.describe(L.basis)}


def _polys(L: LieAlgebra, ps) -> list[str]:
    return [p.to_text(L.basis) for p in ps]


def _slices(L: LieAlgebra, semi) -> dict:
    return {
        "weights": [
            {"weight": w.to_json(), "weight_text": w.describe(L.basis), "basis": _polys(L, b)} for w, b in semi.slices
        ],
        "unresolved_dim": semi.unresolved,
    }


def _table(L: LieAlgebra, table) -> dict:
    return {
        "max_degree": table.max_degree,
        "invariants": {str(d): _polys(L, b) for d, b in sorted(table.invariants.items())},
        "invariant_dims": {str(d): n for d, n in table.invariant_dims().items()},
        "semiinvariants": {str(d): _slices(L, s) for d, s in sorted(table.semiinvariants.items())},
        "proper_weights": [w.to_json() for w in table.proper_weights()],
        "min_invariant_degree": table.min_invariant_degree(),
    }


class Stages:
    """Ordered stage results with optional wall-clock timings."""

    def __init__(self, timings: bool):
        self.data: dict = {}
        self.times: dict = {}
        self.timings = timings

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        yield
        if self.timings:
            self.times[name] = round(time.perf_counter() - t0, 6)


def _header(args, meta: dict, command: str) -> dict:
    return {
        "schema": SCHEMA,
        "tool": {"name": "semicenter", "version": __version__},
        "command": command,
        "input": meta,
        "seed": args.seed,
        "rank_mode": "symbolic" if args.symbolic_rank else "randomized",
    }


def _structure(L: LieAlgebra, args) -> dict:
    if args.symbolic_rank:
        pin_symbolic_index(L, args.seed)
    return {
        "name": L.name,
        "dim": L.dim,
        "basis": list(L.basis),
        "flags": dict(L.flags),
        "derived_algebra_dim": derived_algebra(L).dim,
        "center": _subspace(L, center(L)),
        "solvable": is_solvable(L),
        "unimodular": is_unimodular(L),
    }


def _basics(L: LieAlgebra, args, st: Stages) -> None:
    with st.stage("structure"):
        st.data["structure"] = _structure(L, args)
    with st.stage("index"):
        st.data["index"] = index(L, args.seed)
        st.data["magic_number"] = magic_number(L, args.seed)
    with st.stage("fundamental_semiinvariant"):
        p, q = fundamental_semiinvariant(L, args.seed)
        st.data["fundamental_semiinvariant"] = {"p": p.to_text(L.basis), "q": q.to_text(L.basis)}
    with st.stage("frobenius_semiradical"):
        fs = sample_frobenius_semiradical(L, args.seed)
        d = _subspace(L, fs.subspace)
        d.update(
            samples=fs.samples,
            regular_samples=fs.regular_samples,
            stop_reason=fs.stop_reason,
            label=fs.label,
        )
        st.data["frobenius_semiradical"] = d


# commands


def cmd_analyze(args, L: LieAlgebra, st: Stages) -> int:
    _basics(L, args, st)
    D = args.max_degree
    with st.stage("graded_table"):
        table = build_table(L, D, args.monomial_cap, args.threads)
        st.data["graded_table"] = _table(L, table)
    with st.stage("truncation"):
        st.data["truncation"] = _subspace(L, truncation_estimate(L, D, args.monomial_cap))
    certs = []
    with st.stage("certificates"):
        gens = generator_candidates(L, D, args.seed, args.monomial_cap, table)
        st.data["generator_candidates"] = _polys(L, gens)
        out = {}
        if index(L, args.seed) == 0:
            out["frobenius"] = frobenius_analysis(L, D, args.seed, table, args.monomial_cap).to_json()
        else:
            try:
                c = certify_polynomial_center(L, gens, args.seed, table)
                certs.append(c)
                out["polynomial_center"] = c.to_json()
            except CertificationFailure as exc:
                out["polynomial_center_failure"] = {"code": exc.code, "message": str(exc)}
            if D >= 2:
                obs = coregularity_obstruction(L, table, args.seed)
                if obs is not None:
                    out["obstruction"] = obs.to_json()
        st.data["certificates"] = out
    with st.stage("verdict"):
        st.data["verdict"] = rationality_verdict(L, table, certs, args.seed, args.monomial_cap).to_json()
    return EXIT_OK


def _degrees(args) -> list[int]:
    if args.degree is not None:
        if args.degree < 0:
            raise UsageError("--degree must be non-negative")
        return [args.degree]
    return list(range(1, args.max_degree + 1))


def cmd_invariants(args, L: LieAlgebra, st: Stages) -> int:
    with st.stage("invariants"):
        st.data["invariants"] = {str(d): _polys(L, invariants_of_degree(L, d, args.monomial_cap)) for d in _degrees(args)}
    return EXIT_OK


def cmd_semiinvariants(args, L: LieAlgebra, st: Stages) -> int:
    with st.stage("semiinvariants"):
        st.data["semiinvariants"] = {
            str(d): _slices(L, semiinvariants_of_degree(L, d, args.monomial_cap)) for d in _degrees(args) if d >= 1
        }
    return EXIT_OK


def _read_generators(path: str, L: LieAlgebra):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read generators file: {exc}") from exc
    gens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                gens.append(parse_poly(line, L.basis))
            except ValueError as exc:
                raise UsageError(f"bad polynomial {line!r}: {exc}") from exc
    return gens


def cmd_certify(args, L: LieAlgebra, st: Stages) -> int:
    gens = _read_generators(args.generators, L)
    st.data["generators"] = _polys(L, gens)
    if args.symbolic_rank:
        pin_symbolic_index(L, args.seed)
    with st.stage("certify"):
        try:
            st.data["degree_bound"] = check_degree_bound(L, gens, args.seed).to_json()
            table = build_table(L, args.max_degree, args.monomial_cap, args.threads)
            st.data["certificate"] = certify_polynomial_center(L, gens, args.seed, table).to_json()
        except CertificationFailure as exc:
            st.data["failure"] = {"code": exc.code, "message": str(exc)}
            return EXIT_CERT
    return EXIT_OK


def cmd_frobenius(args, L: LieAlgebra, st: Stages) -> int:
    if args.symbolic_rank:
        pin_symbolic_index(L, args.seed)
    with st.stage("frobenius"):
        try:
            cert = frobenius_analysis(L, args.max_degree, args.seed, cap=args.monomial_cap)
        except CertificationFailure as exc:
            st.data["failure"] = {"code": exc.code, "message": str(exc)}
            return EXIT_CERT
        st.data["frobenius"] = cert.to_json()
    return EXIT_OK if cert.payload["complete"] else EXIT_CERT


def cmd_truncate(args, L: LieAlgebra, st: Stages) -> int:
    with st.stage("truncation"):
        st.data["proper_weights"] = [w.to_json() for w in proper_weights_up_to(L, args.max_degree, args.monomial_cap)]
        st.data["truncation"] = _subspace(L, truncation_estimate(L, args.max_degree, args.monomial_cap))
        st.data["note"] = f"intersection of kernels of weights found up to degree {args.max_degree} (upper bound)"
    return EXIT_OK


def cmd_verdict(args, L: LieAlgebra, st: Stages) -> int:
    if args.symbolic_rank:
        pin_symbolic_index(L, args.seed)
    with st.stage("verdict"):
        table = build_table(L, args.max_degree, args.monomial_cap, args.threads)
        st.data["verdict"] = rationality_verdict(L, table, (), args.seed, args.monomial_cap).to_json()
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "invariants": cmd_invariants,
    "semiinvariants": cmd_semiinvariants,
    "certify": cmd_certify,
    "frobenius": cmd_frobenius,
    "truncate": cmd_truncate,
    "verdict": cmd_verdict,
}


# output


def render_text(obj, indent: int = 0) -> list[str]:
    """Plain-text projection of the JSON report."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if _inline(v):
                lines.append(f"{pad}{k}: [" + ", ".join(_scalar(x) for x in v) + "]")
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif _inline(obj):
        lines.append(pad + "[" + ", ".join(_scalar(v) for v in obj) + "]")
    elif isinstance(obj, list):
        for v in obj:
            if _inline(v):
                lines.append(f"{pad}- [" + ", ".join(_scalar(x) for x in v) + "]")
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.extend(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _inline(v) -> bool:
    """Short lists of scalars print on one line."""
    if not isinstance(v, list) or not v or any(isinstance(x, (dict, list)) for x in v):
        return False
    texts = [_scalar(x) for x in v]
    return all(", " not in t for t in texts) and sum(map(len, texts)) <= 100


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def emit(report: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(render_text(report)) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=6, help="degree cutoff D for searches (default 6)")
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized step (default 0)")
    common.add_argument("--symbolic-rank", action="store_true", help="exact symbolic rank for the index")
    common.add_argument("--monomial-cap", type=int, default=DEFAULT_MONOMIAL_CAP, help="max monomials per degree")
    common.add_argument("--json", action="store_true", help="machine-readable JSON report")
    common.add_argument("--threads", type=int, default=1, help="worker threads for per-degree searches")
    common.add_argument("--timings", action="store_true", help="include per-stage wall-clock timings")

    parser = _Parser(prog="semicenter", description="Poisson centers and rationality certificates for Lie algebras.")
    parser.add_argument("--version", action="version", version=f"semicenter {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help="algebra JSON file or catalog entry name")
        if name in ("invariants", "semiinvariants"):
            p.add_argument("--degree", type=int, help="single degree (default: 1..max-degree)")
        if name == "certify":
            p.add_argument("--generators", required=True, help="file with one polynomial per line")

    cat = sub.add_parser("catalog", parents=[common])
    cat.add_argument("action", choices=["list", "show", "export", "verify-paper"])
    cat.add_argument("name", nargs="?")
    cat.add_argument("--include-stretch", action="store_true", help="also run the slow high-degree checks")
    cat.add_argument("-o", "--output", help="export destination (default stdout)")
    return parser


def _catalog(args, st: Stages) -> int:
    if args.action == "list":
        st.data["entries"] = [{"name": n, "description": catalog_get(n).description} for n in catalog_list()]
        return EXIT_OK
    if args.action == "verify-paper":
        # the regression goldens are checked at degree 4 unless a cutoff is given
        D = args.max_degree if args._explicit_degree else 4
        with st.stage("verify_paper"):
            rep = verify_paper(D, args.seed, args.include_stretch, args.monomial_cap)
        st.data["verify_paper"] = rep.to_json()
        return EXIT_OK if rep.ok else EXIT_CERT
    if not args.name:
        raise UsageError(f"catalog {args.action} needs an entry name")
    entry = catalog_get(args.name)
    if args.action == "export":
        data = catalog_export(args.name)
        if args.output:
            Path(args.output).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
            st.data["exported"] = args.output
        else:
            st.data["algebra"] = data
        return EXIT_OK
    e = entry.expected
    st.data["entry"] = {
        "name": entry.name,
        "description": entry.description,
        "algebra": catalog_export(args.name),
        "expected": {
            "index": e.index,
            "magic": e.magic,
            "p": e.p,
            "F_basis": [list(r) for r in e.F_basis],
            "truncation": [list(r) for r in e.truncation],
            "coregular": e.coregular,
            "invariant_generators": list(e.invariant_generators),
            "min_invariant_degree": e.min_invariant_degree,
            "verdict_rule": e.verdict_rule,
            "anchors": dict(sorted(e.anchors.items())),
        },
    }
    return EXIT_OK


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        args._explicit_degree = any(a == "--max-degree" or a.startswith("--max-degree=") for a in argv)
        if args.max_degree < 1:
            raise UsageError("--max-degree must be at least 1")
        if args.monomial_cap < 1 or args.threads < 1:
            raise UsageError("--monomial-cap and --threads must be positive")
        st = Stages(args.timings)
        if args.command == "catalog":
            report = {
                "schema": SCHEMA,
                "tool": {"name": "semicenter", "version": __version__},
                "command": f"catalog {args.action}",
                "seed": args.seed,
            }
            code = _catalog(args, st)
        else:
            L, meta = load_input(args.input)
            report = _header(args, meta, args.command)
            report["max_degree"] = args.max_degree
            code = COMMANDS[args.command](args, L, st)
        report["stages"] = st.data
        report["exit_code"] = code
        if args.timings:
            report["timings"] = st.times
        emit(report, args.json, out)
        return code
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except InvalidAlgebra as exc:
        err.write(f"invalid algebra: {exc}\n")
        return EXIT_INVALID
    except ResourceCapExceeded as exc:
        err.write(f"resource cap exceeded: {exc}\n")
        return EXIT_CAP
    except CertificationFailure as exc:
        err.write(f"certification failed: {exc}\n")
        return EXIT_CERT


def main(argv=None) -> int:
    # output is plain text, so NO_COLOR needs no handling
    return run(argv)
