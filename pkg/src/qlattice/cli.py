"""Command-line surface: every operation as a subcommand with stable output.

Output formats are json (default), csv, and table; all three carry the same
data. Exit codes: 0 success or verdict pass, 1 verdict fail, 2 usage or
domain error, 3 resource or budget error. Domain-level exceptions (moduli
with no usable prime) exit 2; reported exception markers and exhausted
budgets inside result payloads are data, not crashes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .errors import (
    DomainError,
    QLatticeError,
    ResourceLimitError,
    StructureError,
    UnsupportedParametersError,
)
from .qcombin import alt_sum, qbinom, zsigmondy_exception, zsigmondy_prime
from .gfspace import ENV_LATTICE_BUDGET, enumerate_subspaces, field
from .families import (
    Family,
    bound_frac_general,
    bound_frankl_graham,
    bound_singleton,
    bound_theorem1,
    check_fractional,
    check_modular,
    family_from_dict,
    family_to_dict,
    fractions_from_strings,
    fractions_to_strings,
    partition_jk,
    partition_mod_prime,
    power_cell,
    profile_from_dict,
    gram_analysis,
)
from .certificates import VARIANTS, certificate_context, independence_certificate
from .search import (
    SearchLimits,
    build_graph,
    gen_example_bisection,
    gen_example_frac_uniform,
    gen_example_uniform,
    max_family,
)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    """Plumbing knobs shared by all subcommands."""

    format: str = "json"
    seed: int = 0
    lattice_budget: Optional[int] = None
    threads: int = 1

    def __post_init__(self):
        if self.format not in ("json", "csv", "table"):
            raise DomainError(f"unknown format {self.format!r}")
        if self.lattice_budget is not None and self.lattice_budget < 1:
            raise DomainError("lattice budget must be positive")
        if self.threads < 1:
            raise DomainError("thread count must be positive")


# ---------------------------------------------------------------------------
# rendering


def _compact(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def render(payload, fmt: str) -> str:
    """Serialize one payload; scalars print bare in every format."""
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if not isinstance(payload, dict):
        return f"{payload}\n"
    keys = sorted(payload)
    if fmt == "table":
        width = max(len(k) for k in keys) if keys else 0
        lines = [f"{k.ljust(width)}  {_compact(payload[k])}" for k in keys]
        return "\n".join(lines) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(keys)
    writer.writerow([_compact(payload[k]) for k in keys])
    return buffer.getvalue()


# ---------------------------------------------------------------------------
# argument helpers


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise DomainError(f"expected a comma-separated integer list, got {text!r}")


def _fraction_pair(text: str) -> tuple[int, int]:
    head, sep, tail = text.strip().partition("/")
    if not sep:
        raise DomainError(f"fraction {text!r} must look like a/b")
    try:
        return int(head), int(tail)
    except ValueError:
        raise DomainError(f"fraction {text!r} must have integer parts")


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}")


def _load_family(path: str) -> Family:
    return family_from_dict(_load_json(path))


def _profile_from_args(args) -> "ModularProfile":
    from .families import ModularProfile

    if getattr(args, "profile", None):
        return profile_from_dict(_load_json(args.profile))
    if args.b is None or args.K is None or args.L is None:
        raise DomainError("give --profile, or all of --b, --K, --L")
    return ModularProfile(args.b, _int_list(args.K), _int_list(args.L))


def _member_indices(family: Family, sub: Family) -> list[int]:
    position = {m: i for i, m in enumerate(family)}
    return [position[m] for m in sub]


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (payload, exit_code)


def _cmd_qbinom(args, config):
    return qbinom(args.n, args.k, args.q), EXIT_OK


def _cmd_altsum(args, config):
    return alt_sum(args.n, args.q), EXIT_OK


def _cmd_zsigmondy(args, config):
    marker = zsigmondy_exception(args.q, args.b)
    if marker is not None:
        payload = {
            "q": args.q,
            "b": args.b,
            "prime": None,
            "order": None,
            "exception": {"clause": marker.clause, "message": marker.message()},
        }
        return payload, EXIT_OK
    kwargs = {} if args.ceiling is None else {"ceiling": args.ceiling}
    prime = zsigmondy_prime(args.q, args.b, **kwargs)
    return {
        "q": args.q,
        "b": args.b,
        "prime": prime,
        "order": args.b,
        "exception": None,
    }, EXIT_OK


def _cmd_enum(args, config):
    ctx = field(args.q)
    payload = {
        "n": args.n,
        "q": args.q,
        "dim": args.dim,
        "count": qbinom(args.n, args.dim, args.q),
    }
    if not args.count_only:
        payload["subspaces"] = [
            [list(row) for row in space.rows]
            for space in enumerate_subspaces(ctx, args.n, args.dim)
        ]
    return payload, EXIT_OK


def _cmd_check(args, config):
    family = _load_family(args.family)
    if args.profile:
        kind = "modular"
        result = check_modular(family, profile_from_dict(_load_json(args.profile)))
    else:
        kind = "fractional"
        result = check_fractional(family, fractions_from_strings(args.fractions.split(",")))
    payload = {"kind": kind, "size": len(family), **result.to_json_dict()}
    return payload, EXIT_OK if result.ok else EXIT_VERDICT


def _cmd_bound(args, config):
    if args.theorem == "main":
        report = bound_theorem1(args.n, args.q, _profile_from_args(args))
    elif args.theorem == "frac":
        if not args.fractions:
            raise DomainError("--theorem frac needs --fractions")
        report = bound_frac_general(
            args.n, args.q, fractions_from_strings(args.fractions.split(","))
        )
    elif args.theorem == "singleton":
        if not args.frac:
            raise DomainError("--theorem singleton needs --frac a/b")
        a, b = _fraction_pair(args.frac)
        report = bound_singleton(args.n, args.q, a, b)
    else:
        if args.k is None or args.b is None or args.mus is None:
            raise DomainError("--theorem frankl-graham needs --k, --b, --mus")
        report = bound_frankl_graham(args.n, args.q, args.k, args.b, _int_list(args.mus))
    return report.to_json_dict(), EXIT_OK


def _cmd_certify(args, config):
    family = _load_family(args.family)
    profile = profile_from_dict(_load_json(args.profile))
    cctx = certificate_context(family.ctx, family.n, profile, p=args.prime)
    cert = independence_certificate(cctx, family, args.variant)
    payload = {"variant": args.variant, **cert.to_json_dict()}
    return payload, EXIT_OK if cert.verdict == "independent" else EXIT_VERDICT


def _cmd_partition(args, config):
    family = _load_family(args.family)
    if args.prime is not None:
        cells = partition_mod_prime(family, args.prime)
        payload = {
            "kind": "mod-prime",
            "p": args.prime,
            "cells": {
                str(res): _member_indices(family, sub) for res, sub in cells.items()
            },
        }
        return payload, EXIT_OK
    partition = partition_jk(family, args.base)
    return {"kind": "power-cells", "b": args.base, **partition.to_json_dict()}, EXIT_OK


def _cmd_gram(args, config):
    family = _load_family(args.family)
    a, denom = _fraction_pair(args.frac)
    if denom != args.base:
        raise DomainError(
            f"--frac denominator {denom} must equal --base {args.base}"
        )
    if len(family) == 0:
        raise DomainError("gram analysis needs a nonempty family")
    coords = power_cell(family[0].dim, args.base)
    if coords is None:
        raise DomainError(
            f"member 0 (dim {family[0].dim}) lies in no power cell under base {args.base}"
        )
    j, k, _ = coords
    report = gram_analysis(family, args.base, a, j, k)
    payload = {"base": args.base, "a": a, "j": j, "k": k, **report.to_json_dict()}
    return payload, EXIT_OK if report.rank_lower_bound_holds else EXIT_VERDICT


def _search_limits(args) -> SearchLimits:
    kwargs = {}
    if args.max_nodes is not None:
        kwargs["max_nodes"] = args.max_nodes
    if args.time_budget is not None:
        kwargs["time_budget"] = args.time_budget
    if args.dims is not None:
        kwargs["dim_filter"] = _int_list(args.dims)
    return SearchLimits(**kwargs)


def _cmd_search(args, config):
    ctx = field(args.q)
    if args.profile:
        predicate = profile_from_dict(_load_json(args.profile))
    else:
        predicate = fractions_from_strings(args.fractions.split(","))
    limits = _search_limits(args)
    graph = build_graph(ctx, args.n, predicate, limits)
    result = max_family(graph, limits)
    payload = {
        "vertices": graph.size,
        "edges": graph.edge_count(),
        **result.to_json_dict(),
    }
    return payload, EXIT_OK if result.exhausted else EXIT_RESOURCE


def _cmd_example(args, config):
    if args.kind == "uniform":
        if args.k is None or args.s is None or args.q is None:
            raise DomainError("example uniform needs --k, --s, --q")
        family, profile = gen_example_uniform(args.k, args.s, args.q)
        payload = {
            "kind": "uniform",
            "size": len(family),
            "family": family_to_dict(family),
            "profile": profile.to_dict(),
        }
    elif args.kind == "frac-uniform":
        if args.s is None or args.n is None or args.q is None:
            raise DomainError("example frac-uniform needs --s, --n, --q")
        family, fractions, violations = gen_example_frac_uniform(args.s, args.n, args.q)
        payload = {
            "kind": "frac-uniform",
            "size": len(family),
            "family": family_to_dict(family),
            "fractions": fractions_to_strings(fractions),
            "violations": [list(pair) for pair in violations],
        }
    else:
        if args.n is None or args.q is None:
            raise DomainError("example bisection needs --n, --q")
        family, fractions = gen_example_bisection(args.n, args.q)
        payload = {
            "kind": "bisection",
            "size": len(family),
            "family": family_to_dict(family),
            "fractions": fractions_to_strings(fractions),
        }
    return payload, EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "csv", "table"), default="json", help="output format"
    )
    common.add_argument("--seed", type=int, default=0, help="seed for randomized demos")
    common.add_argument(
        "--lattice-budget", type=int, default=None, help="override the subspace-count budget"
    )
    common.add_argument(
        "--threads", type=int, default=1, help="worker count (results are thread-invariant)"
    )

    parser = argparse.ArgumentParser(
        prog="qlattice",
        description="Subspace-family combinatorics: counts, checks, bounds, certificates, search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qbinom", parents=[common], help="Gaussian binomial [n k] over GF(q)")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(handler=_cmd_qbinom)

    p = sub.add_parser("altsum", parents=[common], help="signed q-weighted column sum")
    p.add_argument("n", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(handler=_cmd_altsum)

    p = sub.add_parser(
        "zsigmondy", parents=[common], help="prime with multiplicative order b, or the exception"
    )
    p.add_argument("q", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--ceiling", type=int, default=None, help="trial-division ceiling")
    p.set_defaults(handler=_cmd_zsigmondy)

    p = sub.add_parser("enum", parents=[common], help="enumerate subspaces of one dimension")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(handler=_cmd_enum)

    p = sub.add_parser("check", parents=[common], help="verify a family against a discipline")
    p.add_argument("--family", required=True, help="family JSON path")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--profile", help="profile JSON path")
    group.add_argument("--fractions", help='comma list like "1/2,2/3"')
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("bound", parents=[common], help="evaluate a size bound")
    p.add_argument(
        "--theorem", required=True, choices=("main", "frac", "singleton", "frankl-graham")
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--profile", help="profile JSON path (theorem main)")
    p.add_argument("--b", type=int, default=None, help="modulus (main inline, frankl-graham)")
    p.add_argument("--K", default=None, help="comma list of member residues (main inline)")
    p.add_argument("--L", default=None, help="comma list of intersection residues (main inline)")
    p.add_argument("--fractions", default=None, help="comma list (theorem frac)")
    p.add_argument("--frac", default=None, help="single a/b (theorem singleton)")
    p.add_argument("--k", type=int, default=None, help="member dimension (frankl-graham)")
    p.add_argument("--mus", default=None, help="comma list of residues (frankl-graham)")
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("certify", parents=[common], help="rank certificate for a family")
    p.add_argument("--family", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--variant", required=True, choices=VARIANTS)
    p.add_argument("--prime", type=int, default=None, help="override the derived prime")
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("partition", parents=[common], help="split a family by dimension")
    p.add_argument("--family", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--prime", type=int, help="partition by dimension mod a prime")
    group.add_argument("--base", type=int, help="partition into power cells of a base")
    p.set_defaults(handler=_cmd_partition)

    p = sub.add_parser("gram", parents=[common], help="Gram-matrix analysis of a power cell")
    p.add_argument("--family", required=True)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--frac", required=True, help="the family fraction a/b")
    p.set_defaults(handler=_cmd_gram)

    p = sub.add_parser("search", parents=[common], help="exhaustive maximum-family search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--profile", help="profile JSON path")
    group.add_argument("--fractions", help='comma list like "1/2"')
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--time-budget", type=float, default=None, help="seconds")
    p.add_argument("--dims", default=None, help="comma list restricting vertex dimensions")
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser("example", parents=[common], help="generate a canonical family")
    p.add_argument("kind", choices=("uniform", "frac-uniform", "bisection"))
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.set_defaults(handler=_cmd_example)

    return parser


def _error_payload(exc: Exception) -> dict:
    payload = {"error": {"kind": type(exc).__name__, "message": str(exc)}}
    clause = getattr(exc, "clause", "")
    if clause:
        payload["error"]["clause"] = clause
    return payload


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return code if code == 0 else EXIT_USAGE

    saved_budget = os.environ.get(ENV_LATTICE_BUDGET)
    try:
        config = RunConfig(
            format=args.format,
            seed=args.seed,
            lattice_budget=args.lattice_budget,
            threads=args.threads,
        )
        if config.lattice_budget is not None:
            os.environ[ENV_LATTICE_BUDGET] = str(config.lattice_budget)
        payload, code = args.handler(args, config)
    except ResourceLimitError as exc:
        sys.stderr.write(render(_error_payload(exc), "json"))
        return EXIT_RESOURCE
    except (UnsupportedParametersError, DomainError, StructureError) as exc:
        sys.stderr.write(render(_error_payload(exc), "json"))
        return EXIT_USAGE
    except QLatticeError as exc:
        sys.stderr.write(render(_error_payload(exc), "json"))
        return EXIT_USAGE
    finally:
        # --lattice-budget must not outlive the command when main() is
        # driven in-process.
        if args.lattice_budget is not None:
            if saved_budget is None:
                os.environ.pop(ENV_LATTICE_BUDGET, None)
            else:
                os.environ[ENV_LATTICE_BUDGET] = saved_budget

    sys.stdout.write(render(payload, config.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
