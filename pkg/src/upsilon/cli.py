"""Command-line front end: ``upsilon derive | indep | enumerate | certify-summand | validate``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .derivation import DerivationError, derive
from .enumerator import enumerate_profiles, strata
from .expr import ParseError, SemanticError, canonical
from .facts import (FactsError, FactTable, bundled_facts, facts_report, load_facts, load_facts_file,
                    save_report, trace)
from .independence import (INDEPENDENT, SUMMAND, HypothesisError, InvalidCertificate,
                           IndependenceReport, SingularityCertificate, certificate_from_facts,
                           check_independence, family_iterated_cables, family_power_cables,
                           summand_family, window_lambda_cases)
from .pl import PLFunction, as_interval, format_location, simplify_location, validate_candidate

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Inputs


def _facts_source(ref: str) -> FactTable:
    if ref.startswith("@"):
        return bundled_facts(ref[1:] + ("" if ref.endswith(".json") else ".json"))
    return load_facts_file(ref)


def load_tables(refs: list[str] | None) -> FactTable:
    """Merge the facts files named on the command line.

    Without ``--facts`` the ``UPSILON_FACTS`` path is used, and failing that
    the bundled ``@base`` table.
    """
    if not refs:
        env = os.environ.get("UPSILON_FACTS")
        refs = [env] if env else ["@base"]
    table = FactTable()
    for ref in refs:
        table = table.merged(_facts_source(ref))
    return table


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON: {exc}") from None


def load_family(path: str, table: FactTable):
    """Read a family document; returns ``(members, declared certificates, table)``."""
    data = _read_json(path)
    if isinstance(data, list):
        data = {"members": data}
    if not isinstance(data, dict) or not isinstance(data.get("members"), list):
        raise UsageError(f"{path}: a family needs a 'members' list")
    extra = set(data) - {"members", "certificates", "facts", "note"}
    if extra:
        raise UsageError(f"{path}: unknown keys {sorted(extra)}")
    if "facts" in data:
        table = table.merged(load_facts(data["facts"]))
    members = [canonical(m) for m in data["members"]]
    if len(set(members)) != len(members):
        raise UsageError(f"{path}: duplicate members")
    declared = {}
    for c in data.get("certificates", []):
        cert = SingularityCertificate.from_json({**c, "knot": canonical(c["knot"])})
        if cert.knot not in members:
            raise UsageError(f"certificate for {cert.knot} which is not a member")
        declared[cert.knot] = cert
    return members, declared, table


def _combine(derived: SingularityCertificate | None, declared: SingularityCertificate | None):
    if declared is None:
        return derived
    if derived is None or derived.all_singularities is not None and declared.all_singularities is None:
        return declared
    both = as_interval(derived.t).intersect(as_interval(declared.t))
    if both is None:
        raise InvalidCertificate(f"{declared.knot}: declared singularity {format_location(declared.t)} "
                                 f"misses the derived window {format_location(derived.t)}")
    delta = declared.delta if declared.delta is not None else derived.delta
    return SingularityCertificate(declared.knot, simplify_location(both),
                                  delta if both.is_point else None, True,
                                  derived.all_singularities, declared.lambda_cases)


def family_certificates(members, declared, table, exhaust_windows: bool):
    certs, facts, notes = [], [], []
    for m in members:
        f = derive(m, table)
        facts.append(f)
        cert = _combine(certificate_from_facts(f, m), declared.get(m))
        if cert is None:
            raise InvalidCertificate(f"{m}: no singularity certificate could be derived")
        if exhaust_windows and cert.lam is None and cert.lambda_cases is None:
            if f.gc.hi is None:
                raise InvalidCertificate(f"{m}: window analysis needs an upper bound on gc")
            cases = window_lambda_cases(cert.t, f.tau, f.gc.hi)
            if not cases:
                raise InvalidCertificate(f"{m}: no admissible slope change inside {format_location(cert.t)}")
            lams = tuple(sorted({lam for _, _, lam in cases}))
            cert = SingularityCertificate(cert.knot, cert.t, None, True, cert.all_singularities, lams)
            notes.append(trace("window-exhaustion", m,
                               f"{len(cases)} admissible slope changes, lambda in "
                               f"{{{', '.join(str(x) for x in lams)}}}", window=format_location(cert.t)))
        certs.append(cert)
    return certs, facts, notes


# ---------------------------------------------------------------------------
# Output


def _emit(obj, as_json: bool, lines=None) -> None:
    if as_json:
        sys.stdout.write(save_report(obj))
        return
    for line in lines if lines is not None else obj.summary_lines():
        print(line)
    entries = getattr(obj, "trace", ())
    if entries:
        print("trace:")
        for e in entries:
            inputs = ", ".join(f"{k}={v}" for k, v in e.inputs)
            print(f"  [{e.rule}] {e.subject}: {e.conclusion}" + (f" ({inputs})" if inputs else "")
                  + f"  <{e.reference}>")


def _verdict_code(verdict: str) -> int:
    return EXIT_OK if verdict in (INDEPENDENT, SUMMAND, "validated") else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------
# Commands


def cmd_derive(args) -> int:
    table = load_tables(args.facts)
    f = derive(args.expr, table)
    if args.json:
        sys.stdout.write(save_report(facts_report(f)))
    else:
        _emit(f, False)
    return EXIT_OK


def _family_report(args, exhaust: bool) -> IndependenceReport:
    table = load_tables(args.facts)
    if args.cables_of or args.iterate:
        base_expr = args.cables_of or args.iterate
        k = derive(base_expr, table)
        if args.iterate:
            forced = [int(x) for x in args.p.split(",")] if args.p else None
            _, rep = family_iterated_cables(k, args.depth, forced, canonical(base_expr))
            return rep
        if exhaust:
            return summand_family(k, args.depth, canonical(base_expr))
        return family_power_cables(k, args.base, args.depth, canonical(base_expr))
    if not args.family:
        raise UsageError("give a family file, --cables-of EXPR or --iterate EXPR")
    members, declared, table = load_family(args.family, table)
    certs, facts, notes = family_certificates(members, declared, table, exhaust)
    rep = check_independence(certs, notes, facts)
    return rep


def cmd_indep(args) -> int:
    rep = _family_report(args, exhaust=False)
    _emit(rep, args.json)
    return _verdict_code(rep.verdict)


def cmd_certify_summand(args) -> int:
    rep = _family_report(args, exhaust=True)
    _emit(rep, args.json)
    return EXIT_OK if rep.verdict == SUMMAND else EXIT_INCONCLUSIVE


def cmd_enumerate(args) -> int:
    profiles = enumerate_profiles(args.gc, args.tau)
    if args.json:
        doc = {"kind": "profiles", "gc": args.gc, "tau": args.tau, "count": len(profiles),
               "strata": {str(k): v for k, v in strata(profiles).items()},
               "profiles": [f.to_json() for f in profiles]}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        print(f"{len(profiles)} profiles for gc = {args.gc}"
              + (f", tau = {args.tau}" if args.tau is not None else ""))
        for tau, n in strata(profiles).items():
            print(f"  tau = {tau}: {n}")
        for f in profiles:
            print(f"  {f.describe()}")
    return EXIT_OK


def cmd_validate(args) -> int:
    data = _read_json(args.file)
    if "upsilon" in data:
        claims = {k: data.get(k) for k in ("tau", "g4", "gc")}
        f = PLFunction.from_json(data["upsilon"])
    else:
        claims = {}
        f = PLFunction.from_json(data)
    for key in ("tau", "g4", "gc"):
        if getattr(args, key) is not None:
            claims[key] = getattr(args, key)
    report = validate_candidate(f, claims.get("tau"), claims.get("g4"), claims.get("gc"))
    verdict = "validated" if report.ok else "rejected"
    if args.json:
        doc = {"kind": "validation", "verdict": verdict, "function": f.to_json(),
               "claims": {k: v for k, v in claims.items() if v is not None}, **report.to_json()}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        print(f"{f.describe()}: {verdict}")
        for c in report.checks:
            print(f"  {'ok  ' if c.passed else 'FAIL'} {c.axiom}" + (f": {c.detail}" if c.detail else ""))
    return EXIT_OK if report.ok else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="upsilon", description="Upsilon-invariant concordance calculator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--facts", action="append", metavar="PATH",
                       help="facts file (repeatable; @base and @literature name bundled files)")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("derive", help="derive invariants of a knot expression")
    p.add_argument("expr")
    common(p)
    p.set_defaults(func=cmd_derive)

    for name, func, doc in (("indep", cmd_indep, "certify linear independence of a family"),
                            ("certify-summand", cmd_certify_summand, "certify a summand basis")):
        p = sub.add_parser(name, help=doc)
        p.add_argument("family", nargs="?", help="family JSON file")
        p.add_argument("--cables-of", metavar="EXPR", help="use the cables EXPR_{base^i,1}")
        p.add_argument("--iterate", metavar="EXPR", help="use greedy iterated (p_i,1) cables of EXPR")
        p.add_argument("--p", metavar="LIST", help="force the iterated cabling parameters, e.g. 3,7")
        p.add_argument("--base", type=int, default=2)
        p.add_argument("--depth", type=int, default=5)
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("enumerate", help="list admissible Upsilon profiles")
    p.add_argument("--gc", type=int, required=True)
    p.add_argument("--tau", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("validate", help="check a PL function against the Upsilon axioms")
    p.add_argument("file")
    p.add_argument("--tau", type=int)
    p.add_argument("--g4", type=int)
    p.add_argument("--gc", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, SemanticError, FactsError, DerivationError, InvalidCertificate, HypothesisError,
            UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        detail = getattr(exc, "violations", None)
        for v in detail or ():
            print(f"  {v}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
