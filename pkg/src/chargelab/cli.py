"""Command-line front end: ``chargelab <command> --instance FILE [flags]``.

Exit codes: 0 affirmative, 1 negative with witness, 2 parse error,
3 universe mismatch, 4 invariant violation or other rejected input,
5 unknown command or missing section, 6 period limit exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from itertools import combinations

from ._text import fmt_q, split_top
from .charges import absolute_continuity_witness, lebesgue_decompose, limit_along_decreasing
from .compactness import (COMPATIBLE, inner_measure, psi_functional, usa_test,
                          weak_compactness_check)
from .domination import (NotSingular, control_coefficients, control_measure,
                         find_separating_element, maximal_orthogonal_subfamily,
                         singular_witness_sequence)
from .epset import generate_subalgebra
from .errors import (ChargeLabError, InvariantViolation, ParseError, PeriodLimitExceeded,
                     UniverseMismatch)
from .families import (QuasiDisjointnessViolation, almost_disjoint_family, cc_failures,
                       quasi_disjoint_census)
from .instance import parse_instance
from .sequences import (ElementSequence, HypothesisFailed, bounds_mod_finite,
                        exp_rate_membership, is_quasi_disjoint, sandwich, sandwich_cutoff)

EXIT_OK, EXIT_NEGATIVE, EXIT_PARSE, EXIT_UNIVERSE, EXIT_INVARIANT, EXIT_USAGE, EXIT_PERIOD = range(7)


class UsageError(Exception):
    """Unknown command, missing section or missing flag."""


class Report:
    def __init__(self):
        self.rows = []
        self.code = EXIT_OK

    def add(self, key, value):
        if isinstance(value, Fraction):
            value = fmt_q(value)
        elif isinstance(value, bool):
            value = str(value).lower()
        elif hasattr(value, "text"):
            value = value.text()
        self.rows.append((key, str(value)))

    def render(self, style):
        if style == "tsv":
            return "".join(f"{k}\t{v}\n" for k, v in self.rows)
        return "".join(f"{k}: {v}\n" for k, v in self.rows)


# -- instance lookups ---------------------------------------------------------

def _pick(inst, section, key):
    entries = inst.section(section)
    name = inst.query.get(key)
    if name is None:
        if not entries:
            raise UsageError(f"command needs a [{section}] section")
        name = next(iter(entries))
    if name not in entries:
        raise UsageError(f"[query] {key} = {name!r} is not in [{section}]")
    return name, entries[name]


def _pick_list(inst, section, key):
    entries = inst.section(section)
    if key in inst.query:
        names = [n.strip() for n in inst.query[key].split(",") if n.strip()]
    else:
        names = list(entries)
    if not entries and names == []:
        raise UsageError(f"command needs a [{section}] section")
    for n in names:
        if n not in entries:
            raise UsageError(f"[query] {key} lists {n!r}, which is not in [{section}]")
    return names, [entries[n] for n in names]


def _need(value, flag):
    if value is None:
        raise UsageError(f"command needs {flag}")
    return value


# -- separator predicates -----------------------------------------------------

def _predicate(text, inst, algebra):
    parts = [p.strip() for p in split_top(text, "&")]
    preds = [_atom_predicate(p, inst, algebra) for p in parts]
    return lambda a: all(p(a) for p in preds)


def _atom_predicate(text, inst, algebra):
    name, _, arg = text.partition("(")
    arg = arg[:-1].strip() if arg.endswith(")") else None
    if name == "top" and arg is None:
        return lambda a: a.is_full()
    if arg is None:
        raise ParseError(f"bad predicate {text!r}")
    if name == "contains":
        p = int(arg)
        return lambda a: p in a
    if name == "min-size":
        k = int(arg)
        return lambda a: not a.is_finite() or len(a) >= k
    if name == "min-atoms":
        k = int(arg)
        return lambda a: algebra.atom_count(a) >= k
    if name == "positive":
        if arg not in inst.charges:
            raise UsageError(f"unknown charge {arg!r} in predicate")
        mu = inst.charges[arg]
        return lambda a: mu.evaluate(a) > 0
    raise ParseError(f"unknown predicate {name!r} (contains, min-size, min-atoms, positive, top)")


# -- commands -----------------------------------------------------------------

def cmd_eval(inst, args, r):
    cname, mu = _pick(inst, "charges", "charge")
    sname, a = _pick(inst, "sets", "set")
    r.add("charge", cname)
    r.add("set", sname)
    r.add("value", mu.evaluate(a))


def cmd_density(inst, args, r):
    sname, a = _pick(inst, "sets", "set")
    r.add("set", sname)
    r.add("density", a.density())


def cmd_ac_check(inst, args, r):
    mname, mu = _pick(inst, "charges", "charge")
    nname, nu = _pick(inst, "charges", "nu")
    found = absolute_continuity_witness(mu, nu)
    r.add("mu", mname)
    r.add("nu", nname)
    r.add("absolutely_continuous", found is None)
    if found is not None:
        seq, eps = found
        r.add("witness", seq)
        r.add("witness_eps", eps)
        r.code = EXIT_NEGATIVE


def cmd_decompose(inst, args, r):
    _, mu = _pick(inst, "charges", "charge")
    _, nu = _pick(inst, "charges", "nu")
    ac, s, w = lebesgue_decompose(mu, nu)
    r.add("ac", ac)
    r.add("singular", s)
    r.add("witness", w)


def _finite_family(inst):
    name, entry = _pick(inst, "families", "family")
    if entry.names is None:
        raise InvariantViolation(f"family {name} must be finite for this command")
    return name, entry


def cmd_control(inst, args, r):
    name, entry = _finite_family(inst)
    order = None
    if args.order is not None:
        try:
            order = [int(x) for x in args.order.split(",") if x.strip()]
        except ValueError:
            raise ParseError(f"bad --order {args.order!r}")
    coeffs = control_coefficients(entry.family, order)
    r.add("family", name)
    for n, c in zip(entry.names, coeffs):
        r.add(f"coefficient[{n}]", c)
    r.add("control", control_measure(entry.family, order))


def cmd_orthogonal(inst, args, r):
    name, entry = _finite_family(inst)
    chosen = maximal_orthogonal_subfamily(entry.family)
    names, i = [], 0
    for n, mu in zip(entry.names, entry.family.members):
        if i < len(chosen) and chosen[i] is mu:
            names.append(n)
            i += 1
    r.add("family", name)
    r.add("subfamily", ",".join(names))


def cmd_separator(inst, args, r):
    names, gens = _pick_list(inst, "sets", "algebra")
    algebra = generate_subalgebra(gens, gens[0].universe if gens else None)
    f = _predicate(_need(inst.query.get("f"), "[query] f"), inst, algebra)
    g = _predicate(inst.query.get("g", inst.query["f"]), inst, algebra)
    x0 = find_separating_element(algebra, f, g)
    r.add("algebra", ",".join(names))
    r.add("elements", len(algebra))
    r.add("separator", x0)


def cmd_singular_witness(inst, args, r):
    _, nu = _pick(inst, "charges", "nu")
    name, entry = _pick(inst, "families", "family")
    t = Fraction(_need(args.t, "--t"))
    try:
        tau = singular_witness_sequence(nu, entry.family, t)
    except NotSingular as exc:
        r.add("singular", False)
        r.add("offending_member", exc.member)
        r.code = EXIT_NEGATIVE
        return
    r.add("family", name)
    r.add("tau", tau)
    r.add("nu_limit", tau.limsup(nu))
    r.add("family_limit", entry.family.sup_of_limsups(tau))


def cmd_seq_eval(inst, args, r):
    name, s = _pick(inst, "sequences", "sequence")
    k = 8 if args.k is None else args.k
    r.add("sequence", name)
    if not isinstance(s, ElementSequence):
        raise InvariantViolation("seq-eval needs an eventually periodic sequence")
    for n in range(k):
        r.add(f"coordinate[{n}]", s.coordinate(n))


def cmd_limsup(inst, args, r):
    cname, m = _pick(inst, "charges", "charge")
    sname, s = _pick(inst, "sequences", "sequence")
    r.add("charge", cname)
    r.add("sequence", sname)
    r.add("limsup", s.limsup(m))
    if s.is_decreasing() and isinstance(s, ElementSequence):
        r.add("limit_charge", limit_along_decreasing(m, s))


def cmd_quasidisjoint(inst, args, r):
    names, seqs = _pick_list(inst, "sequences", "sequences")
    if len(seqs) < 2:
        raise UsageError("quasidisjoint needs two sequences")
    ok = True
    for (i, a), (j, b) in combinations(enumerate(seqs), 2):
        verdict = is_quasi_disjoint(a, b)
        r.add(f"pair[{names[i]},{names[j]}]", verdict)
        ok = ok and verdict
    r.add("quasi_disjoint", ok)
    r.code = EXIT_OK if ok else EXIT_NEGATIVE


def cmd_bounds(inst, args, r):
    _, seqs = _pick_list(inst, "sequences", "sequences")
    upper, lower = bounds_mod_finite(seqs)
    r.add("upper", upper)
    r.add("lower", lower)


def cmd_sandwich(inst, args, r):
    sname, s = _pick(inst, "sequences", "sequence")
    nname, nu = _pick(inst, "charges", "nu")
    eps = Fraction(_need(args.eps, "--eps"))
    r.add("sequence", sname)
    r.add("nu", nname)
    if not exp_rate_membership(s, nu):
        try:
            sandwich_cutoff(s, nu, eps)
        except HypothesisFailed as exc:
            r.add("hypothesis", False)
            r.add("witness_n", exc.index)
            r.add("witness_k", exc.partner)
            r.code = EXIT_NEGATIVE
            return
    tau, ups = sandwich(s, nu, eps)
    r.add("cutoff", sandwich_cutoff(s, nu, eps))
    r.add("tau", tau)
    r.add("ups", ups)
    r.add("nu_tau", tau.limsup(nu))
    r.add("nu_sigma", s.limsup(nu))
    r.add("nu_ups", ups.limsup(nu))


def cmd_adfamily(inst, args, r):
    k = _need(args.k, "--k")
    branches = almost_disjoint_family(k)
    for i, b in enumerate(branches):
        r.add(f"branch[{i}]", b)
    for i, j in combinations(range(k), 2):
        r.add(f"intersection[{i},{j}]", branches[i].intersection_size(branches[j]))


def cmd_census(inst, args, r):
    names, seqs = _pick_list(inst, "sequences", "sequences")
    _, nu = _pick(inst, "charges", "nu")
    eps = Fraction(_need(args.eps, "--eps"))
    try:
        rep = quasi_disjoint_census(seqs, nu, eps)
    except QuasiDisjointnessViolation as exc:
        i, j = exc.pair
        r.add("quasi_disjoint", False)
        r.add("violating_pair", f"{names[i]},{names[j]}")
        r.code = EXIT_NEGATIVE
        return
    for n, v in zip(names, rep.values):
        r.add(f"limsup[{n}]", v)
    r.add("census", ",".join(names[i] for i in rep.indices))
    r.add("size", len(rep.indices))
    r.add("bound", rep.bound)
    r.add("total", rep.total)
    r.add("norm", rep.norm)


def cmd_cc(inst, args, r):
    names, elements = _pick_list(inst, "sets", "elements")
    fname, entry = _pick(inst, "families", "family")
    failures = cc_failures(elements, entry.family)
    failed = [n for n, a in zip(names, elements) if a in failures]
    r.add("family", fname)
    r.add("cc", not failed)
    if failed:
        r.add("witness", ",".join(failed))
        r.code = EXIT_NEGATIVE


def cmd_inner(inst, args, r):
    _, m = _pick(inst, "charges", "charge")
    sname, b = _pick(inst, "sets", "set")
    names, gens = _pick_list(inst, "sets", "algebra")
    sub = generate_subalgebra(gens, b.universe)
    r.add("set", sname)
    r.add("algebra", ",".join(names))
    r.add("inner", inner_measure(m, b, sub))
    r.add("outer_value", m.evaluate(b))


def cmd_psi(inst, args, r):
    fname, entry = _pick(inst, "families", "family")
    gname, gen = _pick(inst, "generators", "generator")
    sname, e = _pick(inst, "sets", "set")
    r.add("family", fname)
    r.add("generator", gname)
    r.add("set", sname)
    r.add("psi", psi_functional(entry.family, gen, e))


def cmd_usa(inst, args, r):
    fname, entry = _pick(inst, "families", "family")
    _, gens = _pick_list(inst, "generators", "generators")
    verdict = usa_test(entry.family, gens)
    r.add("family", fname)
    r.add("result", verdict)
    if not verdict.passed:
        r.add("witness_verified", verdict.witness.verify(entry.family))
        r.code = EXIT_NEGATIVE
    else:
        r.add("certificate_verified", verdict.certificate.verify(entry.family))


def cmd_wc_check(inst, args, r):
    fname, entry = _pick(inst, "families", "family")
    _, gens = _pick_list(inst, "generators", "generators")
    verdict = weak_compactness_check(entry.family, gens)
    r.add("family", fname)
    r.add("result", verdict)
    if verdict.kind != COMPATIBLE:
        r.code = EXIT_NEGATIVE


COMMANDS = {
    "eval": cmd_eval,
    "ac-check": cmd_ac_check,
    "decompose": cmd_decompose,
    "control": cmd_control,
    "orthogonal": cmd_orthogonal,
    "separator": cmd_separator,
    "singular-witness": cmd_singular_witness,
    "seq-eval": cmd_seq_eval,
    "limsup": cmd_limsup,
    "quasidisjoint": cmd_quasidisjoint,
    "bounds": cmd_bounds,
    "sandwich": cmd_sandwich,
    "adfamily": cmd_adfamily,
    "census": cmd_census,
    "cc": cmd_cc,
    "inner": cmd_inner,
    "psi": cmd_psi,
    "usa": cmd_usa,
    "wc-check": cmd_wc_check,
    "density": cmd_density,
}

# commands that work without an instance file
_NO_INSTANCE = {"adfamily"}


def build_parser():
    p = argparse.ArgumentParser(prog="chargelab", description=__doc__.splitlines()[0])
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("--instance", help="instance file")
    p.add_argument("--eps", help="positive rational p/q")
    p.add_argument("--t", help="rational in (0, 1)")
    p.add_argument("--order", help="comma separated member indices")
    p.add_argument("--k", type=int, help="integer parameter")
    p.add_argument("--report", choices=("text", "tsv"), default="text")
    return p


def run_command(command, instance, args):
    """Run ``command`` on a parsed instance; returns ``(report, exit_code)``."""
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}")
    r = Report()
    r.add("command", command)
    COMMANDS[command](instance, args, r)
    return r, r.code


def _exit_code(exc):
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, UniverseMismatch):
        return EXIT_UNIVERSE
    if isinstance(exc, PeriodLimitExceeded):
        return EXIT_PERIOD
    if isinstance(exc, (ChargeLabError, ValueError)):
        return EXIT_INVARIANT
    return None


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command not in COMMANDS:
            raise UsageError(f"unknown command {args.command!r}")
        if args.instance is None:
            if args.command not in _NO_INSTANCE:
                raise UsageError("--instance is required for this command")
            from .instance import Instance
            inst = Instance()
        else:
            inst = parse_instance(args.instance)
        report, code = run_command(args.command, inst, args)
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (UsageError, ChargeLabError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return _exit_code(exc)
    stdout.write(report.render(args.report))
    return code


if __name__ == "__main__":
    sys.exit(main())
