"""Command-line interface.

Exit codes: 0 for a decided query (or an accepted word), 1 for a rejected or
undefined verdict, 2 for malformed input and exhausted guards.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats, library
from .adic import AdicContext, DirectiveSequence, decide_up, is_congenial, relabel_for_finite_S
from .algebra import SubstitutionAlgebra, compose_classes, enumerate_classes
from .config import Config, get_config, set_config
from .dfa import witness
from .errors import (BoundaryError, BudgetExceeded, DigitRuleError, GuardExceeded, NotCongenialError,
                     ParseError, SadicError)
from .morphic import fixed_point_images, morphic_language_dfa, word_omega_value
from .omega import OmegaSemigroup, accepts_lasso, as_buchi
from .words import Substitution

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


# -- argument helpers -----------------------------------------------------------------

def load_automaton(spec: str):
    """A JSON file, or the name of a built-in automaton."""
    path = Path(spec)
    if path.exists():
        return formats.load_automaton(path)
    try:
        return library.automaton(spec)
    except KeyError:
        raise ParseError(f"no automaton file {spec!r} and no built-in of that name "
                         f"(built-ins: {', '.join(sorted(library.AUTOMATA))})") from None


def load_substitution_set(spec: str | None, d: int) -> dict:
    """DSL file of named substitutions, or the built-ins for ``d`` letters."""
    if spec is None:
        return library.substitutions(d)
    path = Path(spec)
    if path.exists():
        subs = formats.load_substitutions(path)
    else:
        builtins = library.substitutions(d)
        names = [n.strip() for n in spec.split(",")]
        missing = [n for n in names if n not in builtins]
        if missing:
            raise ParseError(f"no substitution file {spec!r} and unknown built-in(s) {', '.join(missing)}")
        subs = {n: builtins[n] for n in names}
    for n, s in subs.items():
        if s.size != d:
            raise ParseError(f"substitution {n!r} is over {s.size} letters but the automaton has {d}")
    return subs


def load_one_substitution(spec: str | None, d: int) -> Substitution:
    if spec is None:
        return Substitution.identity(d)
    subs = load_substitution_set(spec, d)
    if len(subs) != 1:
        raise ParseError(f"{spec!r} defines {len(subs)} substitutions; expected exactly one")
    return next(iter(subs.values()))


def parse_word(text: str, names) -> tuple:
    names = [str(n) for n in names]
    tokens = text.split() if " " in text.strip() else list(text.strip())
    try:
        return tuple(names.index(t) for t in tokens)
    except ValueError:
        raise ParseError(f"word {text!r} uses letters outside {names}") from None


def automaton_letters(aut) -> list:
    return list(getattr(aut, "letter_names", None) or [str(a) for a in aut.alphabet])


def emit(out, aut, path, name):
    if path:
        formats.emit(aut, path, name)
        print(f"wrote {path}", file=out)


# -- commands -----------------------------------------------------------------------------

def cmd_classes(args, out):
    aut = load_automaton(args.automaton)
    sg = OmegaSemigroup(as_buchi(aut))
    letters = automaton_letters(aut)
    print(f"semigroup: |M_f'| = {sg.size}, |M_w| = {len(sg.vectors)}", file=out)
    if args.subst_set:
        subs = load_substitution_set(args.subst_set, len(letters))
        alg = SubstitutionAlgebra(sg, generators=list(subs.values()))
        names = sorted(subs)
        classes = []
        owner = {}
        for n in names:
            xi = alg.class_of(subs[n])
            if xi not in classes:
                classes.append(xi)
            owner[n] = classes.index(xi)
        print(f"classes among {len(names)} substitutions: {len(classes)}", file=out)
        for i, xi in enumerate(classes):
            members = [n for n in names if owner[n] == i]
            print(f"class {i}: {' '.join(members)}", file=out)
            print(formats.format_substitution(subs[members[0]], members[0], letters), end="", file=out)
        # close under composition for the table, naming new classes by a witness
        closure = list(classes)
        labels = [next(n for n in names if owner[n] == i) for i in range(len(classes))]
        i = 0
        while i < len(closure) and len(closure) <= args.table_max:
            for j in range(len(classes)):
                c = compose_classes(closure[i], classes[j])
                if c not in closure:
                    closure.append(c)
                    labels.append(f"{labels[i]}∘{labels[j]}")
            i += 1
        if len(closure) <= args.table_max:
            print(f"generated monoid of classes: {len(closure)} elements", file=out)
            for k, lab in enumerate(labels):
                print(f"  [{k}] {lab}", file=out)
            print("composition table (row ∘ column):", file=out)
            for xi in closure:
                print("  " + " ".join(str(closure.index(compose_classes(xi, z))) for z in closure), file=out)
        else:
            print(f"generated monoid of classes has more than {args.table_max} elements; table omitted", file=out)
        return EXIT_OK
    alg = SubstitutionAlgebra(sg)
    found = enumerate_classes(alg, method=args.method)
    print(f"classes: {len(found)}", file=out)
    for i, (xi, sigma) in enumerate(found[:args.limit]):
        print(formats.format_substitution(sigma, f"class {i}", letters), end="", file=out)
    if len(found) > args.limit:
        print(f"... {len(found) - args.limit} more", file=out)
    if len(found) <= args.table_max:
        index = {xi: i for i, (xi, _) in enumerate(found)}
        print("composition table (row ∘ column):", file=out)
        for xi, _ in found:
            print("  " + " ".join(str(index[compose_classes(xi, zeta)]) for zeta, _ in found), file=out)
    return EXIT_OK


def _morphic_setup(args):
    aut = load_automaton(args.automaton)
    letters = automaton_letters(aut)
    d = len(letters)
    sigma = load_one_substitution(args.subst, d)
    pi = load_one_substitution(args.outer, d)
    sg = OmegaSemigroup(as_buchi(aut))
    alg = SubstitutionAlgebra(sg, generators=[sigma, pi])
    return aut, letters, sg, alg, alg.class_of(sigma), alg.class_of(pi)


def cmd_member_morphic(args, out):
    aut, letters, sg, alg, xi, zeta = _morphic_setup(args)
    u = parse_word(args.word, letters)
    v = word_omega_value(xi, zeta.compose(alg.index_L), u)
    if v.is_bottom:
        print("UNDEFINED (the iteration does not converge)", file=out)
        return EXIT_NO
    if v.is_finite:
        print("FINITE (the limit is a finite word)", file=out)
        return EXIT_NO
    ok = v.value in sg.accepting_omega
    print("ACCEPTED" if ok else "REJECTED", file=out)
    return EXIT_OK if ok else EXIT_NO


def cmd_morphic_lang(args, out):
    aut, letters, sg, alg, xi, zeta = _morphic_setup(args)
    dfa = morphic_language_dfa(xi, zeta)
    dfa.letter_names = tuple(letters)
    print(f"DFA: {dfa.n_states} states, {len(dfa.accepting)} accepting", file=out)
    w = witness(dfa)
    print("shortest seed: " + ("none" if w is None else ("ε" if not w else "".join(letters[a] for a in w))),
          file=out)
    if args.list is not None:
        for word in dfa.words_upto(args.list):
            print("  " + ("".join(letters[a] for a in word) or "ε"), file=out)
    emit(out, dfa, args.emit, "morphic_language")
    return EXIT_OK


def cmd_fixed_points(args, out):
    aut, letters, sg, alg, xi, zeta = _morphic_setup(args)
    images = sorted(fixed_point_images(xi, zeta.compose(alg.index_L)), key=lambda v: v.value)
    print(f"images of fixed points: {len(images)}", file=out)
    for v in images:
        flag = "accepted" if v.value in sg.accepting_omega else "rejected"
        print(f"  omega element {v.value}: {flag}", file=out)
    return EXIT_OK


def cmd_trace_automaton(args, out):
    aut = load_automaton(args.automaton)
    d = len(automaton_letters(aut))
    subs = load_substitution_set(args.subst_set, d)
    ctx = AdicContext(aut, subs)
    names = sorted(subs)
    if args.mode == "generated":
        lazy = relabel_for_finite_S(ctx.generated_automaton, names, ctx.class_index, letters=d)
    else:
        lazy = relabel_for_finite_S(ctx.directed_automaton(), names, ctx.class_index)
    m = lazy.materialize()
    print(f"{args.mode} automaton over {len(m.alphabet)} letters: {m.n_states} states, "
          f"{len(m.accepting)} accepting", file=out)
    emit(out, m, args.emit, f"{args.mode}_trace")
    return EXIT_OK


def cmd_decide(args, out):
    aut = load_automaton(args.automaton)
    d = len(automaton_letters(aut))
    subs = load_substitution_set(args.subst_set, d)
    pre, period = formats.parse_lasso(args.directive)
    letters = formats.parse_lasso(args.letters, letters=True) if args.letters else None
    try:
        seq = DirectiveSequence(pre, period, subs, letters)
    except (KeyError, ValueError) as e:
        raise ParseError(e.args[0] if e.args else str(e)) from None
    if letters is not None and not is_congenial(seq):
        print("NOT-CONGENIAL", file=out)
        return EXIT_NO
    mode = "generated" if letters is not None else "directed"
    ok = decide_up(seq, aut, mode=mode)
    print("ACCEPTED" if ok else "REJECTED", file=out)
    return EXIT_OK if ok else EXIT_NO


def cmd_sturmian(args, out):
    from . import sturmian as st

    cf = st.ContinuedFraction.parse(args.cf)
    digits = None
    if getattr(args, "ostrowski", None):
        pre, per = formats.parse_lasso(args.ostrowski, letters=True) if ";" in args.ostrowski \
            else (tuple(int(x) for x in args.ostrowski.split(",")), (0,))
        digits = st.OstrowskiDigits(cf, pre, per).validate()
    if args.action == "directive":
        seq = st.sturmian_directive(cf, digits)
        print(f"directive: {formats.format_lasso(seq.pre, seq.period)}", file=out)
        if args.len:
            print("word: " + "".join(map(str, st.directed_prefix(seq, args.len))), file=out)
        return EXIT_OK
    if args.action == "prefix":
        if digits is not None:
            chi = st.word_intercept(digits) if args.directed_intercept else st.OstrowskiValue(cf, digits)
        else:
            chi = st.as_real(args.chi)
        word = st.sturmian_prefix(cf, chi, args.len, args.variant)
        print("".join(map(str, word)), file=out)
        return EXIT_OK
    if args.action == "encode":
        b = st.ostrowski_encode(cf, args.chi, args.digits)
        print(",".join(map(str, b)), file=out)
        return EXIT_OK
    if args.action == "decode":
        if digits is None:
            raise ParseError("decode needs --ostrowski")
        import mpmath
        print(mpmath.nstr(st.ostrowski_decode(digits), 30), file=out)
        return EXIT_OK
    raise ParseError(f"unknown sturmian action {args.action!r}")


def cmd_ar_automaton(args, out):
    from .sturmian import ar_generators, build_ar_acceptance_automaton

    aut = load_automaton(args.automaton)
    if len(automaton_letters(aut)) != args.d:
        raise ParseError(f"automaton has {len(automaton_letters(aut))} letters, --d is {args.d}")
    ctx = AdicContext(aut, ar_generators(args.d))
    m = build_ar_acceptance_automaton(aut, args.d, ctx).materialize()
    print(f"Arnoux-Rauzy acceptance automaton: {m.n_states} states, {len(m.accepting)} accepting", file=out)
    status = EXIT_OK
    if args.check:
        pre, period = formats.parse_lasso(args.check)
        ok = accepts_lasso(m, pre, period)
        print(f"{formats.format_lasso(pre, period)}: {'ACCEPTED' if ok else 'REJECTED'}", file=out)
        status = EXIT_OK if ok else EXIT_NO
    emit(out, m, args.emit, "arnoux_rauzy")
    return status


def cmd_pq_experiment(args, out):
    from .sturmian import agreement_experiment, agreement_sweep

    aut = load_automaton(args.automaton)
    if args.sweep:
        reports, least = agreement_sweep(aut, args.N, args.trials, args.seed)
    else:
        reports, least = [agreement_experiment(aut, args.N, args.trials, args.seed)], None
    if args.json:
        print(json.dumps({"reports": [r.to_dict() for r in reports], "least_agreeing_N": least},
                         sort_keys=True), file=out)
    else:
        for r in reports:
            for line in r.lines():
                print(line, file=out)
        if args.sweep:
            print(f"least N without disagreement: {least}", file=out)
    return EXIT_OK


def cmd_selfcheck(args, out):
    from .crosscheck import run_suite

    summary = run_suite(args.cases, seed=args.seed)
    for line in summary.lines():
        print(line, file=out)
    return EXIT_OK if summary.passed == summary.cases else EXIT_NO


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sadic", description="Decide ω-regular properties of morphic and S-adic words.")
    p.add_argument("--config", help="JSON or YAML file with guard settings")
    sub = p.add_subparsers(dest="command", required=True)

    def with_automaton(sp):
        sp.add_argument("--automaton", required=True, help="JSON automaton file or built-in name")
        return sp

    sp = with_automaton(sub.add_parser("classes", help="classes of substitutions modulo the automaton"))
    sp.add_argument("--subst-set", help="classes of these substitutions only")
    sp.add_argument("--method", choices=["monoid", "automata"], default="monoid")
    sp.add_argument("--limit", type=int, default=20, help="witnesses to print")
    sp.add_argument("--table-max", type=int, default=12, help="print the composition table up to this many classes")
    sp.set_defaults(func=cmd_classes)

    for name, func, helptext in (("member-morphic", cmd_member_morphic, "is π(σ^ω(u)) accepted?"),
                                 ("morphic-lang", cmd_morphic_lang, "DFA of seeds u with π(σ^ω(u)) accepted"),
                                 ("fixed-points", cmd_fixed_points, "images of the fixed points of σ")):
        sp = with_automaton(sub.add_parser(name, help=helptext))
        sp.add_argument("--subst", required=True, help="DSL file with σ, or a built-in name")
        sp.add_argument("--outer", help="DSL file with π, or a built-in name (default: identity)")
        if name == "member-morphic":
            sp.add_argument("--word", required=True, help="seed word u")
        if name == "morphic-lang":
            sp.add_argument("--emit", help="write the DFA (.json or .dot)")
            sp.add_argument("--list", type=int, metavar="N", help="list accepted seeds up to length N")
        sp.set_defaults(func=func)

    sp = with_automaton(sub.add_parser("trace-automaton", help="automaton over directive sequences"))
    sp.add_argument("--subst-set", help="DSL file or comma-separated built-in names (default: all built-ins)")
    sp.add_argument("--mode", choices=["generated", "directed"], default="generated")
    sp.add_argument("--emit", help="write the automaton (.json or .dot)")
    sp.set_defaults(func=cmd_trace_automaton)

    sp = with_automaton(sub.add_parser("decide", help="decide an ultimately periodic directive sequence"))
    sp.add_argument("--directive", required=True, help='"pre; period" of substitution names')
    sp.add_argument("--letters", help='"pre; period" letter augmentation (generated word); omit for directed')
    sp.add_argument("--subst-set", help="DSL file or comma-separated built-in names")
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("sturmian", help="continued fractions, Ostrowski digits and Sturmian words")
    sp.add_argument("action", choices=["directive", "prefix", "encode", "decode"])
    sp.add_argument("--cf", required=True, help='slope digits "a1,a2,...", "pre; period" or "2,1,1,..."')
    sp.add_argument("--ostrowski", help='intercept digits "b1,b2,..." or "pre; period"')
    sp.add_argument("--chi", default="0", help="intercept as a decimal or fraction (prefix/encode)")
    sp.add_argument("--len", type=int, default=0, help="number of letters to print")
    sp.add_argument("--variant", choices=["floor", "ceiling"], default="floor")
    sp.add_argument("--directed-intercept", action="store_true",
                    help="with --ostrowski: use the intercept of the word the digits direct")
    sp.add_argument("--digits", type=int, default=40, help="digits to produce (encode)")
    sp.set_defaults(func=cmd_sturmian)

    sp = with_automaton(sub.add_parser("ar-automaton", help="automaton for Arnoux-Rauzy words in L(A)"))
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--emit", help="write the automaton (.json or .dot)")
    sp.add_argument("--check", help='also run one "pre; period" sequence of generator names')
    sp.set_defaults(func=cmd_ar_automaton)

    sp = with_automaton(sub.add_parser("pq-experiment", help="partial-quotient agreement experiment"))
    sp.add_argument("--N", type=int, default=3)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sweep", action="store_true", help="run every N from 0 up to --N")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_pq_experiment)

    sp = sub.add_parser("selfcheck", help="cross-pipeline agreement on random cases")
    sp.add_argument("--cases", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    previous = get_config()
    try:
        config = Config.from_env(get_config())
        if args.config:
            config = Config.from_file(args.config, config)
        set_config(config)
        return args.func(args, out)
    except (ParseError, GuardExceeded, BudgetExceeded, BoundaryError, DigitRuleError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except NotCongenialError:
        print("NOT-CONGENIAL", file=out)
        return EXIT_NO
    except (SadicError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    finally:
        set_config(previous)


if __name__ == "__main__":
    sys.exit(main())
