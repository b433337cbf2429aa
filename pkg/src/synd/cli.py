"""Command line interface: one binary, one subcommand group per module.

Exit codes: 0 on success, 1 on domain errors (with the error's stable
code in the report), 2 on malformed inputs or bad usage.  JSON reports
carry ``schema: 1`` and are byte-deterministic for a given invocation.
The environment variable ``SYND_PRECISION_BITS`` overrides the default
128-bit precision used when reporting algebraic rates.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import formats
from .automata import complete, minimize, check_l_automaton, incidence_matrix, product_l_automaton
from .errors import ParseError, SyndError
from .gaps import (factor_gap_report, kprime_check, letter_gap_report,
                   scaling_fit)
from .growth import (automaton_growth, growth_automaton, lambda_coefficient,
                     letter_growth, substitution_growth)
from .independence import (classify_substitutions, independent_growth_types,
                           DEFAULT_K_MAX)
from .growth import AlgebraicRate, GrowthType
from .numeration import (AbstractNumerationSystem, RecognizableSet,
                         characteristic_stream, enumerate_words, rep, val)
from .periodicity import cobham_check
from .substitution import (Morphism, block_substitution,
                           canonical_substitution, char_morphism,
                           eliminate_erasing, fixed_point, mortal_letters,
                           power, project, stabilization_power)

SCHEMA = 1

# Reachability of every library operation from a subcommand; the test
# suite checks this table against the public API.
OPERATION_COMMANDS = {
    "automata.trim": "ans enumerate",
    "automata.minimize": "ans enumerate",
    "automata.complete": "ans chi",
    "automata.product_l_automaton": "ans chi",
    "automata.check_l_automaton": "ans chi",
    "automata.count_words": "ans rep",
    "automata.incidence_matrix": "growth automaton",
    "numeration.enumerate_words": "ans enumerate",
    "numeration.rep": "ans rep",
    "numeration.val": "ans val",
    "numeration.characteristic_stream": "ans chi",
    "substitution.canonical_substitution": "subst from-dfa",
    "substitution.char_morphism": "ans chi",
    "substitution.fixed_point": "subst fixpoint",
    "substitution.project": "subst project",
    "substitution.power": "subst fixpoint",
    "substitution.mortal_letters": "subst eliminate-erasing",
    "substitution.eliminate_erasing": "subst eliminate-erasing",
    "substitution.stabilization_power": "subst stabilize",
    "substitution.block_substitution": "subst blocks",
    "growth.growth_automaton": "growth analyze",
    "growth.regularization_power": "growth analyze",
    "growth.letter_growth": "growth analyze",
    "growth.substitution_growth": "growth analyze",
    "growth.lambda_coefficient": "growth analyze",
    "growth.automaton_growth": "growth automaton",
    "independence.multiplicatively_independent": "indep classify",
    "independence.independent_growth_types": "indep classify",
    "independence.substitutions_independent": "indep subst",
    "gaps.max_uniform_block": "gaps scaling",
    "gaps.gap_of_word": "gaps kprime",
    "gaps.letter_gap_report": "gaps letter",
    "gaps.factor_gap_report": "gaps factor",
    "gaps.scaling_fit": "gaps scaling",
    "gaps.kprime_check": "gaps kprime",
    "periodicity.detect_ultimate_period": "cobham check",
    "periodicity.power_word_scan": "cobham check",
    "periodicity.cobham_check": "cobham check",
    "periodicity.progressions_of": "cobham check",
}


def precision_bits():
    raw = os.environ.get("SYND_PRECISION_BITS", "128")
    try:
        return max(8, int(raw))
    except ValueError:
        return 128


def _emit_json(payload):
    payload = dict(payload)
    payload.setdefault("schema", SCHEMA)
    print(json.dumps(payload, sort_keys=True))


def _emit_rows(rows, header, out):
    if out == "csv":
        print(header)
        for row in rows:
            print(",".join(str(x) for x in row))
    else:
        for row in rows:
            print(" ".join(str(x) for x in row))


def _load_system(path):
    return AbstractNumerationSystem(formats.load_dfa(path))


def _word_arg(text):
    return tuple(text) if text else ()


def _refined(rate):
    if rate.kind == "root":
        rate.refine(Fraction(1, 2 ** precision_bits()))
    return rate


# ---------------------------------------------------------------- ans

def _cmd_ans_enumerate(args):
    system = _load_system(args.system)
    words = enumerate_words(system, args.count)
    if args.out == "json":
        _emit_json({"words": ["".join(map(str, w)) for w in words]})
    else:
        rows = [(i, "".join(map(str, w))) for i, w in enumerate(words)]
        _emit_rows(rows, "index,word", args.out)
    return 0


def _cmd_ans_rep(args):
    system = _load_system(args.system)
    print("".join(map(str, rep(system, args.index))))
    return 0


def _cmd_ans_val(args):
    system = _load_system(args.system)
    print(val(system, _word_arg(args.word)))
    return 0


def _chi_substitutive(system, recognizer, n):
    """Characteristic bits through the substitutive pipeline: product
    automaton, canonical substitution, characteristic projection."""
    product, phi = product_l_automaton(recognizer, system.canonical)
    verified = check_l_automaton(product, system.canonical)
    if verified is None:
        raise SyndError("product automaton failed verification")
    sigma = canonical_substitution(product, seed="#")
    f = char_morphism(product, phi, system.canonical.finals, seed="#")
    return project(f, fixed_point(sigma, "#")).prefix(n)


def _cmd_ans_chi(args):
    system = _load_system(args.system)
    recognizer = complete(formats.load_dfa(args.recognizer))
    recognizable = RecognizableSet(system, recognizer)
    if args.method == "substitutive":
        bits = _chi_substitutive(system, recognizer, args.prefix)
    else:
        bits = characteristic_stream(recognizable).prefix(args.prefix)
    if args.out == "json":
        _emit_json({"bits": list(bits)})
    else:
        _emit_rows(list(enumerate(bits)), "index,bit", args.out)
    return 0


# ---------------------------------------------------------------- subst

def _cmd_subst_from_dfa(args):
    d = formats.load_dfa(args.dfa)
    sigma = canonical_substitution(minimize(d) if args.minimize else d,
                                   seed=args.seed)
    sys.stdout.write(formats.dump_rules(sigma.images, sigma.alphabet))
    return 0


def _load_subst(args):
    sigma = formats.load_substitution(args.rules)
    if getattr(args, "power", 1) and args.power > 1:
        sigma = power(sigma, args.power)
    return sigma


def _cmd_subst_fixpoint(args):
    sigma = _load_subst(args)
    seed = args.seed or sigma.alphabet[0]
    stream = fixed_point(sigma, seed)
    print("".join(map(str, stream.prefix(args.prefix))))
    return 0


def _cmd_subst_project(args):
    sigma = formats.load_substitution(args.rules)
    morphism = formats.load_morphism(args.morphism)
    seed = args.seed or sigma.alphabet[0]
    stream = project(morphism, fixed_point(sigma, seed))
    print("".join(map(str, stream.prefix(args.prefix))))
    return 0


def _cmd_subst_blocks(args):
    sigma = formats.load_substitution(args.rules)
    seed = args.seed or sigma.alphabet[0]
    stream = fixed_point(sigma, seed)
    sigma_n, rho = block_substitution(sigma, stream, args.n)
    blocks = {"".join(map(str, b)): ["".join(map(str, x))
                                     for x in sigma_n.images[b]]
              for b in sigma_n.alphabet}
    _emit_json({"n": args.n, "blocks": blocks,
                "projection": {"".join(map(str, b)): str(rho.images[b][0])
                               for b in sigma_n.alphabet}})
    return 0


def _cmd_subst_eliminate_erasing(args):
    sigma = formats.load_substitution(args.rules)
    seed = args.seed or sigma.alphabet[0]
    mortal, level = mortal_letters(sigma)
    tau, zeta = eliminate_erasing(sigma, seed)
    _emit_json({"mortal": sorted(map(str, mortal)), "level": level,
                "rules": {str(a): "".join(map(str, tau.images[a]))
                          for a in tau.alphabet},
                "erased": sorted(str(a) for a in sigma.alphabet
                                 if not zeta.images[a])})
    return 0


def _cmd_subst_stabilize(args):
    sigma = formats.load_substitution(args.rules)
    print(stabilization_power(sigma))
    return 0


# ---------------------------------------------------------------- growth

def _growth_report(sigma, word=None):
    analysis = letter_growth(sigma)
    _refined(analysis.theta)
    for t in analysis.letter_types.values():
        if t is not None:
            _refined(t.rate)
    report = analysis.to_json()
    graph = growth_automaton(sigma)
    report["expansion"] = {str(a): {str(b): m for b, m in graph.edges[a].items()}
                           for a in graph.nodes}
    report["growth"] = substitution_growth(analysis).to_json()
    if word is not None:
        estimate = lambda_coefficient(analysis, _word_arg(word))
        report["lambda"] = {"word": word, **estimate.to_json()}
    return report


def _cmd_growth_analyze(args):
    sigma = formats.load_substitution(args.rules)
    report = _growth_report(sigma, args.word)
    if args.json:
        _emit_json(report)
    else:
        for entry in report["letters"]:
            if entry.get("mortal"):
                print(f"{entry['letter']}: mortal")
            else:
                rate = entry["rate"]
                print(f"{entry['letter']}: degree {entry['degree']}, "
                      f"rate {rate['kind']} ~ {rate['approx']:.12g}")
        print(f"p={report['p']} D={report['D']} "
              f"Theta~{report['Theta']['approx']:.12g} "
              f"A_max={','.join(report['A_max'])}")
        if "lambda" in report:
            print(f"lambda({args.word}) = {report['lambda']['value']:.12g} "
                  f"+- {report['lambda']['error']:.3g}")
    return 0


def _cmd_growth_automaton(args):
    d = formats.load_dfa(args.dfa)
    analysis = automaton_growth(d)
    if analysis.system is not None:
        _refined(analysis.system.rate)
    report = analysis.to_json()
    report["incidence"] = incidence_matrix(d)
    if args.json:
        _emit_json(report)
    else:
        growth = report["growth"]
        if growth is None:
            print("finite counting sequences (no growth)")
        else:
            print(f"growth: degree {growth['degree']}, "
                  f"rate {growth['rate']['kind']} ~ "
                  f"{growth['rate']['approx']:.12g} (p={report['p']})")
    return 0


# ---------------------------------------------------------------- indep

def _parse_growth_arg(text, k_max):
    if "," in text:
        d_text, _, a_text = text.partition(",")
        try:
            d, a = int(d_text), int(a_text)
        except ValueError:
            raise ParseError(f"expected 'd,alpha' integers, got {text!r}")
        return GrowthType(d, AlgebraicRate.from_integer(a))
    sigma = formats.load_substitution(text)
    return substitution_growth(letter_growth(sigma))


def _cmd_indep_classify(args):
    g1 = _parse_growth_arg(args.g1, args.k_max)
    g2 = _parse_growth_arg(args.g2, args.k_max)
    verdict = independent_growth_types(g1, g2, k_max=args.k_max,
                                       strict_paper=args.strict_paper)
    _emit_json({"g1": g1.to_json(), "g2": g2.to_json(),
                "verdict": verdict.to_json(),
                "strict_paper": args.strict_paper})
    return 0


def _cmd_indep_subst(args):
    sigma1 = formats.load_substitution(args.rules1)
    sigma2 = formats.load_substitution(args.rules2)
    report = classify_substitutions(sigma1, sigma2, k_max=args.k_max,
                                    strict_paper=args.strict_paper)
    _emit_json(report.to_json())
    return 0


# ---------------------------------------------------------------- gaps

def _gap_stream(args):
    sigma = formats.load_substitution(args.rules)
    seed = args.seed or sigma.alphabet[0]
    stream = fixed_point(sigma, seed)
    if getattr(args, "project", None):
        stream = project(formats.load_morphism(args.project), stream)
    return sigma, stream


def _emit_gap_report(report, args):
    if args.out == "json":
        _emit_json(report.to_json())
    else:
        _emit_rows(report.samples, "checkpoint,max_gap", args.out)
        if args.out == "text":
            print(f"verdict: {report.verdict} (max gap {report.max_gap}, "
                  f"{report.occurrences} occurrences)")
    return 0


def _cmd_gaps_letter(args):
    _, stream = _gap_stream(args)
    report = letter_gap_report(stream, args.target, args.prefix,
                               samples=args.samples)
    return _emit_gap_report(report, args)


def _cmd_gaps_factor(args):
    _, stream = _gap_stream(args)
    report = factor_gap_report(stream, _word_arg(args.word), args.prefix,
                               samples=args.samples)
    return _emit_gap_report(report, args)


def _parse_params(text):
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip().replace("'", "_prime")
        if key in ("dp", "d_p"):
            key = "d_prime"
        if key in ("alphap", "alpha_p"):
            key = "alpha_prime"
        try:
            out[key] = float(value)
        except ValueError:
            raise ParseError(f"bad parameter {item!r}")
    return out


def _cmd_gaps_scaling(args):
    _, stream = _gap_stream(args)
    fit = scaling_fit(stream, set(args.targets), args.case,
                      _parse_params(args.params), args.n_max,
                      tolerance=args.tolerance)
    if args.out == "csv":
        _emit_rows(fit.checkpoints, "checkpoint,m", "csv")
    else:
        _emit_json(fit.to_json())
    return 0


def _cmd_gaps_kprime(args):
    sigma = formats.load_substitution(args.rules)
    if args.project and args.project != "id":
        morphism = formats.load_morphism(args.project)
    else:
        morphism = Morphism.identity(sigma.alphabet)
    report = kprime_check(sigma, morphism, args.target, n_max=args.n_max)
    _emit_json(report.to_json())
    return 0


# ---------------------------------------------------------------- cobham

def _parse_pipeline(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ParseError(
            f"expected 'rules:seed:projection', got {text!r}")
    rules_path, seed, projection = parts
    sigma = formats.load_substitution(rules_path)
    if projection == "id":
        morphism = Morphism.identity(sigma.alphabet)
    else:
        morphism = formats.load_morphism(projection)
    return sigma, seed, morphism


def _cmd_cobham_check(args):
    spec1 = _parse_pipeline(args.s1)
    spec2 = _parse_pipeline(args.s2)
    report = cobham_check(spec1, spec2, prefix=args.prefix,
                          max_period=args.max_period, k_max=args.k_max)
    _emit_json(report.to_json())
    return 0


# ---------------------------------------------------------------- parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="synd",
        description="abstract numeration systems, substitutions and "
                    "syndeticity analysis")
    top = parser.add_subparsers(dest="group", required=True)

    ans = top.add_parser("ans", help="abstract numeration systems")
    ans_sub = ans.add_subparsers(dest="command", required=True)
    p = ans_sub.add_parser("enumerate")
    p.add_argument("system")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=_cmd_ans_enumerate)
    p = ans_sub.add_parser("rep")
    p.add_argument("system")
    p.add_argument("index", type=int)
    p.set_defaults(func=_cmd_ans_rep)
    p = ans_sub.add_parser("val")
    p.add_argument("system")
    p.add_argument("word")
    p.set_defaults(func=_cmd_ans_val)
    p = ans_sub.add_parser("chi")
    p.add_argument("system")
    p.add_argument("recognizer")
    p.add_argument("--prefix", type=int, default=100)
    p.add_argument("--out", choices=("text", "json", "csv"), default="csv")
    p.add_argument("--method", choices=("direct", "substitutive"),
                   default="direct")
    p.set_defaults(func=_cmd_ans_chi)

    subst = top.add_parser("subst", help="substitutions and morphisms")
    subst_sub = subst.add_subparsers(dest="command", required=True)
    p = subst_sub.add_parser("from-dfa")
    p.add_argument("dfa")
    p.add_argument("--seed", default="s")
    p.add_argument("--minimize", action="store_true")
    p.set_defaults(func=_cmd_subst_from_dfa)
    p = subst_sub.add_parser("fixpoint")
    p.add_argument("rules")
    p.add_argument("--seed")
    p.add_argument("--prefix", type=int, default=100)
    p.add_argument("--power", type=int, default=1)
    p.set_defaults(func=_cmd_subst_fixpoint)
    p = subst_sub.add_parser("project")
    p.add_argument("rules")
    p.add_argument("morphism")
    p.add_argument("--seed")
    p.add_argument("--prefix", type=int, default=100)
    p.set_defaults(func=_cmd_subst_project)
    p = subst_sub.add_parser("blocks")
    p.add_argument("rules")
    p.add_argument("--seed")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_subst_blocks)
    p = subst_sub.add_parser("eliminate-erasing")
    p.add_argument("rules")
    p.add_argument("--seed")
    p.set_defaults(func=_cmd_subst_eliminate_erasing)
    p = subst_sub.add_parser("stabilize")
    p.add_argument("rules")
    p.set_defaults(func=_cmd_subst_stabilize)

    growth = top.add_parser("growth", help="growth-type analysis")
    growth_sub = growth.add_subparsers(dest="command", required=True)
    p = growth_sub.add_parser("analyze")
    p.add_argument("rules")
    p.add_argument("--json", action="store_true")
    p.add_argument("--word")
    p.set_defaults(func=_cmd_growth_analyze)
    p = growth_sub.add_parser("automaton")
    p.add_argument("dfa")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_growth_automaton)

    indep = top.add_parser("indep", help="independence classification")
    indep_sub = indep.add_subparsers(dest="command", required=True)
    p = indep_sub.add_parser("classify")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--strict-paper", action="store_true")
    p.set_defaults(func=_cmd_indep_classify)
    p = indep_sub.add_parser("subst")
    p.add_argument("rules1")
    p.add_argument("rules2")
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--strict-paper", action="store_true")
    p.set_defaults(func=_cmd_indep_subst)

    gaps = top.add_parser("gaps", help="gap statistics")
    gaps_sub = gaps.add_subparsers(dest="command", required=True)
    for name in ("letter", "factor"):
        p = gaps_sub.add_parser(name)
        p.add_argument("rules")
        p.add_argument("--seed")
        p.add_argument("--project")
        if name == "letter":
            p.add_argument("--target", required=True)
        else:
            p.add_argument("--word", required=True)
        p.add_argument("--prefix", type=int, default=10 ** 5)
        p.add_argument("--samples", type=int, default=12)
        p.add_argument("--out", choices=("text", "json", "csv"),
                       default="text")
        p.set_defaults(func=_cmd_gaps_letter if name == "letter"
                       else _cmd_gaps_factor)
    p = gaps_sub.add_parser("scaling")
    p.add_argument("rules")
    p.add_argument("--seed")
    p.add_argument("--project")
    p.add_argument("--targets", required=True,
                   help="letters of the uniform-block set, concatenated")
    p.add_argument("--case", type=int, required=True)
    p.add_argument("--params", default="",
                   help="d=..,d_prime=..,alpha=..,alpha_prime=..")
    p.add_argument("--n-max", type=int, default=10 ** 5)
    p.add_argument("--tolerance", type=float, default=0.1)
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_gaps_scaling)
    p = gaps_sub.add_parser("kprime")
    p.add_argument("rules")
    p.add_argument("--project", default="id")
    p.add_argument("--target", required=True)
    p.add_argument("--n-max", type=int, default=12)
    p.set_defaults(func=_cmd_gaps_kprime)

    cobham = top.add_parser("cobham", help="two-substitution pipeline")
    cobham_sub = cobham.add_subparsers(dest="command", required=True)
    p = cobham_sub.add_parser("check")
    p.add_argument("--s1", required=True, help="rules:seed:projection|id")
    p.add_argument("--s2", required=True, help="rules:seed:projection|id")
    p.add_argument("--prefix", type=int, default=10 ** 5)
    p.add_argument("--max-period", type=int, default=None)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_cobham_check)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _emit_json({"error": exc.code, "message": str(exc)})
        return 2
    except SyndError as exc:
        _emit_json({"error": exc.code, "message": str(exc)})
        return 1
    except FileNotFoundError as exc:
        _emit_json({"error": "parse", "message": str(exc)})
        return 2


if __name__ == "__main__":
    sys.exit(main())
