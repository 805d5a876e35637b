"""Command line entry point: spec ingestion, analysis reports, bundled examples.

Exit codes: 0 all asserted checks hold, 1 a mathematical check failed (a
witness is printed), 2 usage or spec-file errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources

from .automata import CellularAutomaton, linear_ca, table_ca
from .class_a import analyze_radius1, dual_ca, verify_conjugacy
from .configs import Cylinder, PeriodicConfig
from .entropy import entropy_report, formula_case, topological_entropy
from .groups import CapExceeded, Character, GroupSpec, Subgroup
from .kernels import (
    FullShift,
    InfiniteKernelError,
    LinearKernelShift,
    NotAlgebraicError,
    ProductSubgroup,
    condition4_search,
    corollary_ker_check,
    restrict,
    tower,
)
from .measures import (
    Bernoulli,
    HaarMeasure,
    MixtureMeasure,
    PeriodicOrbitMeasure,
    PushforwardMeasure,
    cesaro_sequence,
    character_integral,
    check_hypotheses,
    counterexample_suite,
    haar_test,
    invariance_check,
    uniform_bernoulli,
)
from .modular import (
    bipermutative_power,
    factor_mod_p,
    permutative_support,
)

BUNDLED = (
    "id_plus_sigma_z2",
    "id_sigma_2sigma2_z4",
    "classA_F1",
    "classA_F2",
    "ledrappier_kernel_sigma",
)


class SpecError(ValueError):
    """Schema violation in a spec file, carrying the offending field path."""


def _fail(path: str, message: str):
    raise SpecError(f"{path}: {message}")


def _expect_key(obj: dict, key: str, path: str):
    if not isinstance(obj, dict) or key not in obj:
        _fail(f"{path}.{key}", "missing required field")
    return obj[key]


def _load_fraction(obj, path: str) -> Fraction:
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, dict) and "num" in obj and "den" in obj:
        if obj["den"] == 0:
            _fail(path, "zero denominator")
        return Fraction(obj["num"], obj["den"])
    _fail(path, "expected an integer or {num, den}")


def _load_group(obj, path: str) -> GroupSpec:
    moduli = _expect_key(obj, "moduli", path)
    if not isinstance(moduli, list) or not moduli:
        _fail(f"{path}.moduli", "expected a nonempty list of integers")
    for i, d in enumerate(moduli):
        if not isinstance(d, int) or d < 2:
            _fail(f"{path}.moduli[{i}]", f"modulus must be an integer >= 2, got {d!r}")
    return GroupSpec(tuple(moduli))


def _load_letter(obj, alphabet: GroupSpec, path: str):
    if not isinstance(obj, list) or len(obj) != alphabet.rank:
        _fail(path, f"letter must list {alphabet.rank} residues")
    return alphabet.element(obj)


def load_ca(obj, path: str = "ca") -> CellularAutomaton:
    alphabet = _load_group(_expect_key(obj, "alphabet", path), f"{path}.alphabet")
    nbhd = _expect_key(obj, "neighborhood", path)
    if not (isinstance(nbhd, list) and len(nbhd) == 2 and all(isinstance(v, int) for v in nbhd)):
        _fail(f"{path}.neighborhood", "expected [r, s] integers")
    r, s = nbhd
    if r > s:
        _fail(f"{path}.neighborhood", f"empty interval [{r},{s}]")
    rule = _expect_key(obj, "rule", path)
    kind = _expect_key(rule, "type", f"{path}.rule")
    if kind == "linear":
        coeffs_obj = _expect_key(rule, "coeffs", f"{path}.rule")
        coeffs = {}
        for key, value in coeffs_obj.items():
            try:
                u = int(key)
            except ValueError:
                _fail(f"{path}.rule.coeffs.{key}", "offset keys must be integers")
            if not r <= u <= s:
                _fail(f"{path}.rule.coeffs.{key}", f"offset outside [{r},{s}]")
            coeffs[u] = value
        constant = rule.get("constant")
        if constant is not None:
            constant = _load_letter(constant, alphabet, f"{path}.rule.constant")
        try:
            return linear_ca(alphabet, coeffs, constant=constant, neighborhood=(r, s))
        except ValueError as exc:
            _fail(f"{path}.rule", str(exc))
    if kind == "table":
        entries = _expect_key(rule, "entries", f"{path}.rule")
        width = s - r + 1
        table = {}
        for i, entry in enumerate(entries):
            win = _expect_key(entry, "window", f"{path}.rule.entries[{i}]")
            if not isinstance(win, list) or len(win) != width:
                _fail(f"{path}.rule.entries[{i}].window", f"expected {width} letters")
            window = tuple(
                _load_letter(a, alphabet, f"{path}.rule.entries[{i}].window[{j}]")
                for j, a in enumerate(win)
            )
            value = _load_letter(
                _expect_key(entry, "value", f"{path}.rule.entries[{i}]"),
                alphabet, f"{path}.rule.entries[{i}].value",
            )
            table[window] = value
        expected = alphabet.order**width
        if len(table) != expected:
            missing = expected - len(table)
            _fail(f"{path}.rule.entries",
                  f"table incomplete: {missing} of {expected} windows missing")
        return table_ca(alphabet, (r, s), table)
    _fail(f"{path}.rule.type", f"unknown rule type {kind!r}")


def load_sigma(obj, path: str = "sigma"):
    kind = _expect_key(obj, "type", path)
    if kind == "full":
        alphabet = _load_group(_expect_key(obj, "alphabet", path), f"{path}.alphabet")
        return FullShift(alphabet)
    if kind == "product":
        alphabet = _load_group(_expect_key(obj, "alphabet", path), f"{path}.alphabet")
        t = _expect_key(obj, "grouping", path)
        if not isinstance(t, int) or t < 1:
            _fail(f"{path}.grouping", "expected an integer >= 1")
        block_obj = _expect_key(obj, "block", path)
        ambient = alphabet.power(t)
        elements = tuple(
            _load_letter(b, ambient, f"{path}.block[{i}]")
            for i, b in enumerate(block_obj)
        )
        try:
            block = Subgroup(ambient, elements)
            block.validate()
        except ValueError as exc:
            _fail(f"{path}.block", str(exc))
        return ProductSubgroup(alphabet, t, block, obj.get("phase", 0))
    if kind == "kernel":
        ca = load_ca(_expect_key(obj, "ca", path), f"{path}.ca")
        if not ca.is_linear:
            _fail(f"{path}.ca", "kernel shifts need a linear rule")
        return LinearKernelShift(ca)
    _fail(f"{path}.type", f"unknown subgroup shift type {kind!r}")


def load_measure(obj, path: str = "measure"):
    kind = _expect_key(obj, "type", path)
    if kind == "bernoulli":
        alphabet = _load_group(_expect_key(obj, "alphabet", path), f"{path}.alphabet")
        if "weights" not in obj:
            return uniform_bernoulli(alphabet)
        weights = {}
        for i, entry in enumerate(obj["weights"]):
            letter = _load_letter(
                _expect_key(entry, "letter", f"{path}.weights[{i}]"),
                alphabet, f"{path}.weights[{i}].letter",
            )
            weights[letter] = _load_fraction(entry, f"{path}.weights[{i}]")
        try:
            return Bernoulli(alphabet, weights)
        except ValueError as exc:
            _fail(f"{path}.weights", str(exc))
    if kind == "haar":
        return HaarMeasure(load_sigma(_expect_key(obj, "sigma", path), f"{path}.sigma"))
    if kind == "pushforward":
        base = load_measure(_expect_key(obj, "base", path), f"{path}.base")
        ca = load_ca(obj["ca"], f"{path}.ca") if "ca" in obj else None
        return PushforwardMeasure(
            base, ca, obj.get("f_power", 1 if ca else 0), obj.get("shift", 0)
        )
    if kind == "mixture":
        comps = []
        for i, entry in enumerate(obj.get("components", [])):
            weight = _load_fraction(entry, f"{path}.components[{i}]")
            m = load_measure(
                _expect_key(entry, "measure", f"{path}.components[{i}]"),
                f"{path}.components[{i}].measure",
            )
            comps.append((weight, m))
        try:
            return MixtureMeasure(tuple(comps))
        except ValueError as exc:
            _fail(f"{path}.components", str(exc))
    if kind == "periodic_orbit":
        alphabet = _load_group(_expect_key(obj, "alphabet", path), f"{path}.alphabet")
        word = _expect_key(obj, "period_word", path)
        letters_ = tuple(
            _load_letter(a, alphabet, f"{path}.period_word[{i}]")
            for i, a in enumerate(word)
        )
        ca = load_ca(obj["ca"], f"{path}.ca") if "ca" in obj else None
        return PeriodicOrbitMeasure.from_orbit(PeriodicConfig(alphabet, letters_), ca)
    _fail(f"{path}.type", f"unknown measure type {kind!r}")


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SpecError(f"{path}: file not found")
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})")


def bundled_spec(name: str):
    if name not in BUNDLED:
        raise SpecError(f"unknown bundled example {name!r}; choose from {', '.join(BUNDLED)}")
    text = resources.files("groupca.data").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def _load_ca_arg(value: str) -> CellularAutomaton:
    if value in BUNDLED:
        return load_ca(bundled_spec(value))
    return load_ca(_read_json(value))


def _load_sigma_arg(value: str):
    if value in BUNDLED:
        return load_sigma(bundled_spec(value))
    return load_sigma(_read_json(value))


# -- serialization helpers -----------------------------------------------------


def _frac_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _config_json(c: PeriodicConfig) -> dict:
    return {"period_word": [list(a) for a in c.word], "period": c.period}


def _word_key(word) -> str:
    return "|".join(",".join(map(str, a)) for a in word)


def _tower_json(tw, small, with_elements: bool = True) -> dict:
    width = small.neighborhood[1] - small.neighborhood[0]
    order = small.alphabet.order
    levels = []
    ok = True
    for n in range(tw.depth + 1):
        lvl = {
            "n": n,
            "size": tw.size(n),
            "p_n": tw.period(n),
        }
        if with_elements and tw.size(n) <= 64:
            lvl["elements"] = [_config_json(x) for x in tw.level(n).elements]
        if n >= 1:
            lvl["p_divides_next"] = tw.period(n) % tw.period(n - 1) == 0
            lvl["boundary_size"] = tw.size(n) - tw.size(n - 1)
            ok = ok and lvl["p_divides_next"]
        if n >= 2:
            bound = order**width * tw.period(n - 1)
            lvl["claim_bound_divides"] = bound % tw.period(n) == 0
            ok = ok and lvl["claim_bound_divides"]
        levels.append(lvl)
    return {"levels": levels, "divisibility_ok": ok, "width": width}


def _print(report: dict, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")


# -- subcommands -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    F = _load_ca_arg(args.ca)
    small = F.smallest_neighborhood()
    perm = small.permutativity()
    surj = F.is_surjective()
    report: dict = {
        "ca": F.describe(),
        "alphabet": list(F.alphabet.moduli),
        "declared_neighborhood": list(F.neighborhood),
        "smallest_neighborhood": list(small.neighborhood),
        "trivial": small.neighborhood[0] == small.neighborhood[1],
        "permutativity": {"left": perm.left, "right": perm.right},
        "surjectivity": {
            "surjective": surj.surjective,
            "decided_exactly": surj.decided,
            "depth_bound_used": surj.depth,
        },
    }
    failures = []
    print(f"automaton: {report['ca']}")
    print(f"smallest neighborhood: {small.neighborhood}, trivial: {report['trivial']}")
    print(f"permutative: left={perm.left} right={perm.right}")
    print(f"surjective: {surj.surjective} (decided exactly: {surj.decided}, depth {surj.depth})")
    if small.coeffs is not None:
        poly = {
            str(u): (f.matrix[0][0] if F.alphabet.rank == 1 else [list(r) for r in f.matrix])
            for u, f in sorted(small.coeffs.items())
        }
        report["polynomial"] = poly
    if perm.bipermutative and not report["trivial"]:
        h_top = topological_entropy(small)
        report["entropy"] = {
            "topological_nats": h_top,
            "formula_case": formula_case(small),
            "formula_at_uniform": h_top,
        }
        print(f"topological entropy: {h_top:.6f} nats ({formula_case(small)} case)")
    try:
        tw = tower(F, args.levels, cap=args.cap)
        report["kernel_tower"] = _tower_json(tw, small)
        report["kernel_tower"]["parameters"] = {"levels": args.levels}
        sizes = [tw.size(n) for n in range(args.levels + 1)]
        print(f"kernel tower sizes: {sizes}, periods: {[tw.period(n) for n in range(args.levels + 1)]}")
        if perm.bipermutative:
            width = small.neighborhood[1] - small.neighborhood[0]
            law = all(
                tw.size(n) == F.alphabet.order ** (width * n)
                for n in range(args.levels + 1)
            )
            report["kernel_tower"]["size_law_ok"] = law
            if not law:
                failures.append("kernel size law violated")
        if not report["kernel_tower"]["divisibility_ok"]:
            failures.append("period divisibility violated")
        cond4 = condition4_search(F, m_max=args.m_max, cap=args.cap)
        corker = corollary_ker_check(F, cap=args.cap)
        report["condition4"] = {
            "found": cond4.found, "m": cond4.m, "m_max": cond4.m_max,
        }
        report["corollary_ker"] = {
            "holds": corker.holds,
            "proper_invariant_subgroups": corker.proper_invariant_subgroups,
        }
        print(f"boundary generation criterion: found={cond4.found} m={cond4.m}")
        print(f"first-level subgroup criterion: {corker.holds}")
        if corker.holds and not cond4.found:
            failures.append("subgroup criterion holds but generation search failed")
    except (NotAlgebraicError, InfiniteKernelError, CapExceeded) as exc:
        report["kernel_tower"] = {"error": str(exc)}
        print(f"kernel tower unavailable: {exc}")
    if F.neighborhood == (0, 1):
        analysis = analyze_radius1(F)
        section = {
            "classes": [[list(a) for a in block] for block in analysis.classes],
            "invertible_radius1": analysis.invertible_r1,
            "class_a": analysis.class_a,
        }
        print(f"one-sided radius-1 analysis: invertible={analysis.invertible_r1} "
              f"class_a={analysis.class_a}")
        if analysis.class_a:
            dual = dual_ca(F)
            conj = verify_conjugacy(F, dual, depth=2, width=args.conjugacy_width)
            section["dual_provenance"] = dual.provenance
            section["dual_bipermutative"] = dual.automaton.permutativity().bipermutative
            section["conjugacy_verified"] = conj.ok
            section["conjugacy_windows"] = conj.windows_checked
            if dual.linear_form is not None:
                section["dual_polynomial"] = {
                    str(u): f.matrix[0][0] for u, f in sorted(dual.linear_form.coeffs.items())
                }
            print(f"dual rule: provenance={dual.provenance}, conjugacy verified={conj.ok}")
            if not conj.ok:
                failures.append("dual conjugacy verification failed")
        report["class_a"] = section
    hyp = check_hypotheses(F, m_max=args.m_max)
    report["hypotheses"] = {
        "nontrivial": hyp.nontrivial,
        "bipermutative": hyp.bipermutative,
        "k": hyp.k,
        "p1": hyp.p1,
        "k_p1": hyp.k_p1,
        "unchecked": list(hyp.unchecked),
    }
    report["failures"] = failures
    _print(report, args.out)
    if failures:
        print("FAILED: " + "; ".join(failures))
        return 1
    return 0


def cmd_kernel(args) -> int:
    F = _load_ca_arg(args.ca)
    small = F.smallest_neighborhood()
    try:
        tw = tower(F, args.levels, cap=args.cap)
    except (NotAlgebraicError, InfiniteKernelError, CapExceeded) as exc:
        print(f"kernel tower unavailable: {exc}", file=sys.stderr)
        return 2
    if args.sigma:
        sigma = _load_sigma_arg(args.sigma)
        tw = restrict(tw, sigma)
    report = _tower_json(tw, small)
    report["parameters"] = {"levels": args.levels, "sigma": args.sigma}
    for lvl in report["levels"]:
        line = f"level {lvl['n']}: size {lvl['size']}, p_{lvl['n']} = {lvl['p_n']}"
        if "boundary_size" in lvl:
            line += f", boundary {lvl['boundary_size']}"
        print(line)
    print(f"divisibility verdicts hold: {report['divisibility_ok']}")
    _print(report, args.out)
    return 0 if report["divisibility_ok"] else 1


def cmd_entropy(args) -> int:
    F = _load_ca_arg(args.ca)
    mu = load_measure(_read_json(args.measure)) if args.measure else uniform_bernoulli(F.alphabet)
    rep = entropy_report(F, mu, samples=args.samples, k=args.block, seed=args.seed)
    report = rep.as_dict()
    print(f"shift entropy estimate: {rep.h_sigma_estimate:.6f} nats")
    if rep.h_f_estimate is not None:
        print(f"automaton entropy estimate: {rep.h_f_estimate:.6f} nats")
    if rep.h_f_formula is not None:
        print(f"closed form: {rep.h_f_formula:.6f} nats ({rep.formula_case} case)")
    print(f"upper bound ok: {rep.bounds.upper_ok}")
    _print(report, args.out)
    ok = rep.bounds.upper_ok and (rep.bounds.lower_ok is not False)
    if rep.h_f_formula is not None and rep.h_f_estimate is not None:
        ok = ok and abs(rep.h_f_formula - rep.h_f_estimate) < 0.1
    return 0 if ok else 1


def cmd_modular(args) -> int:
    F = _load_ca_arg(args.ca)
    try:
        sup = permutative_support(F)
    except ValueError as exc:
        print(f"unsupported alphabet: {exc}", file=sys.stderr)
        return 2
    report: dict = {
        "prime": sup.p, "exponent": sup.k, "unit_offsets": list(sup.offsets),
    }
    print(f"alphabet: Z/{sup.p}^{sup.k}, unit-coefficient offsets: {list(sup.offsets)}")
    if not sup.is_empty and sup.r_hat < sup.s_hat:
        Fq = bipermutative_power(F)
        q = sup.p ** (sup.k - 1)
        report["power"] = q
        report["power_neighborhood"] = list(Fq.neighborhood)
        report["power_polynomial"] = {
            str(u): f.matrix[0][0] for u, f in sorted(Fq.coeffs.items())
        }
        print(f"power {q}: neighborhood {Fq.neighborhood}, bipermutative")
    if sup.k == 1:
        from .automata import as_laurent

        fact = factor_mod_p(as_laurent(F))
        report["factorization"] = {
            "shift_power": fact.shift_power,
            "unit": fact.unit,
            "factors": [
                {"coeffs_ascending": list(f), "multiplicity": m}
                for f, m in fact.factors
            ],
        }
        print(f"factorization over Z/{sup.p}: "
              + " * ".join(f"{list(f)}^{m}" for f, m in fact.factors))
    _print(report, args.out)
    return 0


def cmd_dual(args) -> int:
    names = []
    if args.bundled_examples:
        names = ["classA_F1", "classA_F2"]
    elif args.ca:
        names = [args.ca]
    else:
        print("dual: need --ca FILE or --bundled-examples", file=sys.stderr)
        return 2
    report = {}
    ok = True
    for name in names:
        F = _load_ca_arg(name)
        analysis = analyze_radius1(F)
        section: dict = {
            "classes": [[list(a) for a in block] for block in analysis.classes],
            "pi": {_word_key([a]): list(analysis.pi[a]) for a in sorted(analysis.pi)},
            "succ": {
                _word_key([a]): sorted(list(x) for x in analysis.succ[a])
                for a in sorted(analysis.succ)
            },
            "invertible_radius1": analysis.invertible_r1,
            "class_a": analysis.class_a,
        }
        print(f"== {name} ==")
        print(f"partition: {analysis.classes}")
        print(f"invertible (radius-1 inverse): {analysis.invertible_r1}")
        print(f"class (A): {analysis.class_a}")
        if analysis.class_a:
            dual = dual_ca(F)
            conj = verify_conjugacy(F, dual, depth=args.depth, width=args.width)
            section["dual_provenance"] = dual.provenance
            section["dual_table"] = {
                _word_key(k): list(v) for k, v in sorted(dual.rule_table().items())
            }
            if dual.linear_form is not None:
                poly = {
                    str(u): f.matrix[0][0]
                    for u, f in sorted(dual.linear_form.coeffs.items())
                }
                section["dual_polynomial"] = poly
                print(f"dual rule polynomial (offsets -1,0,1): {poly}")
            section["dual_bipermutative"] = dual.automaton.permutativity().bipermutative
            section["conjugacy_verified"] = conj.ok
            section["conjugacy_windows_checked"] = conj.windows_checked
            print(f"dual bipermutative: {section['dual_bipermutative']}")
            print(f"conjugacy verified on width-{args.width} windows: {conj.ok}")
            ok = ok and conj.ok and section["dual_bipermutative"]
        report[name] = section
    _print(report, args.out)
    return 0 if ok else 1


def _parse_cylinder(args, alphabet) -> Cylinder:
    word = tuple(alphabet.element(a) for a in json.loads(args.word))
    return Cylinder(args.offset, word)


def cmd_measure(args) -> int:
    if args.measure_cmd == "counterexample":
        suite = counterexample_suite()
        checks = suite.verify(args.length)
        report = {}
        ok = True
        expectations = {
            "sigma_image_of_x1_is_x2": True,
            "sigma_preimage_of_x1_is_x2": True,
            "sigma2_preimage_of_x1_is_x1": True,
            "rule_image_languages_match": True,
            "shifted_languages_match": True,
        }
        for key, expected in expectations.items():
            report[key] = checks[key]
            ok = ok and checks[key] == expected
        mu_sigma = checks["mu_sigma_invariance"]
        mu_rule = checks["mu_rule_invariance"]
        nu_sigma = checks["nu_sigma_invariance"]
        ht = checks["haar_test"]
        report["mu_sigma_discrepancy"] = _frac_json(mu_sigma.max_discrepancy)
        report["mu_rule_discrepancy"] = _frac_json(mu_rule.max_discrepancy)
        report["nu_sigma_discrepancy"] = _frac_json(nu_sigma.max_discrepancy)
        report["character_witness"] = ht.witness
        report["max_character_integral"] = ht.max_abs_integral
        ok = ok and mu_sigma.invariant and mu_rule.invariant
        ok = ok and not nu_sigma.invariant and not ht.consistent
        print(f"mixture invariant under rule and shift: "
              f"{mu_rule.invariant and mu_sigma.invariant}")
        print(f"base Haar measure shift-noninvariant witness: {nu_sigma.witness}")
        print(f"nonvanishing character: {ht.witness} (|integral| = {ht.max_abs_integral})")
        _print(report, args.out)
        return 0 if ok else 1

    mu = load_measure(_read_json(args.measure))
    if args.measure_cmd == "prob":
        cyl = _parse_cylinder(args, mu.alphabet)
        p = mu.cylinder_prob(cyl)
        print(f"P([{args.word}]_{args.offset}) = {p}")
        _print({"probability": _frac_json(p)}, args.out)
        return 0
    if args.measure_cmd == "invariance":
        F = _load_ca_arg(args.ca) if args.ca else None
        res = invariance_check(
            mu, F, f_power=args.f_power, shift=args.shift, length=args.length,
            mode=args.mode, mc_samples=args.mc_samples, seed=args.seed,
        )
        report = {
            "max_discrepancy": _frac_json(res.max_discrepancy)
            if res.exact else res.max_discrepancy,
            "cylinders_checked": res.cylinders_checked,
            "exact": res.exact,
            "invariant": res.invariant,
            "parameters": {
                "f_power": args.f_power, "shift": args.shift, "length": args.length,
            },
        }
        if res.witness is not None:
            report["witness"] = {
                "offset": res.witness.offset,
                "word": [list(a) for a in res.witness.word],
            }
            print(f"not invariant: discrepancy {res.max_discrepancy} at "
                  f"[{res.witness.word}]_{res.witness.offset}")
        else:
            print(f"invariant on all cylinders of length <= {args.length}")
        _print(report, args.out)
        return 0 if res.invariant else 1
    if args.measure_cmd == "char":
        spec = json.loads(args.character)
        chi = {
            int(pos): Character(mu.alphabet, tuple(res))
            for pos, res in spec.items()
        }
        value = character_integral(mu, chi)
        print(f"character integral = {value.real:+.9f} {value.imag:+.9f}i")
        _print({"real": value.real, "imag": value.imag}, args.out)
        return 0
    if args.measure_cmd == "haar-test":
        sigma = _load_sigma_arg(args.sigma) if args.sigma else FullShift(mu.alphabet)
        rep = haar_test(mu, sigma, args.budget)
        report = {
            "consistent": rep.consistent,
            "max_abs_integral": rep.max_abs_integral,
            "witness": rep.witness,
            "characters_checked": rep.characters_checked,
            "budget": rep.support_budget,
        }
        if rep.consistent:
            print(f"consistent with the Haar measure at budget {args.budget} "
                  f"(max |integral| = {rep.max_abs_integral:.2e})")
        else:
            print(f"witness character {rep.witness} with |integral| = {rep.max_abs_integral}")
        _print(report, args.out)
        return 0 if rep.consistent else 1
    if args.measure_cmd == "cesaro":
        F = _load_ca_arg(args.ca)
        res = cesaro_sequence(mu, F, args.steps, args.length)
        report = {
            "length": res.length,
            "distances": [_frac_json(d) for d in res.distances_to_uniform],
        }
        for n, d in enumerate(res.distances_to_uniform, start=1):
            print(f"n = {n:3d}: distance to uniform = {float(d):.6f}")
        _print(report, args.out)
        return 0
    print(f"unknown measure subcommand {args.measure_cmd!r}", file=sys.stderr)
    return 2


def cmd_hypotheses(args) -> int:
    F = _load_ca_arg(args.ca)
    sigma = _load_sigma_arg(args.sigma) if args.sigma else None
    mu = load_measure(_read_json(args.measure)) if args.measure else "abstract"
    rep = check_hypotheses(F, sigma, mu, m_max=args.m_max, seed=args.seed)
    report = {
        "automaton": rep.automaton,
        "sigma": rep.sigma,
        "measure": rep.measure,
        "nontrivial": rep.nontrivial,
        "bipermutative": rep.bipermutative,
        "k": rep.k,
        "p1": rep.p1,
        "k_p1": rep.k_p1,
        "condition4": None if rep.condition4 is None else {
            "found": rep.condition4.found, "m": rep.condition4.m,
            "m_max": rep.condition4.m_max,
        },
        "corollary_ker": None if rep.corollary_ker is None else {
            "holds": rep.corollary_ker.holds,
            "proper_invariant_subgroups": rep.corollary_ker.proper_invariant_subgroups,
        },
        "entropy_positive": rep.entropy_positive,
        "entropy_method": rep.entropy_method,
        "unchecked": list(rep.unchecked),
        "all_checkable_hold": rep.all_checkable_hold,
    }
    print(f"automaton: {rep.automaton}")
    print(f"nontrivial: {rep.nontrivial}, bipermutative: {rep.bipermutative}")
    print(f"k = {rep.k}, p1 = {rep.p1}, k*p1 = {rep.k_p1}")
    if rep.condition4 is not None:
        print(f"boundary generation: found={rep.condition4.found} m={rep.condition4.m}")
    if rep.corollary_ker is not None:
        print(f"first-level subgroup criterion: {rep.corollary_ker.holds}")
    print(f"entropy positive: {rep.entropy_positive} ({rep.entropy_method})")
    print("UNCHECKED:")
    for item in rep.unchecked:
        print(f"  - {item}")
    print(f"all checkable premises hold: {rep.all_checkable_hold}")
    _print(report, args.out)
    return 0


def cmd_examples(args) -> int:
    if args.dump:
        spec = bundled_spec(args.dump)
        print(json.dumps(spec, indent=2, sort_keys=True))
        return 0
    for name in BUNDLED:
        spec = bundled_spec(name)
        print(f"{name}: {spec.get('description', '')}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupca",
        description="analysis toolkit for algebraic cellular automata on "
        "finite abelian alphabets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON report to this path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=1 << 16, help="size cap for exhaustive steps")

    p = sub.add_parser("analyze", help="full report for one automaton")
    p.add_argument("--ca", required=True, help="spec file or bundled name")
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--m-max", type=int, default=2,
                   help="depth bound for the boundary generation search")
    p.add_argument("--conjugacy-width", type=int, default=6)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("kernel", help="kernel tower as JSON")
    p.add_argument("--ca", required=True)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--sigma", help="restrict to a subgroup shift spec")
    common(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("entropy", help="entropy estimates and formulas")
    p.add_argument("--ca", required=True)
    p.add_argument("--measure", help="measure spec file (default uniform)")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--block", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("modular", help="prime-power support and factorization")
    p.add_argument("--ca", required=True)
    common(p)
    p.set_defaults(func=cmd_modular)

    p = sub.add_parser("dual", help="one-sided expansive analysis and dual rule")
    p.add_argument("--ca")
    p.add_argument("--bundled-examples", action="store_true",
                   help="run the two bundled Class (A) rules")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--width", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("measure", help="measure diagnostics")
    msub = p.add_subparsers(dest="measure_cmd", required=True)
    mp = msub.add_parser("prob")
    mp.add_argument("--measure", required=True)
    mp.add_argument("--offset", type=int, default=0)
    mp.add_argument("--word", required=True, help='JSON letter list, e.g. [[0],[1]]')
    common(mp)
    mp.set_defaults(func=cmd_measure)
    mp = msub.add_parser("invariance")
    mp.add_argument("--measure", required=True)
    mp.add_argument("--ca")
    mp.add_argument("--f-power", type=int, default=0)
    mp.add_argument("--shift", type=int, default=0)
    mp.add_argument("--length", type=int, default=4)
    mp.add_argument("--mode", choices=("exact", "mc"), default="exact")
    mp.add_argument("--mc-samples", type=int, default=50000)
    common(mp)
    mp.set_defaults(func=cmd_measure)
    mp = msub.add_parser("char")
    mp.add_argument("--measure", required=True)
    mp.add_argument("--character", required=True,
                    help='JSON map position -> residues, e.g. {"0": [1], "1": [1]}')
    common(mp)
    mp.set_defaults(func=cmd_measure)
    mp = msub.add_parser("haar-test")
    mp.add_argument("--measure", required=True)
    mp.add_argument("--sigma")
    mp.add_argument("--budget", type=int, default=3)
    common(mp)
    mp.set_defaults(func=cmd_measure)
    mp = msub.add_parser("cesaro")
    mp.add_argument("--measure", required=True)
    mp.add_argument("--ca", required=True)
    mp.add_argument("--steps", type=int, default=16)
    mp.add_argument("--length", type=int, default=1)
    common(mp)
    mp.set_defaults(func=cmd_measure)
    mp = msub.add_parser("counterexample")
    mp.add_argument("--length", type=int, default=6)
    common(mp)
    mp.set_defaults(func=cmd_measure)
    mp = msub.add_parser("hypotheses")
    mp.add_argument("--ca", required=True)
    mp.add_argument("--sigma")
    mp.add_argument("--measure")
    mp.add_argument("--m-max", type=int, default=2)
    common(mp)
    mp.set_defaults(func=cmd_hypotheses)

    p = sub.add_parser("hypotheses", help="rigidity premise report")
    p.add_argument("--ca", required=True)
    p.add_argument("--sigma")
    p.add_argument("--measure")
    p.add_argument("--m-max", type=int, default=2,
                   help="depth bound for the boundary generation search")
    common(p)
    p.set_defaults(func=cmd_hypotheses)

    p = sub.add_parser("examples", help="list or dump bundled spec files")
    p.add_argument("--dump", help="print one bundled spec")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, NotAlgebraicError, InfiniteKernelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
