"""One-sided radius-1 invertible expansive automata and their dual rules.

The local rule's dependence on its second argument partitions the alphabet;
invertibility and expansivity are combinatorial conditions on that partition,
the diagonal map and the successor sets.  For automata passing all of them
(Class (A)), the time evolution read through class labels is itself a CA on
the quotient alphabet, bipermutative on the two-sided window [-1, 1].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .automata import CellularAutomaton, letters, linear_ca, table_ca
from .groups import Element, Endomorphism, GroupSpec


@dataclass(frozen=True)
class ClassAAnalysis:
    """Partition data of a one-sided radius-1 rule and the derived verdicts."""

    automaton: CellularAutomaton
    classes: tuple[tuple[Element, ...], ...]
    class_of: Mapping[Element, int]
    pi: Mapping[Element, Element]
    succ: Mapping[Element, frozenset[Element]]
    left_permutative: bool
    pi_is_permutation: bool
    succ_in_pi_class: bool
    intersections_at_most_one: bool
    succ_equals_pi_class: bool

    @property
    def invertible_r1(self) -> bool:
        """Invertible with a radius-1 inverse."""
        return self.pi_is_permutation and self.left_permutative and self.succ_in_pi_class

    @property
    def class_a(self) -> bool:
        return (
            self.invertible_r1
            and self.intersections_at_most_one
            and self.succ_equals_pi_class
        )

    @property
    def quotient_size(self) -> int:
        return len(self.classes)


def analyze_radius1(F: CellularAutomaton) -> ClassAAnalysis:
    """Exhaustive partition analysis of a one-sided rule on the window [0, 1]."""
    if F.neighborhood != (0, 1):
        raise ValueError(f"analysis needs the neighborhood [0,1], got {F.neighborhood}")
    abc = letters(F.alphabet)
    by_signature: dict[tuple[Element, ...], list[Element]] = {}
    for a in abc:
        sig = tuple(F.local((c, a)) for c in abc)
        by_signature.setdefault(sig, []).append(a)
    classes = tuple(sorted(tuple(sorted(block)) for block in by_signature.values()))
    class_of = {a: i for i, block in enumerate(classes) for a in block}
    pi = {a: F.local((a, a)) for a in abc}
    succ = {a: frozenset(F.local((a, x)) for x in abc) for a in abc}
    left = all(
        len({F.local((a, u)) for a in abc}) == len(abc) for u in abc
    )
    pi_perm = len(set(pi.values())) == len(abc)
    pi_class = {a: frozenset(pi[b] for b in classes[class_of[a]]) for a in abc}
    succ_in = all(succ[a] <= pi_class[a] for a in abc)
    succ_eq = all(succ[a] == pi_class[a] for a in abc)
    inter = all(
        len(set(c1) & {pi[b] for b in c2}) <= 1
        for c1 in classes
        for c2 in classes
    )
    return ClassAAnalysis(
        F, classes, class_of, pi, succ, left, pi_perm, succ_in, inter, succ_eq
    )


def check_bm1(analysis: ClassAAnalysis) -> bool:
    """Invertibility with radius-1 inverse: diagonal permutation, left
    permutativity, successors inside the mapped class."""
    return analysis.invertible_r1


def check_bm2(analysis: ClassAAnalysis) -> bool:
    """Expansivity of the transposed rule: unique class intersections and
    successors filling the mapped class exactly."""
    if not analysis.invertible_r1:
        raise ValueError("expansivity conditions only apply to invertible rules")
    return analysis.intersections_at_most_one and analysis.succ_equals_pi_class


def check_linear_classA(f0: Endomorphism, f1: Endomorphism) -> bool:
    """Membership test for linear rules f0 + f1 sigma by exhaustive image and
    kernel computation."""
    if f0.source != f1.source or not f0.is_square or not f1.is_square:
        raise ValueError("coefficients must be endomorphisms of one group")
    if not f0.is_automorphism():
        return False
    im1 = f1.image()
    ker1 = f1.kernel()
    if im1 != frozenset(f0(x) for x in ker1):
        return False
    return im1 & ker1 == frozenset({f0.source.zero})


def _verify_inverse(F: CellularAutomaton, inv: CellularAutomaton) -> None:
    abc = letters(F.alphabet)
    for window in itertools.product(abc, repeat=3):
        mid = F.apply_window(window)
        if inv.apply_window(mid) != (window[0],):
            raise ValueError("inverse candidate fails on the forward composite")
        mid2 = inv.apply_window(window)
        if F.apply_window(mid2) != (window[0],):
            raise ValueError("inverse candidate fails on the backward composite")


def invert_radius1(F: CellularAutomaton) -> CellularAutomaton:
    """The radius-1 inverse of an invertible one-sided rule.

    Linear rules with vanishing f1 f0^-1 f1 invert in closed form; otherwise
    the inverse table is read off all window triples and checked for
    consistency.  Both paths verify the round trip exhaustively.
    """
    analysis = analyze_radius1(F)
    if not analysis.invertible_r1:
        raise ValueError("rule is not invertible with a radius-1 inverse")
    if F.coeffs is not None and F.constant is None:
        f0, f1 = F.coeff(0), F.coeff(1)
        if f0.is_automorphism():
            f0inv = f0.inverse()
            if f1.compose(f0inv).compose(f1).is_zero:
                inv = linear_ca(
                    F.alphabet,
                    {0: f0inv, 1: -(f0inv.compose(f1).compose(f0inv))},
                    neighborhood=(0, 1),
                )
                _verify_inverse(F, inv)
                return inv
    abc = letters(F.alphabet)
    table: dict = {}
    for a, b, c in itertools.product(abc, repeat=3):
        key = (F.local((a, b)), F.local((b, c)))
        if table.setdefault(key, a) != a:
            raise ValueError("inverse table is inconsistent: rule not invertible")
    if len(table) != len(abc) ** 2:
        raise ValueError("inverse table is incomplete: rule not invertible")
    inv = table_ca(F.alphabet, (0, 1), table)
    _verify_inverse(F, inv)
    return inv


@dataclass(frozen=True)
class DualCA:
    """The induced rule on class labels, acting on the two-sided window [-1,1].

    `automaton` is the solved table form on the index alphabet; `linear_form`
    is the closed-form linear rule when the coefficients split along the
    image/kernel coordinates.
    """

    automaton: CellularAutomaton
    provenance: str
    analysis: ClassAAnalysis
    linear_form: CellularAutomaton | None = None

    @property
    def alphabet(self) -> GroupSpec:
        return self.automaton.alphabet

    def rule_table(self) -> dict:
        return dict(self.automaton.table)


def _solve_dual_table(
    F: CellularAutomaton, inv: CellularAutomaton, analysis: ClassAAnalysis
) -> dict:
    """Read the dual rule off all letter pairs: one time-step of the orbit of
    (a b ...) determines the class above, below and at the pair, and the
    label transported one step right must be a function of those three."""
    cls = analysis.class_of
    abc = letters(F.alphabet)
    table: dict = {}
    for a, b in itertools.product(abc, repeat=2):
        alpha = (cls[inv.local((a, b))],)
        beta = (cls[a],)
        gamma = (cls[F.local((a, b))],)
        delta = (cls[b],)
        key = (alpha, beta, gamma)
        if table.setdefault(key, delta) != delta:
            raise ValueError(
                "dual rule is not single-valued: input is not in Class (A)"
            )
    n = analysis.quotient_size
    if len(table) != n**3:
        raise ValueError("dual rule is not total: input is not in Class (A)")
    return table


def _linear_dual(F: CellularAutomaton, analysis: ClassAAnalysis) -> CellularAutomaton | None:
    """Closed-form dual for linear rules whose alphabet splits as two equal
    cyclic factors with the image of f1 the first and its kernel the second."""
    if F.coeffs is None or F.constant is not None:
        return None
    moduli = F.alphabet.moduli
    if len(moduli) != 2 or moduli[0] != moduli[1]:
        return None
    m = moduli[0]
    f0, f1 = F.coeff(0), F.coeff(1)
    first = frozenset((x, 0) for x in range(m))
    second = frozenset((0, y) for y in range(m))
    if f1.image() != first or f1.kernel() != second:
        return None
    f011, f012 = f0.matrix[0]
    f021 = f0.matrix[1][0]
    f111 = f1.matrix[0][0]
    try:
        inv = pow(f111, -1, m)
    except ValueError:
        return None
    quotient = GroupSpec((m,))
    return linear_ca(
        quotient,
        {-1: (-inv * f012 * f021) % m, 0: (-inv * f011) % m, 1: inv},
        neighborhood=(-1, 1),
    )


def dual_ca(F: CellularAutomaton) -> DualCA:
    """Dual rule of a Class (A) automaton on the quotient alphabet.

    Always solves the table from the commuting orbit constraints; when the
    closed linear form exists the two are cross-checked entry by entry.
    """
    analysis = analyze_radius1(F)
    if not analysis.class_a:
        raise ValueError("dual rule needs a Class (A) automaton")
    inv = invert_radius1(F)
    table = _solve_dual_table(F, inv, analysis)
    quotient = GroupSpec((analysis.quotient_size,))
    solved = table_ca(quotient, (-1, 1), table)
    if not solved.permutativity().bipermutative:
        raise AssertionError("dual rule is not bipermutative")
    linear_form = _linear_dual(F, analysis)
    provenance = "solved"
    if linear_form is not None:
        for key, value in table.items():
            if linear_form.local(key) != value:
                raise AssertionError("closed-form dual disagrees with solved table")
        provenance = "formula"
    return DualCA(solved, provenance, analysis, linear_form)


@dataclass(frozen=True)
class ConjugacyResult:
    ok: bool
    windows_checked: int
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_conjugacy(
    F: CellularAutomaton,
    dual: DualCA,
    depth: int = 2,
    width: int = 6,
) -> ConjugacyResult:
    """Check the commuting square on every seed window: class labels of the
    orbit shifted one cell right must equal the dual rule applied to the
    label column, wherever both sides are determined."""
    analysis = dual.analysis
    cls = analysis.class_of
    inv = invert_radius1(F)
    abc = letters(F.alphabet)
    # flat lookup tables keep the seed loop tight
    ftab = {(a, b): F.local((a, b)) for a in abc for b in abc}
    itab = {(a, b): inv.local((a, b)) for a in abc for b in abc}
    dtab = {
        (k[0][0], k[1][0], k[2][0]): v[0]
        for k, v in dual.automaton.table.items()
    }
    checked = 0
    for seed in itertools.product(abc, repeat=width):
        rows: dict[int, tuple] = {0: seed}
        for n in range(1, depth + 1):
            prev = rows[n - 1]
            rows[n] = tuple(ftab[pair] for pair in zip(prev, prev[1:]))
            prev = rows[-(n - 1)]
            rows[-n] = tuple(itab[pair] for pair in zip(prev, prev[1:]))
        labels = {n: [cls[a] for a in row] for n, row in rows.items()}
        for n in range(-depth + 1, depth):
            here = labels[n]
            above = labels[n + 1]
            below = labels[n - 1]
            limit = min(len(here) - 1, len(above), len(below))
            for j in range(limit):
                checked += 1
                if dtab[below[j], here[j], above[j]] != here[j + 1]:
                    return ConjugacyResult(
                        False,
                        checked,
                        (seed, n, j, here[j + 1], dtab[below[j], here[j], above[j]]),
                    )
    return ConjugacyResult(True, checked)
