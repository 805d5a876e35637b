"""One-dimensional cellular automata on finite abelian alphabets.

Rules come in three flavors: explicit tables, linear combinations of shift
powers with endomorphism coefficients, and affine rules (linear plus a
constant letter, the shift-invariant case).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .configs import Cylinder, PeriodicConfig, Word
from .groups import CapExceeded, Element, Endomorphism, GroupSpec

DEFAULT_TABLE_CAP = 1 << 20
DEFAULT_PREIMAGE_CAP = 1 << 16


@functools.lru_cache(maxsize=None)
def letters(alphabet: GroupSpec) -> tuple[Element, ...]:
    return tuple(alphabet.elements())


def _coerce_endo(alphabet: GroupSpec, value) -> Endomorphism:
    if isinstance(value, Endomorphism):
        if value.source != alphabet or value.target != alphabet:
            raise ValueError("coefficient endomorphism is not on the alphabet")
        return value
    if isinstance(value, int):
        return Endomorphism.scalar(alphabet, value)
    return Endomorphism(alphabet, alphabet, tuple(tuple(row) for row in value))


@dataclass(frozen=True)
class LaurentPoly:
    """A Laurent polynomial in the shift with endomorphism coefficients."""

    group: GroupSpec
    terms: Mapping[int, Endomorphism]

    def __post_init__(self) -> None:
        clean = {
            int(u): _coerce_endo(self.group, f)
            for u, f in self.terms.items()
            if not (isinstance(f, Endomorphism) and f.is_zero)
        }
        clean = {u: f for u, f in clean.items() if not f.is_zero}
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.group == other.group
            and self.terms == other.terms
        )

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.terms))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if other.group != self.group:
            raise ValueError("alphabet mismatch")
        acc = dict(self.terms)
        for u, f in other.terms.items():
            acc[u] = acc[u] + f if u in acc else f
        return LaurentPoly(self.group, acc)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if other.group != self.group:
            raise ValueError("alphabet mismatch")
        acc: dict[int, Endomorphism] = {}
        for u, f in self.terms.items():
            for v, g in other.terms.items():
                fg = f.compose(g)
                acc[u + v] = acc[u + v] + fg if u + v in acc else fg
        return LaurentPoly(self.group, acc)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = LaurentPoly(self.group, {0: Endomorphism.identity(self.group)})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scalar_coeffs(self) -> dict[int, int]:
        """Coefficients as plain residues; only valid on a cyclic alphabet."""
        if self.group.rank != 1:
            raise ValueError("scalar coefficients need a cyclic alphabet")
        return {u: f.matrix[0][0] for u, f in self.terms.items()}


class Permutativity(NamedTuple):
    left: bool
    right: bool

    @property
    def bipermutative(self) -> bool:
        return self.left and self.right


@dataclass(frozen=True, eq=True)
class CellularAutomaton:
    """A CA given by its alphabet, neighborhood interval and local rule.

    Exactly one of `table` and `coeffs` is set.  `constant`, when present,
    makes a linear rule affine; it is a single letter, interpreted as the
    shift-invariant constant configuration.
    """

    alphabet: GroupSpec
    neighborhood: tuple[int, int]
    table: Mapping[Word, Element] | None = None
    coeffs: Mapping[int, Endomorphism] | None = None
    constant: Element | None = None

    def __post_init__(self) -> None:
        r, s = self.neighborhood
        if r > s:
            raise ValueError(f"empty neighborhood [{r},{s}]")
        if (self.table is None) == (self.coeffs is None):
            raise ValueError("exactly one of table and coeffs must be given")
        if self.table is not None:
            if self.constant is not None:
                raise ValueError("constants only apply to linear rules")
            width = s - r + 1
            expected = self.alphabet.order ** width
            if len(self.table) != expected:
                raise ValueError(
                    f"table has {len(self.table)} entries, expected {expected}"
                )
            for w, a in self.table.items():
                if len(w) != width:
                    raise ValueError(f"table key {w} has wrong width")
                if not self.alphabet.contains(a):
                    raise ValueError(f"table value {a} outside alphabet")
        else:
            for u, f in self.coeffs.items():
                if not (r <= u <= s):
                    raise ValueError(f"coefficient offset {u} outside [{r},{s}]")
                if f.source != self.alphabet or f.target != self.alphabet:
                    raise ValueError("coefficient endomorphism not on alphabet")
            if self.constant is not None and not self.alphabet.contains(self.constant):
                raise ValueError("affine constant outside alphabet")

    # -- structure ---------------------------------------------------------

    @property
    def radius_interval(self) -> tuple[int, int]:
        return self.neighborhood

    @property
    def width(self) -> int:
        r, s = self.neighborhood
        return s - r + 1

    @property
    def is_table(self) -> bool:
        return self.table is not None

    @property
    def is_linear(self) -> bool:
        return self.coeffs is not None and (
            self.constant is None or self.constant == self.alphabet.zero
        )

    @property
    def is_affine(self) -> bool:
        return self.coeffs is not None

    def coeff(self, u: int) -> Endomorphism:
        assert self.coeffs is not None
        return self.coeffs.get(u, Endomorphism.zero_map(self.alphabet))

    # -- evaluation --------------------------------------------------------

    def local(self, window: Word) -> Element:
        """The local rule on one window of exactly the neighborhood width."""
        if len(window) != self.width:
            raise ValueError(f"window width {len(window)}, expected {self.width}")
        if self.table is not None:
            return self.table[tuple(window)]
        r, _ = self.neighborhood
        acc = self.alphabet.zero
        for u, f in self.coeffs.items():
            acc = self.alphabet.add(acc, f(window[u - r]))
        if self.constant is not None:
            acc = self.alphabet.add(acc, self.constant)
        return acc

    def apply_window(self, word: Sequence[Element]) -> Word:
        """Slide the local rule over a finite word; output shrinks by s-r."""
        word = tuple(tuple(a) for a in word)
        if len(word) < self.width:
            raise ValueError(
                f"window of length {len(word)} too short for width {self.width}"
            )
        w = self.width
        return tuple(self.local(word[j : j + w]) for j in range(len(word) - w + 1))

    def apply_periodic(self, x: PeriodicConfig) -> PeriodicConfig:
        """Image of a periodic configuration; the period can only shrink."""
        if x.alphabet != self.alphabet:
            raise ValueError("alphabet mismatch")
        r, _ = self.neighborhood
        q = x.period
        word = tuple(self.local(x.window(i + r, self.width)) for i in range(q))
        return PeriodicConfig(self.alphabet, word)

    def __call__(self, x: PeriodicConfig) -> PeriodicConfig:
        return self.apply_periodic(x)

    # -- normalization -----------------------------------------------------

    def smallest_neighborhood(self) -> "CellularAutomaton":
        """Equivalent CA whose rule depends on both neighborhood endpoints.

        A rule depending on no coordinate at all collapses to a single-point
        neighborhood; such automata are flagged trivial.  For affine rules
        only the linear part is trimmed.
        """
        r, s = self.neighborhood
        if self.coeffs is not None:
            support = sorted(u for u, f in self.coeffs.items() if not f.is_zero)
            if not support:
                return CellularAutomaton(
                    self.alphabet, (0, 0),
                    coeffs={0: Endomorphism.zero_map(self.alphabet)},
                    constant=self.constant,
                )
            coeffs = {u: self.coeffs[u] for u in support}
            return CellularAutomaton(
                self.alphabet, (support[0], support[-1]), coeffs=coeffs,
                constant=self.constant,
            )
        table = dict(self.table)
        abc = letters(self.alphabet)
        while s - r >= 1:
            if _table_ignores(table, 0, abc):
                table = {w[1:]: a for w, a in table.items() if w[0] == abc[0]}
                r += 1
            elif _table_ignores(table, s - r, abc):
                table = {w[:-1]: a for w, a in table.items() if w[-1] == abc[0]}
                s -= 1
            else:
                break
        return CellularAutomaton(self.alphabet, (r, s), table=table)

    @property
    def is_trivial(self) -> bool:
        """True when the smallest neighborhood is a single point."""
        small = self.smallest_neighborhood()
        return small.neighborhood[0] == small.neighborhood[1]

    # -- permutativity and surjectivity -------------------------------------

    def permutativity(self) -> Permutativity:
        """Left/right permutativity, decided on the smallest neighborhood.

        Linear and affine rules use the automorphism criterion on the extreme
        coefficients; tables are checked exhaustively.
        """
        small = self.smallest_neighborhood()
        r, s = small.neighborhood
        if small.coeffs is not None:
            return Permutativity(
                small.coeff(r).is_automorphism(), small.coeff(s).is_automorphism()
            )
        abc = letters(self.alphabet)
        n = len(abc)
        left = right = True
        for rest in itertools.product(abc, repeat=s - r):
            if len({small.table[(a,) + rest] for a in abc}) != n:
                left = False
                break
        for rest in itertools.product(abc, repeat=s - r):
            if len({small.table[rest + (a,)] for a in abc}) != n:
                right = False
                break
        return Permutativity(left, right)

    def is_surjective(self, l_max: int | None = None) -> "SurjectivityResult":
        return is_surjective(self, l_max)

    # -- algebra -----------------------------------------------------------

    def compose(self, other: "CellularAutomaton",
                cap: int = DEFAULT_TABLE_CAP) -> "CellularAutomaton":
        """self after other; neighborhoods add."""
        return compose(self, other, cap)

    def power(self, n: int, cap: int = DEFAULT_TABLE_CAP) -> "CellularAutomaton":
        return power(self, n, cap)

    def with_shift(self, m: int) -> "CellularAutomaton":
        return with_shift(self, m)

    def as_laurent(self) -> LaurentPoly:
        return as_laurent(self)

    def cylinder_preimage(self, cyl: Cylinder,
                          cap: int = DEFAULT_PREIMAGE_CAP) -> list[Cylinder]:
        return cylinder_preimage(self, cyl, cap)

    def describe(self) -> str:
        r, s = self.neighborhood
        if self.coeffs is not None:
            parts = []
            for u in sorted(self.coeffs):
                f = self.coeffs[u]
                if f.is_zero:
                    continue
                mat = f.matrix[0][0] if self.alphabet.rank == 1 else f.matrix
                parts.append(f"{mat}*s^{u}")
            body = " + ".join(parts) if parts else "0"
            if self.constant is not None and self.constant != self.alphabet.zero:
                body += f" + {self.constant}"
            return f"linear[{r},{s}] {body} on {self.alphabet}"
        return f"table[{r},{s}] on {self.alphabet}"


def _table_ignores(table: Mapping[Word, Element], pos: int,
                   abc: tuple[Element, ...]) -> bool:
    """True when the table output never depends on window coordinate pos."""
    for w, a in table.items():
        if w[pos] != abc[0]:
            continue
        for b in abc[1:]:
            w2 = w[:pos] + (b,) + w[pos + 1 :]
            if table[w2] != a:
                return False
    return True


# -- constructors ------------------------------------------------------------


def linear_ca(
    alphabet: GroupSpec,
    coeffs: Mapping[int, Endomorphism | int | Sequence[Sequence[int]]],
    constant: Element | None = None,
    neighborhood: tuple[int, int] | None = None,
) -> CellularAutomaton:
    """Linear or affine CA from shift-offset coefficients.

    Integer coefficients mean scalar multiplication; matrices are taken as
    endomorphisms of the product group.
    """
    endos = {int(u): _coerce_endo(alphabet, f) for u, f in coeffs.items()}
    support = sorted(u for u, f in endos.items() if not f.is_zero)
    if neighborhood is None:
        neighborhood = (support[0], support[-1]) if support else (0, 0)
    if not support:
        endos = {neighborhood[0]: Endomorphism.zero_map(alphabet)}
    else:
        endos = {u: endos[u] for u in support}
    const = alphabet.element(constant) if constant is not None else None
    if const == alphabet.zero:
        const = None
    return CellularAutomaton(alphabet, neighborhood, coeffs=endos, constant=const)


def table_ca(
    alphabet: GroupSpec,
    neighborhood: tuple[int, int],
    table: Mapping[Sequence[Element], Element],
) -> CellularAutomaton:
    clean = {
        tuple(alphabet.element(a) for a in w): alphabet.element(v)
        for w, v in table.items()
    }
    return CellularAutomaton(alphabet, tuple(neighborhood), table=clean)


def table_from_rule(
    alphabet: GroupSpec,
    neighborhood: tuple[int, int],
    rule,
) -> CellularAutomaton:
    """Materialize a callable local rule into a table CA."""
    r, s = neighborhood
    width = s - r + 1
    abc = letters(alphabet)
    table = {w: rule(w) for w in itertools.product(abc, repeat=width)}
    return table_ca(alphabet, neighborhood, table)


def shift_ca(alphabet: GroupSpec, m: int = 1) -> CellularAutomaton:
    return linear_ca(alphabet, {m: Endomorphism.identity(alphabet)})


def identity_ca(alphabet: GroupSpec) -> CellularAutomaton:
    return shift_ca(alphabet, 0)


# -- composition --------------------------------------------------------------


def _constant_image(F: CellularAutomaton, c: Element) -> Element:
    """Image letter of the constant configuration c under an affine CA."""
    acc = F.alphabet.zero
    for f in F.coeffs.values():
        acc = F.alphabet.add(acc, f(c))
    if F.constant is not None:
        acc = F.alphabet.add(acc, F.constant)
    return acc


def compose(F: CellularAutomaton, G: CellularAutomaton,
            cap: int = DEFAULT_TABLE_CAP) -> CellularAutomaton:
    """The CA x -> F(G(x)); linear rules compose through their polynomials."""
    if F.alphabet != G.alphabet:
        raise ValueError("alphabet mismatch")
    rF, sF = F.neighborhood
    rG, sG = G.neighborhood
    if F.coeffs is not None and G.coeffs is not None:
        acc: dict[int, Endomorphism] = {}
        for u, f in F.coeffs.items():
            for v, g in G.coeffs.items():
                fg = f.compose(g)
                acc[u + v] = acc[u + v] + fg if u + v in acc else fg
        const = None
        if G.constant is not None:
            const = _constant_image(
                CellularAutomaton(F.alphabet, F.neighborhood, coeffs=F.coeffs),
                G.constant,
            )
        if F.constant is not None:
            const = F.constant if const is None else F.alphabet.add(const, F.constant)
        return linear_ca(
            F.alphabet, acc, constant=const, neighborhood=(rF + rG, sF + sG)
        )
    width = (sF - rF) + (sG - rG) + 1
    if F.alphabet.order ** width > cap:
        raise CapExceeded(f"composite table of width {width} exceeds cap")
    abc = letters(F.alphabet)
    table = {
        w: F.local(G.apply_window(w))
        for w in itertools.product(abc, repeat=width)
    }
    return CellularAutomaton(F.alphabet, (rF + rG, sF + sG), table=table)


def power(F: CellularAutomaton, n: int, cap: int = DEFAULT_TABLE_CAP) -> CellularAutomaton:
    """The n-th iterate of F (n >= 0)."""
    if n < 0:
        raise ValueError("negative CA power")
    if n == 0:
        return identity_ca(F.alphabet)
    if F.coeffs is not None:
        poly = LaurentPoly(F.alphabet, F.coeffs) ** n
        const = None
        if F.constant is not None:
            # (L + c)^n adds sum_{j<n} S^j(c) where S is the coefficient sum.
            S = Endomorphism.zero_map(F.alphabet)
            for f in F.coeffs.values():
                S = S + f
            acc = F.alphabet.zero
            term = F.constant
            for _ in range(n):
                acc = F.alphabet.add(acc, term)
                term = S(term)
            const = acc
        rF, sF = F.neighborhood
        return linear_ca(
            F.alphabet, poly.terms, constant=const, neighborhood=(rF * n, sF * n)
        )
    result = F
    for _ in range(n - 1):
        result = compose(F, result, cap)
    return result


def with_shift(F: CellularAutomaton, m: int) -> CellularAutomaton:
    """The CA sigma^m after F."""
    r, s = F.neighborhood
    if F.coeffs is not None:
        coeffs = {u + m: f for u, f in F.coeffs.items()}
        return CellularAutomaton(
            F.alphabet, (r + m, s + m), coeffs=coeffs, constant=F.constant
        )
    return CellularAutomaton(F.alphabet, (r + m, s + m), table=dict(F.table))


def as_laurent(F: CellularAutomaton) -> LaurentPoly:
    """Polynomial representation of a linear CA."""
    if not F.is_linear:
        raise ValueError("only linear rules have a polynomial form")
    return LaurentPoly(F.alphabet, dict(F.coeffs))


def from_laurent(poly: LaurentPoly, alphabet: GroupSpec | None = None) -> CellularAutomaton:
    group = alphabet if alphabet is not None else poly.group
    if group != poly.group:
        raise ValueError("alphabet does not match polynomial group")
    return linear_ca(group, dict(poly.terms))


# -- surjectivity -------------------------------------------------------------


@dataclass(frozen=True)
class SurjectivityResult:
    """Outcome of the word-count balance check on the transition graph.

    `decided` is True when the set of count vectors closed up, which settles
    surjectivity exactly; otherwise the verdict is only 'balanced up to the
    reported depth'.
    """

    surjective: bool
    decided: bool
    depth: int
    witness: Word | None = None

    def __bool__(self) -> bool:
        return self.surjective


def is_surjective(F: CellularAutomaton, l_max: int | None = None) -> SurjectivityResult:
    """Balance check: every length-L word must have exactly |A|^(s-r) preimage
    words of length L+(s-r).  Counts are propagated along the overlap graph:
    states are (s-r)-letter windows, and a letter of output advances every
    count vector by one transfer step.
    """
    small = F.smallest_neighborhood()
    r, s = small.neighborhood
    k = s - r
    abc = letters(small.alphabet)
    n = len(abc)
    if l_max is None:
        l_max = 2 * (k + 1) * max(1, math.ceil(math.log2(n))) + 4
    states = list(itertools.product(abc, repeat=k))
    index = {u: i for i, u in enumerate(states)}
    edges_by_letter: dict[Element, list[tuple[int, int]]] = {b: [] for b in abc}
    for u in states:
        for a in abc:
            full = u + (a,)
            b = small.local(full)
            edges_by_letter[b].append((index[u], index[full[1:]]))
    target = n**k
    start = (1,) * len(states)
    seen = {start}
    frontier: list[tuple[tuple[int, ...], Word]] = [(start, ())]
    depth = 0
    while frontier and depth < l_max:
        depth += 1
        next_frontier = []
        for vec, word in frontier:
            for b in abc:
                out = [0] * len(states)
                for u_i, v_i in edges_by_letter[b]:
                    out[v_i] += vec[u_i]
                total = sum(out)
                if total != target:
                    return SurjectivityResult(False, True, depth, word + (b,))
                tvec = tuple(out)
                if tvec not in seen:
                    seen.add(tvec)
                    next_frontier.append((tvec, word + (b,)))
        frontier = next_frontier
    return SurjectivityResult(True, not frontier, depth)


# -- cylinder preimages --------------------------------------------------------


def cylinder_preimage(F: CellularAutomaton, cyl: Cylinder,
                      cap: int = DEFAULT_PREIMAGE_CAP) -> list[Cylinder]:
    """F^-1 of a cylinder as a disjoint union of cylinders.

    The preimage constrains exactly the coordinates [i+r, i+|w|-1+s]; the
    returned cylinders enumerate every input word mapping onto the target.
    """
    small = F.smallest_neighborhood()
    r, s = small.neighborhood
    k = s - r
    abc = letters(small.alphabet)
    out: list[Cylinder] = []
    target = cyl.word
    stack: list[Word] = [w for w in (itertools.product(abc, repeat=k))]
    # depth-first extension: each new letter must complete a window mapping
    # onto the next target letter.
    def extend(prefix: Word) -> None:
        t = len(prefix) - k
        if t == len(target):
            if len(out) >= cap:
                raise CapExceeded(f"preimage cylinder count exceeds cap {cap}")
            out.append(Cylinder(cyl.offset + r, prefix))
            return
        for a in abc:
            if small.local(prefix[t:] + (a,)) == target[t]:
                extend(prefix + (a,))

    if k == 0:
        extend(())
    else:
        for seed in stack:
            extend(seed)
    return out
