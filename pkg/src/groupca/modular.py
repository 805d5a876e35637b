"""Structure lemmas for linear rules over prime-power cyclic alphabets.

Covers the unit-coefficient support, the bipermutative power, the Frobenius
congruence for polynomial powers, the invertible-matrix period bound, and
polynomial factorization over prime fields with the kernel direct sum check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from .automata import CellularAutomaton, LaurentPoly, as_laurent, linear_ca, power
from .groups import CapExceeded, GroupSpec
from .kernels import kernel_elements

MAX_FACTOR_DEGREE = 8


def _prime_power(n: int) -> tuple[int, int]:
    """Decompose n as p^k, or raise."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        return n, 1
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"modulus {n} is not a prime power")
    return p, k


def _scalar_coeffs(F: CellularAutomaton) -> dict[int, int]:
    if not F.is_linear or F.alphabet.rank != 1:
        raise ValueError("needs a linear rule on a cyclic alphabet")
    return {u: f.matrix[0][0] for u, f in F.coeffs.items()}


@dataclass(frozen=True)
class PermutativeSupport:
    """Offsets whose coefficient is a unit mod p, with its extremes."""

    p: int
    k: int
    offsets: tuple[int, ...]

    @property
    def is_empty(self) -> bool:
        return not self.offsets

    @property
    def r_hat(self) -> int:
        if self.is_empty:
            raise ValueError("empty unit support")
        return self.offsets[0]

    @property
    def s_hat(self) -> int:
        if self.is_empty:
            raise ValueError("empty unit support")
        return self.offsets[-1]


def permutative_support(F: CellularAutomaton) -> PermutativeSupport:
    """Offsets of coefficients coprime with the base prime."""
    coeffs = _scalar_coeffs(F)
    p, k = _prime_power(F.alphabet.moduli[0])
    units = tuple(sorted(u for u, c in coeffs.items() if math.gcd(c, p) == 1))
    return PermutativeSupport(p, k, units)


def bipermutative_power(F: CellularAutomaton) -> CellularAutomaton:
    """F iterated p^(k-1) times, which is bipermutative with smallest
    neighborhood scaled from the unit support.  Both facts are asserted."""
    sup = permutative_support(F)
    if sup.is_empty:
        raise ValueError("no unit coefficients: no bipermutative power exists")
    if sup.r_hat >= sup.s_hat:
        raise ValueError("unit support must contain two distinct offsets")
    q = sup.p ** (sup.k - 1)
    Fq = power(F, q).smallest_neighborhood()
    if Fq.neighborhood != (q * sup.r_hat, q * sup.s_hat):
        raise AssertionError(
            f"power neighborhood {Fq.neighborhood} differs from "
            f"({q * sup.r_hat}, {q * sup.s_hat})"
        )
    if not Fq.permutativity().bipermutative:
        raise AssertionError("power is not bipermutative")
    return Fq


def _int_poly(poly: LaurentPoly | dict, mod: int) -> dict[int, int]:
    if isinstance(poly, LaurentPoly):
        coeffs = poly.scalar_coeffs()
    else:
        coeffs = dict(poly)
    return {u: c % mod for u, c in coeffs.items() if c % mod}


def _poly_mul_mod(a: dict[int, int], b: dict[int, int], mod: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for u, c in a.items():
        for v, d in b.items():
            out[u + v] = (out.get(u + v, 0) + c * d) % mod
    return {u: c for u, c in out.items() if c}


def _poly_pow_mod(a: dict[int, int], e: int, mod: int) -> dict[int, int]:
    result = {0: 1 % mod}
    base = dict(a)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, mod)
        base = _poly_mul_mod(base, base, mod)
        e >>= 1
    return result


def frobenius_congruence_check(
    P1: LaurentPoly | dict, P2: LaurentPoly | dict, p: int, j: int
) -> bool:
    """Verify (P1 + p*P2)^(p^j) = P1^(p^j) mod p^(j+1) by exact expansion."""
    if j < 0:
        raise ValueError("power index must be >= 0")
    mod = p ** (j + 1)
    a = _int_poly(P1, mod)
    b = _int_poly(P2, mod)
    lhs_base: dict[int, int] = dict(a)
    for u, c in b.items():
        lhs_base[u] = (lhs_base.get(u, 0) + p * c) % mod
    lhs = _poly_pow_mod({u: c for u, c in lhs_base.items() if c}, p**j, mod)
    rhs = _poly_pow_mod(a, p**j, mod)
    return lhs == rhs


def divisor_bound(p: int, r: int) -> int:
    """Count of invertible r x r matrices over the prime field: the universal
    divisor of first-level kernel periods."""
    if r < 1:
        raise ValueError("width must be >= 1")
    if _prime_power(p)[1] != 1:
        raise ValueError(f"{p} is not prime")
    return math.prod(p**r - p**i for i in range(r))


# -- factorization over prime fields -------------------------------------------


def _dense_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _dense_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        for j, d in enumerate(b):
            out[i + j] = (out[i + j] + c * d) % p
    return _dense_trim(out)


def _dense_divmod(
    num: tuple[int, ...], den: tuple[int, ...], p: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    num_l = list(num)
    deg_d = len(den) - 1
    inv_lead = pow(den[-1], -1, p)
    quot = [0] * max(0, len(num) - deg_d)
    for i in range(len(num) - 1, deg_d - 1, -1):
        c = num_l[i]
        if c == 0:
            continue
        q = (c * inv_lead) % p
        quot[i - deg_d] = q
        for j, d in enumerate(den):
            num_l[i - deg_d + j] = (num_l[i - deg_d + j] - q * d) % p
    return _dense_trim(quot), _dense_trim(num_l)


@dataclass(frozen=True)
class Factorization:
    """Factorization of a Laurent polynomial over a prime field.

    The original polynomial equals unit * X^shift_power * prod(f^m) for the
    monic irreducible factors f with multiplicities m.
    """

    p: int
    shift_power: int
    unit: int
    factors: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def is_irreducible(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1

    def reassemble(self) -> dict[int, int]:
        acc = (self.unit,)
        for f, m in self.factors:
            for _ in range(m):
                acc = _dense_mul(acc, f, self.p)
        return {i + self.shift_power: c for i, c in enumerate(acc) if c}

    def factor_automata(self, alphabet: GroupSpec) -> list[tuple[CellularAutomaton, int]]:
        """One CA per irreducible factor raised to its multiplicity."""
        out = []
        for f, m in self.factors:
            piece = (1,)
            for _ in range(m):
                piece = _dense_mul(piece, f, self.p)
            out.append((linear_ca(alphabet, dict(enumerate(piece))), m))
        return out


def factor_mod_p(poly: LaurentPoly | dict, p: int | None = None) -> Factorization:
    """Factor into monic irreducibles by trial division of increasing degree.

    Degrees are capped at 8: candidates found in increasing degree order are
    automatically irreducible because all smaller factors were removed first.
    """
    if isinstance(poly, LaurentPoly):
        if p is None:
            p = poly.group.moduli[0]
        coeffs = poly.scalar_coeffs()
    else:
        if p is None:
            raise ValueError("plain coefficient dicts need an explicit prime")
        coeffs = dict(poly)
    _, k = _prime_power(p)
    if k != 1:
        raise ValueError(f"{p} is not prime")
    coeffs = {u: c % p for u, c in coeffs.items() if c % p}
    if not coeffs:
        raise ValueError("zero polynomial")
    shift = min(coeffs)
    deg = max(coeffs) - shift
    if deg > MAX_FACTOR_DEGREE:
        raise ValueError(f"degree {deg} exceeds the factorization cap {MAX_FACTOR_DEGREE}")
    dense = [0] * (deg + 1)
    for u, c in coeffs.items():
        dense[u - shift] = c
    rem = _dense_trim(dense)
    unit = rem[-1]
    inv = pow(unit, -1, p)
    rem = tuple((c * inv) % p for c in rem)
    factors: list[tuple[tuple[int, ...], int]] = []
    d = 1
    while len(rem) - 1 > 0:
        if 2 * d > len(rem) - 1:
            factors.append((rem, 1))
            break
        for low in itertools.product(range(p), repeat=d):
            cand = low + (1,)
            mult = 0
            while len(rem) - 1 >= d:
                quot, r = _dense_divmod(rem, cand, p)
                if r:
                    break
                rem = quot
                mult += 1
            if mult:
                factors.append((cand, mult))
            if len(rem) - 1 < 2 * d:
                break
        d += 1
    return Factorization(p, shift, unit, tuple(factors))


def is_irreducible(poly: LaurentPoly | dict, p: int | None = None) -> bool:
    return factor_mod_p(poly, p).is_irreducible


def kernel_direct_sum_check(F: CellularAutomaton, n: int, cap: int = 1 << 14) -> bool:
    """Check that the n-th kernel splits as the direct sum of the kernels of
    the coprime factor powers: sizes multiply and the sum map is bijective."""
    _scalar_coeffs(F)  # shape validation
    if _prime_power(F.alphabet.moduli[0])[1] != 1:
        raise ValueError("direct sum check needs a prime cyclic alphabet")
    fact = factor_mod_p(as_laurent(F))
    whole = set(kernel_elements(F, n, cap))
    pieces = [kernel_elements(G, n, cap) for G, _ in fact.factor_automata(F.alphabet)]
    if math.prod(len(piece) for piece in pieces) != len(whole):
        return False
    sums = set()
    for combo in itertools.product(*pieces):
        if len(sums) > cap:
            raise CapExceeded(f"direct sum enumeration exceeds cap {cap}")
        total = combo[0]
        for x in combo[1:]:
            total = total + x
        sums.add(total)
    return sums == whole
