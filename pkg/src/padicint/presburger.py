"""Congruence-constrained integer intervals and their exact parametric sums.

A cell is the set of integers k mod n inside an open interval whose bounds
may be absent.  Reindexing gamma = k + n*tau turns every sum over a cell
into a sum over an integer range of tau; closed forms for geometric and
polynomially-weighted sums land in the coefficient ring of aqring.

The well-order here is the zigzag 0, 1, -1, 2, -2, ... under which every
nonempty cell union has a least element computable from at most two
candidates per cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence, Union

from .aqring import AqElem
from .errors import DivergentSum, DomainError, EmptySet
from .padic import INFINITY, ExtendedInteger

Rat = Union[int, Fraction]


@dataclass(frozen=True)
class GammaCell:
    """Integers gamma with lower < gamma < upper and gamma = res mod mod.

    Either bound may be None, meaning no constraint on that side.
    """

    lower: Optional[int]
    upper: Optional[int]
    mod: int = 1
    res: int = 0

    def __post_init__(self):
        if self.mod < 1:
            raise ValueError("modulus must be >= 1")
        if not 0 <= self.res < self.mod:
            raise ValueError("residue must satisfy 0 <= res < mod")

    def contains(self, gamma: int) -> bool:
        if self.lower is not None and not self.lower < gamma:
            return False
        if self.upper is not None and not gamma < self.upper:
            return False
        return gamma % self.mod == self.res

    def tau_bounds(self) -> tuple[Optional[int], Optional[int]]:
        """Inclusive bounds of tau = (gamma - res)/mod; None means unbounded."""
        a = None
        if self.lower is not None:
            a = (self.lower - self.res) // self.mod + 1
        b = None
        if self.upper is not None:
            b = -((self.res - self.upper) // self.mod) - 1
        return a, b

    def is_empty(self) -> bool:
        a, b = self.tau_bounds()
        return a is not None and b is not None and a > b

    def members(self) -> Iterator[int]:
        """Iterate the members of a bounded cell in increasing order."""
        a, b = self.tau_bounds()
        if a is None or b is None:
            raise ValueError("cannot enumerate an unbounded cell")
        for tau in range(a, b + 1):
            yield self.res + tau * self.mod

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "mod": self.mod, "res": self.res}

    @classmethod
    def from_json(cls, data: dict) -> "GammaCell":
        return cls(data["lower"], data["upper"], data["mod"], data["res"])


@dataclass(frozen=True)
class PreparedLinear:
    """Piecewise-linear shape a*(gamma - k)/n + delta on gamma = k mod n."""

    a: int
    k: int
    n: int
    delta: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k < 0:
            raise ValueError("k must be >= 0")

    def eval(self, gamma: int) -> int:
        if (gamma - self.k) % self.n != 0:
            raise DomainError(
                f"gamma = {gamma} is not congruent to {self.k} mod {self.n}"
            )
        return self.a * ((gamma - self.k) // self.n) + self.delta


def prepared_eval(f: PreparedLinear, gamma: int) -> int:
    return f.eval(gamma)


class GammaCellUnion:
    """A finite union of pairwise-disjoint cells."""

    def __init__(self, cells: Iterable[GammaCell]):
        cells = list(cells)
        for i in range(len(cells)):
            for j in range(i + 1, len(cells)):
                if not cells_disjoint(cells[i], cells[j]):
                    raise ValueError(
                        f"cells {cells[i]} and {cells[j]} are not disjoint"
                    )
        self.cells = cells

    def contains(self, gamma: int) -> bool:
        return any(c.contains(gamma) for c in self.cells)

    def __iter__(self) -> Iterator[GammaCell]:
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def to_json(self) -> list:
        return [c.to_json() for c in self.cells]

    @classmethod
    def from_json(cls, data: list) -> "GammaCellUnion":
        return cls(GammaCell.from_json(d) for d in data)


# -- cardinality and intersection -------------------------------------------


def cell_cardinality(cell: GammaCell) -> ExtendedInteger:
    """Exact member count; INFINITY for nonempty cells missing a bound."""
    a, b = cell.tau_bounds()
    if a is not None and b is not None:
        return max(0, b - a + 1)
    return INFINITY


def intersect_cells(c1: GammaCell, c2: GammaCell) -> Optional[GammaCell]:
    """Exact intersection as a cell, or None when it is empty.

    The congruence part is combined by CRT; the interval part by taking the
    tighter bound on each side.
    """
    g = gcd(c1.mod, c2.mod)
    if (c2.res - c1.res) % g != 0:
        return None
    l = c1.mod // g * c2.mod
    # res = c1.res + c1.mod * t with t chosen so the second congruence holds.
    m2 = c2.mod // g
    t = ((c2.res - c1.res) // g * pow(c1.mod // g, -1, m2)) % m2 if m2 > 1 else 0
    res = (c1.res + c1.mod * t) % l
    lowers = [x for x in (c1.lower, c2.lower) if x is not None]
    uppers = [x for x in (c1.upper, c2.upper) if x is not None]
    cell = GammaCell(
        max(lowers) if lowers else None,
        min(uppers) if uppers else None,
        l,
        res,
    )
    return None if cell.is_empty() else cell


def cells_disjoint(c1: GammaCell, c2: GammaCell) -> bool:
    return intersect_cells(c1, c2) is None


# -- polynomial helpers (dense rational coefficients, low degree first) ------


def poly_eval(coeffs: Sequence[Rat], x: Rat) -> Fraction:
    total = Fraction(0)
    for c in reversed(list(coeffs)):
        total = total * Fraction(x) + Fraction(c)
    return total


def poly_shift(coeffs: Sequence[Rat], c: Rat) -> list[Fraction]:
    """Coefficients of p(x + c)."""
    out = [Fraction(0)]
    for coeff in reversed(list(coeffs)):
        # out = out * (x + c) + coeff
        new = [Fraction(0)] * (len(out) + 1)
        for i, v in enumerate(out):
            new[i + 1] += v
            new[i] += v * Fraction(c)
        new[0] += Fraction(coeff)
        out = _trim(new)
    return out


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def finite_differences(coeffs: Sequence[Rat]) -> list[Fraction]:
    """Values (delta^j p)(0) for j = 0..deg(p)."""
    cur = [Fraction(c) for c in coeffs]
    out = []
    while True:
        out.append(poly_eval(cur, 0))
        if len(cur) <= 1:
            break
        cur = _trim(
            [a - b for a, b in zip(poly_shift(cur, 1), cur + [Fraction(0)])]
        )
    return out


def binom_int(s: int, k: int) -> Fraction:
    """Binomial coefficient as the polynomial s(s-1)...(s-k+1)/k!, any int s."""
    num = 1
    for i in range(k):
        num *= s - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return Fraction(num, den)


# -- closed-form sums --------------------------------------------------------


def geom_sum(cell: GammaCell, N: int) -> AqElem:
    """Exact sum of (q^-N)^tau over the reindexed cell, tau = (gamma-res)/mod.

    The bounded closed form is (x^a - x^(b+1)) / (1 - x) with x = q^-N and
    inclusive tau-range [a, b]; it matches direct enumeration term for term
    (both endpoints contribute).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if cell.is_empty():
        return AqElem.zero()
    a, b = cell.tau_bounds()
    if a is None:
        raise DivergentSum("cell is unbounded below in the summation index")
    if b is None:
        return AqElem.q_power(-N * a) * AqElem.geom(N)
    return (AqElem.q_power(-N * a) - AqElem.q_power(-N * (b + 1))) * AqElem.geom(N)


def weighted_tail(poly: Sequence[Rat], a: int, N: int) -> AqElem:
    """Exact sum of poly(tau) * q^(-N tau) over tau >= a, for N >= 1.

    Expands poly(a + s) in the binomial basis C(s, j); each basis sum is
    q^(-N(a+j)) / (1 - q^-N)^(j+1).
    """
    diffs = finite_differences(poly_shift(poly, a))
    total = AqElem.zero()
    for j, c in enumerate(diffs):
        if c != 0:
            total = total + AqElem.q_power(-N * (a + j), c) * AqElem.geom(N, j + 1)
    return total


def weighted_sum(cell: GammaCell, poly: Sequence[Rat], N: int) -> AqElem:
    """Exact sum of poly(tau) * (q^-N)^tau over the reindexed cell.

    N = 0 is permitted only on bounded cells (plain polynomial summation);
    denominators of the result are powers of (1 - q^-N).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if cell.is_empty():
        return AqElem.zero()
    if all(Fraction(c) == 0 for c in poly):
        return AqElem.zero()
    a, b = cell.tau_bounds()
    if N == 0:
        if a is None or b is None:
            raise DivergentSum("N = 0 diverges on an infinite cell")
        # discrete antiderivative F with F(s+1) - F(s) = poly(s)
        diffs = finite_differences(poly)
        total = Fraction(0)
        for j, d in enumerate(diffs):
            total += d * (binom_int(b + 1, j + 1) - binom_int(a, j + 1))
        return AqElem.from_rational(total)
    if a is None:
        raise DivergentSum("cell is unbounded below in the summation index")
    if b is None:
        return weighted_tail(poly, a, N)
    return weighted_tail(poly, a, N) - weighted_tail(poly, b + 1, N)


def gamma_weight_sum(cell: GammaCell, N: int = 1) -> AqElem:
    """Exact sum of q^(-N gamma) over the cell members gamma themselves.

    Unlike geom_sum this weight does not depend on the cell presentation,
    so it is additive across disjoint refinements of the same set.
    """
    return AqElem.q_power(-N * cell.res) * geom_sum(cell, N * cell.mod)


# -- the zigzag well-order -----------------------------------------------------


def wellorder_key(x: int) -> int:
    """Rank in the chain 0, 1, -1, 2, -2, ...: positives at 2x-1, rest at -2x."""
    return 2 * x - 1 if x > 0 else -2 * x


def wellorder_less(x: int, y: int) -> bool:
    return wellorder_key(x) < wellorder_key(y)


def _cell_wellorder_min(cell: GammaCell) -> Optional[int]:
    """Least member of one cell under the zigzag order, or None if empty.

    Only two candidates matter: the least nonnegative member and the
    greatest negative member.
    """
    if cell.is_empty():
        return None
    a, b = cell.tau_bounds()
    candidates = []
    # least nonnegative member: gamma >= 0 iff tau >= 0 (since 0 <= res < mod)
    tau = 0 if a is None else max(a, 0)
    if b is None or tau <= b:
        candidates.append(cell.res + tau * cell.mod)
    # greatest negative member: gamma <= -1 iff tau <= -1
    tau = -1 if b is None else min(b, -1)
    if a is None or tau >= a:
        candidates.append(cell.res + tau * cell.mod)
    if not candidates:
        return None
    return min(candidates, key=wellorder_key)


def wellorder_min(union: GammaCellUnion | Iterable[GammaCell]) -> int:
    cells = list(union)
    best = None
    for cell in cells:
        m = _cell_wellorder_min(cell)
        if m is not None and (best is None or wellorder_less(m, best)):
            best = m
    if best is None:
        raise EmptySet("the union has no members")
    return best


def wellorder_min_product(
    product_cells: Iterable[Sequence[GammaCell]],
) -> tuple[int, ...]:
    """Least tuple, lexicographically in the zigzag order, over a finite
    union of product cells.  Coordinates of a product cell are independent,
    so its least tuple is the tuple of per-coordinate minima."""
    best = None
    for factors in product_cells:
        mins = []
        for cell in factors:
            m = _cell_wellorder_min(cell)
            if m is None:
                break
            mins.append(m)
        else:
            key = tuple(wellorder_key(v) for v in mins)
            if best is None or key < best[0]:
                best = (key, tuple(mins))
    if best is None:
        raise EmptySet("the union has no members")
    return best[1]
