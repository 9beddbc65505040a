"""Sparse multivariate polynomials over the integers (rationals internally).

Used both for congruence counting (evaluation mod p^m with integer
arithmetic) and as the arguments of valuation factors in constructible
functions.  Exponent tuples are the keys; zero coefficients are dropped.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence, Union

Rat = Union[int, Fraction]


class Polynomial:
    """Canonical sparse form: {exponent tuple: nonzero coefficient}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Rat] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be >= 0")
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError("exponent tuple arity mismatch")
            if any(e < 0 for e in exps):
                raise ValueError("exponents must be >= 0")
            c = Fraction(c)
            if c != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def constant(cls, c: Rat, nvars: int = 0) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, index: int, nvars: int) -> "Polynomial":
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exps: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.nvars, out)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative powers not supported")
        out = Polynomial.constant(1, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError("arity mismatch")

    def mentions(self, index: int) -> bool:
        return any(e[index] > 0 for e in self.terms)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self.terms), default=0)

    def eval(self, values: Sequence[Rat]) -> Fraction:
        total = Fraction(0)
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(values, exps):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    def eval_int(self, values: Sequence[int]) -> int:
        """Exact integer evaluation; requires integer coefficients."""
        total = 0
        for exps, c in self.terms.items():
            if c.denominator != 1:
                raise ValueError("eval_int requires integer coefficients")
            v = c.numerator
            for x, e in zip(values, exps):
                if e:
                    v *= x**e
            total += v
        return total

    def eval_mod(self, values: Sequence[int], mod: int) -> int:
        total = 0
        for exps, c in self.terms.items():
            if c.denominator != 1:
                raise ValueError("eval_mod requires integer coefficients")
            v = c.numerator % mod
            for x, e in zip(values, exps):
                if e:
                    v = v * pow(x, e, mod) % mod
            total = (total + v) % mod
        return total

    def shift_var(self, index: int, c: Rat) -> "Polynomial":
        """Substitute x_index -> x_index + c (binomial expansion)."""
        c = Fraction(c)
        if c == 0:
            return self
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            # (x + c)^e expanded by rows of Pascal's triangle
            binom = 1
            for j in range(e + 1):
                new = list(exps)
                new[index] = j
                key = tuple(new)
                out[key] = out.get(key, Fraction(0)) + coeff * binom * c ** (e - j)
                binom = binom * (e - j) // (j + 1)
        return Polynomial(self.nvars, out)

    def single_monomial(self) -> tuple[Fraction, tuple[int, ...]] | None:
        """(coefficient, exponents) when the polynomial has exactly one term."""
        if len(self.terms) != 1:
            return None
        (exps, c), = self.terms.items()
        return c, exps

    def render(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = _rat_str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_rat_str(mag)] + factors)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({self.render()})"


def _rat_str(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"
