"""Finite log-power expansions of a single small variable, modulo analytic tails.

A :class:`SingExpansion` is a finite sum of terms

    c * t**p * log(t + i0)**m

with rational exponents ``p`` and integer log powers ``m >= 0``, plus an
optional marker ``holo_order = k`` standing for an *unknown* function that is
analytic at 0 and vanishes to order ``k`` (an unspecified tail
``sum_{j>=k} a_j t**j``).  The marker is how "equal up to something
holomorphic" becomes a first-class, closed-under-the-calculus object: once a
reduction step discards analytic information, every later step knows that
integer-power, log-free terms of high enough order are meaningless and folds
them away.

The branch of the logarithm is fixed once and for all: ``t`` approaches 0
from the upper half plane, written ``log(t+i0)`` in rendered output.

All operations return normalized expansions: terms sorted by ascending
exponent (ties: descending log power), duplicates merged, exact zeros
dropped, and -- when a tail marker is present -- log-free integer-exponent
terms at or above the marker order absorbed into it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial

from .coeffs import (
    Coefficient,
    Exact,
    Fitted,
    Undetermined,
    coeff_add,
    coeff_neg,
    coeff_scale,
    exact,
    fresh_undetermined,
    is_zero,
)

BRANCH = "t+i0"


class ExpansionError(ValueError):
    pass


@dataclass(frozen=True)
class LogPowTerm:
    coeff: Coefficient
    exponent: Fraction
    logpow: int

    def __post_init__(self):
        if self.logpow < 0:
            raise ExpansionError(f"negative log power {self.logpow}")

    def is_holomorphic(self) -> bool:
        """True when the term is analytic at 0: integer exponent >= 0, no log."""
        return (
            self.logpow == 0
            and self.exponent.denominator == 1
            and self.exponent >= 0
        )


def term(c, p, m: int = 0) -> LogPowTerm:
    coeff = c if isinstance(c, (Exact, Undetermined, Fitted)) else exact(c)
    return LogPowTerm(coeff, Fraction(p), m)


@dataclass(frozen=True)
class SingExpansion:
    terms: tuple[LogPowTerm, ...] = ()
    holo_order: int | None = None

    # -- construction ---------------------------------------------------

    @staticmethod
    def of(*terms_: LogPowTerm, holo_order: int | None = None) -> "SingExpansion":
        return SingExpansion(tuple(terms_), holo_order).normalize()

    @staticmethod
    def zero() -> "SingExpansion":
        return SingExpansion()

    @staticmethod
    def holo(order: int = 0) -> "SingExpansion":
        """An entirely unknown analytic function vanishing to ``order``."""
        return SingExpansion((), order)

    def normalize(self) -> "SingExpansion":
        merged: dict[tuple[Fraction, int], Coefficient] = {}
        for t in self.terms:
            key = (t.exponent, t.logpow)
            if key in merged:
                merged[key] = coeff_add(merged[key], t.coeff)
            else:
                merged[key] = t.coeff
        out = []
        for (p, m), c in merged.items():
            if is_zero(c):
                continue
            if (
                self.holo_order is not None
                and m == 0
                and p.denominator == 1
                and p >= self.holo_order
                and not isinstance(c, Fitted)
            ):
                continue  # swallowed by the unknown analytic tail
            out.append(LogPowTerm(c, p, m))
        out.sort(key=lambda t: (t.exponent, -t.logpow))
        return SingExpansion(tuple(out), self.holo_order)

    # -- linear structure ----------------------------------------------

    def __add__(self, other: "SingExpansion") -> "SingExpansion":
        ho = _merge_holo(self.holo_order, other.holo_order)
        return SingExpansion(self.terms + other.terms, ho).normalize()

    def __neg__(self) -> "SingExpansion":
        return SingExpansion(
            tuple(replace(t, coeff=coeff_neg(t.coeff)) for t in self.terms),
            self.holo_order,
        )

    def __sub__(self, other: "SingExpansion") -> "SingExpansion":
        return self + (-other)

    def scale(self, r) -> "SingExpansion":
        r = Fraction(r)
        if r == 0:
            return SingExpansion((), self.holo_order)
        return SingExpansion(
            tuple(replace(t, coeff=coeff_scale(t.coeff, r)) for t in self.terms),
            self.holo_order,
        ).normalize()

    def mul_monomial(self, c, dp, dm: int = 0) -> "SingExpansion":
        """Multiply by ``c * t**dp * log**dm``.

        With an analytic-tail marker present only log-free shifts by a
        nonnegative integer are meaningful (the tail stays an analytic tail);
        anything else would need tail detail we do not have.
        """
        c = Fraction(c)
        dp = Fraction(dp)
        ho = self.holo_order
        if ho is not None:
            if dm != 0 or dp.denominator != 1 or dp < 0:
                raise ExpansionError(
                    "cannot multiply an unknown analytic tail by "
                    f"t**{dp} log**{dm}"
                )
            ho = None if c == 0 else ho + int(dp)
        terms_ = tuple(
            LogPowTerm(coeff_scale(t.coeff, c), t.exponent + dp, t.logpow + dm)
            for t in self.terms
        )
        return SingExpansion(terms_, ho).normalize()

    # -- calculus -------------------------------------------------------

    def derivative(self) -> "SingExpansion":
        out = []
        for t in self.terms:
            if t.exponent != 0:
                out.append(
                    LogPowTerm(coeff_scale(t.coeff, t.exponent), t.exponent - 1, t.logpow)
                )
            if t.logpow > 0:
                out.append(
                    LogPowTerm(coeff_scale(t.coeff, t.logpow), t.exponent - 1, t.logpow - 1)
                )
        ho = self.holo_order
        if ho is not None:
            ho = max(ho - 1, 0)
        return SingExpansion(tuple(out), ho).normalize()

    def antiderivative(self) -> "SingExpansion":
        """Term-by-term antiderivative with zero integration constants.

        When an analytic tail is present the tail's own integration constant
        is unknown, so the result carries a tail of order 0.  Exponent -1 is
        refused: integrating across it changes the log degree and every
        pipeline that needs it handles it explicitly before reaching here.
        """
        out = []
        for t in self.terms:
            if t.exponent == -1:
                raise ExpansionError("antiderivative at exponent -1")
            p1 = t.exponent + 1
            for r in range(t.logpow + 1):
                fac = Fraction((-1) ** r * factorial(t.logpow), factorial(t.logpow - r))
                out.append(
                    LogPowTerm(
                        coeff_scale(t.coeff, fac / p1 ** (r + 1)), p1, t.logpow - r
                    )
                )
        ho = None if self.holo_order is None else 0
        return SingExpansion(tuple(out), ho).normalize()

    def apply_euler(self, shift) -> "SingExpansion":
        """Apply the operator ``t d/dt - shift``."""
        s = Fraction(shift)
        out = []
        for t in self.terms:
            if t.exponent != s:
                out.append(LogPowTerm(coeff_scale(t.coeff, t.exponent - s), t.exponent, t.logpow))
            if t.logpow > 0:
                out.append(LogPowTerm(coeff_scale(t.coeff, t.logpow), t.exponent, t.logpow - 1))
        return SingExpansion(tuple(out), self.holo_order).normalize()

    # -- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms and self.holo_order is None

    def singular_terms(self) -> tuple[LogPowTerm, ...]:
        return tuple(t for t in self.terms if not t.is_holomorphic())

    def leading(self) -> LogPowTerm:
        sing = self.singular_terms()
        if not sing:
            raise ExpansionError("no singular term to lead with")
        return sing[0]

    def check_bound(self, min_exponent, max_logpow: int) -> None:
        """Assert every singular term obeys ``p >= min_exponent, m <= max_logpow``."""
        floor = Fraction(min_exponent)
        for t in self.singular_terms():
            if t.exponent < floor or t.logpow > max_logpow:
                raise ExpansionError(
                    f"term t**{t.exponent} log**{t.logpow} violates the "
                    f"structure bound (>= t**{floor}, log <= {max_logpow})"
                )

    def same_structure(self, other: "SingExpansion", tol: float = 0.0) -> bool:
        """Term-by-term match: same (exponent, logpow) grid, exact coefficients
        equal, undetermined slots aligned with undetermined slots, fitted
        values within ``tol``.  Tail markers must agree."""
        if self.holo_order != other.holo_order:
            return False
        if len(self.terms) != len(other.terms):
            return False
        for a, b in zip(self.terms, other.terms):
            if (a.exponent, a.logpow) != (b.exponent, b.logpow):
                return False
            if isinstance(a.coeff, Undetermined) != isinstance(b.coeff, Undetermined):
                return False
            if isinstance(a.coeff, Undetermined):
                continue
            if isinstance(a.coeff, Exact) and isinstance(b.coeff, Exact):
                if a.coeff.value != b.coeff.value:
                    return False
            else:
                if abs(float(_value_of(a.coeff)) - float(_value_of(b.coeff))) > tol:
                    return False
        return True

    def evaluate(self, t: complex, undetermined: dict[str, complex] | None = None) -> complex:
        """Evaluate the explicit terms at a concrete complex point.

        Undetermined coefficients must be supplied by name; the analytic tail
        (if any) contributes nothing, so this is only meaningful close to 0
        or for tail-free expansions.
        """
        import cmath

        total = 0j
        lg = cmath.log(t)
        for tm in self.terms:
            c = tm.coeff
            if isinstance(c, Undetermined):
                if undetermined is None or c.name not in undetermined:
                    raise ExpansionError(f"no value for undetermined {c.name}")
                cv = complex(undetermined[c.name])
            else:
                cv = complex(float(_value_of(c)))
            total += cv * t ** float(tm.exponent) * lg ** tm.logpow
        return total

    # -- rendering ------------------------------------------------------

    def render(self) -> str:
        if not self.terms and self.holo_order is None:
            return "0"
        names = self.display_names()
        parts = []
        for t in self.terms:
            c = t.coeff
            cs = names[c.name] if isinstance(c, Undetermined) else str(c)
            bits = [cs]
            if t.exponent != 0:
                bits.append(f"t^{t.exponent}" if t.exponent != 1 else "t")
            if t.logpow:
                sup = f"^{t.logpow}" if t.logpow > 1 else ""
                bits.append(f"log({BRANCH}){sup}")
            parts.append("*".join(bits))
        if self.holo_order is not None:
            parts.append(f"holo[{self.holo_order}]")
        return " + ".join(parts)

    def display_names(self) -> dict[str, str]:
        """Stable relabelling of undetermined constants as C1, C2, ... in
        term order, so rendered output does not depend on allocation history."""
        names: dict[str, str] = {}
        for t in self.terms:
            if isinstance(t.coeff, Undetermined) and t.coeff.name not in names:
                names[t.coeff.name] = f"C{len(names) + 1}"
        return names

    def __str__(self) -> str:
        return self.render()


def _value_of(c: Coefficient) -> float | Fraction:
    return c.value


def _merge_holo(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def euler_solve(shift, rhs: SingExpansion) -> SingExpansion:
    """Solve ``(t d/dt - shift) f = rhs`` within the log-power class.

    Off resonance (``p != shift``) each source term inverts to a finite
    descending-log sum; on resonance the log degree climbs by one.  The
    homogeneous solution ``t**shift`` is appended as a fresh undetermined
    constant when it is genuinely singular (negative or fractional shift);
    for a nonnegative integer shift it is analytic, so it is folded into an
    unknown analytic tail instead.  An existing tail both passes through and
    -- when the shift resonates with one of its orders -- sheds a fresh
    ``t**shift * log`` term with unknown coefficient.
    """
    s = Fraction(shift)
    out = []
    for t in rhs.terms:
        c, p, m = t.coeff, t.exponent, t.logpow
        if p == s:
            out.append(LogPowTerm(coeff_scale(c, Fraction(1, m + 1)), p, m + 1))
        else:
            for i in range(m + 1):
                fac = Fraction((-1) ** i * factorial(m), factorial(m - i))
                out.append(LogPowTerm(coeff_scale(c, fac / (p - s) ** (i + 1)), p, m - i))
    ho = rhs.holo_order
    if ho is not None and s.denominator == 1 and s >= ho:
        out.append(LogPowTerm(fresh_undetermined(f"tail-resonance@{s}"), s, 1))
    if s.denominator != 1 or s < 0:
        out.append(LogPowTerm(fresh_undetermined(f"homogeneous@{s}"), s, 0))
    else:
        ho = _merge_holo(ho, int(s))
    return SingExpansion(tuple(out), ho).normalize()
