"""Closed-form singular expansions for the nested-integral families.

Every public function returns a :class:`SingExpansion` describing the small-t
behaviour of one family of nested integrals, exact where the calculus pins a
coefficient down and with :class:`Undetermined` placeholders where it cannot.
The chain families are driven by the Euler-operator recurrences alone; the
cube families go through the σ-tower reduction in :mod:`singulog.reduction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .coeffs import exact, fresh_undetermined, Exact, Undetermined
from .expansion import LogPowTerm, SingExpansion, euler_solve, term
from . import reduction
from .reduction import biv, eval_tower, logw, pair_tower, plain


@dataclass(frozen=True)
class LogKernel:
    """Kernel log(t + product)."""


@dataclass(frozen=True)
class PowerKernel:
    """Kernel (t + product)**alpha."""

    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))


Kernel = LogKernel | PowerKernel


@dataclass(frozen=True)
class CubeSpec:
    """``∫ r1^e1 ... rn^en K(t + r1⋯rn) dr`` over ``[0, delta]^n``."""

    exponents: tuple[int, ...]
    kernel: Kernel = field(default_factory=LogKernel)
    delta: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if not self.exponents:
            raise ValueError("need at least one chain variable")
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be nonnegative integers")
        if self.delta <= 0:
            raise ValueError("delta must be positive")


@dataclass(frozen=True)
class LogCubeSpec:
    """Same cube with a ``(log r0)^log_power r0^outer_exponent`` weight on one
    extra distinguished variable, log kernel."""

    outer_exponent: int
    exponents: tuple[int, ...] = ()
    log_power: int = 1
    delta: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.outer_exponent < 0 or any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be nonnegative integers")
        if self.log_power < 1:
            raise ValueError("log weight must have power >= 1")
        if self.delta <= 0:
            raise ValueError("delta must be positive")


# ---------------------------------------------------------------------------
# chain families (Euler recurrences)


def _power_chain(alpha: Fraction, depth: int) -> SingExpansion:
    if alpha.denominator == 1 and alpha >= 0:
        return SingExpansion.holo(0)  # wholly analytic at 0
    if alpha == -1:
        cur = SingExpansion((term(-1, 0, 1),), holo_order=0)
    else:
        cur = SingExpansion((term(Fraction(-1, 1) / (alpha + 1), alpha + 1),), holo_order=0)
    for _ in range(depth - 1):
        cur = euler_solve(alpha + 1, -cur)
    return cur


def expand_power_chain(alpha, depth: int = 1) -> SingExpansion:
    """Depth-``depth`` power chain with weight exponent ``alpha``.

    Defined by the base case ``-t^(alpha+1)/(alpha+1)`` (``-log t`` at
    alpha = -1) modulo analytic terms, and the recurrence that applying
    ``t d/dt - (alpha+1)`` peels one level off with a sign flip.
    """
    alpha = Fraction(alpha)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if alpha.denominator == 1 and alpha >= 0:
        raise ValueError("chain is analytic at 0 for nonnegative integer alpha")
    return _power_chain(alpha, depth)


def expand_weighted_power_chain(alpha, depth: int = 1) -> SingExpansion:
    """The ``(delta - r)``-weighted variant: chain at alpha+1 minus t times
    the chain at alpha."""
    alpha = Fraction(alpha)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return _power_chain(alpha + 1, depth) - _power_chain(alpha, depth).mul_monomial(1, 1)


def expand_poly_log_chain(n: int, depth: int = 1) -> SingExpansion:
    """Chains whose (n+1)-st t-derivative is ``n!`` times the alpha = -1
    chain, recovered by repeated antidifferentiation."""
    if n < 0 or depth < 1:
        raise ValueError("need n >= 0 and depth >= 1")
    cur = _power_chain(Fraction(-1), depth).scale(factorial(n))
    for _ in range(n + 1):
        cur = cur.antiderivative()
    return cur


def expand_weighted_poly_log_chain(n: int, depth: int = 1) -> SingExpansion:
    if n < 0 or depth < 1:
        raise ValueError("need n >= 0 and depth >= 1")
    return expand_poly_log_chain(n + 1, depth) - expand_poly_log_chain(n, depth).mul_monomial(1, 1)


def expand_log_power_resolvent(m: int, upper=Fraction(1)) -> SingExpansion:
    """``∫_0^upper (log σ)^m / (t+σ) dσ``; exact through the leading log power,
    undetermined below it unless the upper limit is exactly 1."""
    return reduction.log_resolvent(m, Fraction(upper))


def expand_log_cube_resolvent(n: int, m: int, which: str = "K") -> SingExpansion:
    """Resolvent over an (n+1)-variable product with a ``(log r0)^m`` weight
    (``which="K"``), or its antiderivative from 0 (``which="J"``)."""
    if n < 0 or m < 0:
        raise ValueError("need n >= 0 and m >= 0")
    cur = reduction.log_resolvent(m)
    for _ in range(n):
        cur = euler_solve(0, -cur)
    if which == "K":
        return cur
    if which == "J":
        return cur.antiderivative()
    raise ValueError("which must be 'K' or 'J'")


def expand_pair_over_r(q, v: int) -> SingExpansion:
    """``∫_0^1 [(t+r)^q log(t+r)^v - t^q log(t)^v] dr/r``."""
    if v < 0:
        raise ValueError("log power must be nonnegative")
    return pair_tower(Fraction(q), v)


# ---------------------------------------------------------------------------
# cube families (σ-tower reduction)


def _kernel_state(kernel: Kernel):
    if isinstance(kernel, LogKernel):
        return [biv(1, ts_log=1)]
    return [biv(1, ts_pow=kernel.alpha)]


def _plain_levels(exponents: tuple[int, ...]) -> tuple:
    s = sorted(exponents, reverse=True)
    levels = [plain(s[-1])]
    for i in range(len(s) - 2, -1, -1):
        levels.append(plain(s[i] - s[i + 1] - 1))
    return tuple(levels)


def expand_cube(spec: CubeSpec) -> SingExpansion:
    if isinstance(spec.kernel, PowerKernel):
        a = spec.kernel.alpha
        if a.denominator == 1 and a >= 0:
            return SingExpansion.holo(0)
    out = eval_tower(_plain_levels(spec.exponents), _kernel_state(spec.kernel))
    out.check_bound(*cube_bound(spec))
    if spec.delta != 1:
        pref = Fraction(sum(e + 1 for e in spec.exponents))
        if isinstance(spec.kernel, PowerKernel):
            pref += len(spec.exponents) * spec.kernel.alpha
        out = _delta_rescale([(out, True)], spec.delta, len(spec.exponents), pref)
    return out


def cube_bound(spec: CubeSpec) -> tuple[Fraction, int]:
    """(least singular exponent, largest log power) any output may contain."""
    n = len(spec.exponents)
    lo = Fraction(min(spec.exponents))
    if isinstance(spec.kernel, LogKernel):
        return lo + 1, n
    a = spec.kernel.alpha
    if a == -1:
        return lo + a + 1, n
    return lo + a + 1, n - 1


def expand_log_cube(spec: LogCubeSpec) -> SingExpansion:
    out = _log_cube(spec.outer_exponent, tuple(sorted(spec.exponents, reverse=True)), spec.log_power)
    out.check_bound(*log_cube_bound(spec))
    if spec.delta != 1:
        pref = Fraction(sum(e + 1 for e in spec.exponents) + spec.outer_exponent + 1)
        parts = [(out, True)] + [
            (_log_cube(spec.outer_exponent, tuple(sorted(spec.exponents, reverse=True)), s)
             if s else expand_cube(CubeSpec((spec.outer_exponent,) + spec.exponents)), False)
            for s in range(spec.log_power)
        ]
        out = _delta_rescale(parts, spec.delta, len(spec.exponents) + 1, pref)
    return out


def _log_cube(e0: int, rest: tuple[int, ...], m: int) -> SingExpansion:
    if not rest:
        return eval_tower((logw(m, e0),), _kernel_state(LogKernel()))
    d0 = e0 - rest[0]
    if d0 >= 0:
        levels = _plain_levels(rest) + (logw(m, d0 - 1),)
        return eval_tower(levels, _kernel_state(LogKernel()))
    # leading exponent exceeds the weighted one: trade the weighted variable
    # against the largest plain one by parts, lowering either the log power
    # or the number of plain variables each step
    merged = _log_cube(e0, rest[1:], m)
    if m == 1:
        lower = expand_cube(CubeSpec((e0,) + rest))
    else:
        lower = _log_cube(e0, rest, m - 1)
    return (merged + lower.scale(m)).scale(Fraction(-1, d0))


def log_cube_bound(spec: LogCubeSpec) -> tuple[Fraction, int]:
    lo = min((spec.outer_exponent,) + spec.exponents)
    return Fraction(lo + 1), len(spec.exponents) + spec.log_power + 1


# ---------------------------------------------------------------------------
# rescaling the cube side away from 1


def _delta_rescale(
    parts: list[tuple[SingExpansion, bool]],
    delta: Fraction,
    nvars: int,
    pref_pow: Fraction,
) -> SingExpansion:
    """Map expansions in ``t / delta^nvars`` back to ``t``.

    The substitution multiplies each ``t^p`` by a power of delta and expands
    ``(log t - nvars·log delta)^m`` binomially.  Only the top log power of a
    part marked exact keeps a rational coefficient (and only when the
    accumulated delta power is an integer); every other contribution involves
    ``log delta`` and is demoted to an undetermined constant.
    """
    out: list[LogPowTerm] = []
    holo: int | None = None
    pref_exact = pref_pow.denominator == 1
    for expansion, is_exact in parts:
        if expansion.holo_order is not None:
            holo = expansion.holo_order if holo is None else min(holo, expansion.holo_order)
        for t in expansion.terms:
            dpow = pref_pow - nvars * t.exponent
            keep_exact = (
                is_exact
                and pref_exact
                and dpow.denominator == 1
                and isinstance(t.coeff, Exact)
            )
            if keep_exact:
                out.append(
                    LogPowTerm(exact(t.coeff.value * delta ** int(dpow)), t.exponent, t.logpow)
                )
            else:
                out.append(
                    LogPowTerm(fresh_undetermined("delta-rescale"), t.exponent, t.logpow)
                )
            for i in range(t.logpow):
                out.append(LogPowTerm(fresh_undetermined("delta-logmix"), t.exponent, i))
    return SingExpansion(tuple(out), holo).normalize()
