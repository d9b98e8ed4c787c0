"""Tower reduction of nested product-measure integrals to log-power expansions.

The integrals handled here all have the shape

    ∫ r1^e1 ... rn^en  K(t + r1⋯rn)  dr1...drn      over the unit cube,

optionally with a log-power weight on one distinguished variable.  After the
standard substitution to nested variables (each new variable is the product of
the old ones below it) this becomes a *tower*: an inside-out sequence of
one-dimensional ``∫_0^{next} σ^m (...) dσ`` levels acting on a state that is a
sum of terms

    c · t^a · log(t)^b · σ^k · (t+σ)^q · log(t+σ)^v.

Each level integrates in closed form; the upper limit re-enters the state as
the next level's variable and the lower limit sheds pure ``t``-terms.  Two
things need care:

* a level with combined power σ^{-1} is individually divergent.  The σ→0
  images of its terms must cancel exactly (checked), after which each
  ``(t+σ)``-term is paired with its own image and the difference is resolved
  through the Euler operator ``t d/dt - q`` — this is where resonances create
  the genuinely new log powers and where undetermined constants enter.

* the outermost level may carry a ``(log σ)^m`` weight.  Pure powers then
  integrate to exact rationals, and the mixed terms reduce to the log-weighted
  resolvent ``∫_0^1 (log σ)^m / (t+σ) dσ`` and its antiderivatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .coeffs import Coefficient, Exact, Fitted, Undetermined, coeff_neg, coeff_scale, exact
from .expansion import LogPowTerm, SingExpansion, euler_solve, term


class ReductionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# bivariate terms and tower levels


@dataclass(frozen=True)
class BivTerm:
    """One summand ``c · t^t_pow · log(t)^t_log · σ^s_pow · (t+σ)^ts_pow · log(t+σ)^ts_log``."""

    coeff: Coefficient
    t_pow: Fraction = Fraction(0)
    t_log: int = 0
    s_pow: int = 0
    ts_pow: Fraction = Fraction(0)
    ts_log: int = 0

    def __post_init__(self):
        if self.has_ts() and self.t_log:
            # log(t) factors only ever arise from σ→0 limits, which are pure.
            raise ReductionError("mixed log(t) and (t+σ) factors in one term")

    def has_ts(self) -> bool:
        return self.ts_pow != 0 or self.ts_log > 0


def biv(c, t_pow=0, t_log=0, s_pow=0, ts_pow=0, ts_log=0) -> BivTerm:
    coeff = c if isinstance(c, (Exact, Undetermined, Fitted)) else exact(c)
    return BivTerm(coeff, Fraction(t_pow), t_log, s_pow, Fraction(ts_pow), ts_log)


def plain(m: int) -> tuple:
    """A level ``∫_0^{next} σ^m · (state) dσ`` with integer m >= -1."""
    return ("plain", m)


def logw(log_power: int, m: int) -> tuple:
    """The outermost level ``∫_0^1 (log σ)^log_power σ^m · (state) dσ``."""
    return ("logw", log_power, m)


# ---------------------------------------------------------------------------
# the main walk


def eval_tower(levels: tuple, state) -> SingExpansion:
    terms = list(state)
    acc = SingExpansion.zero()
    for i, lev in enumerate(levels):
        if lev[0] == "logw":
            if i != len(levels) - 1:
                raise ReductionError("log-weighted level must be outermost")
            return acc + _log_level(lev[1], lev[2], terms)
        m = lev[1]
        divergent = [t for t in terms if t.s_pow + m == -1]
        if divergent:
            acc = acc + _divergent_plain(divergent, levels[i:])
        nxt = []
        for t in terms:
            if t.s_pow + m == -1:
                continue
            nxt.extend(_integrate_plain(t, m))
        terms = nxt
    out = acc
    for t in terms:
        out = out + _at_one(t)
    return out


def _integrate_plain(t: BivTerm, m: int) -> list[BivTerm]:
    K = t.s_pow + m
    if not t.has_ts():
        return [
            BivTerm(coeff_scale(t.coeff, Fraction(1, K + 1)), t.t_pow, t.t_log, K + 1)
        ]
    out = []
    # fold σ^K into the (t+σ) basis: σ^K = ((t+σ) - t)^K
    for j in range(K + 1):
        pref = coeff_scale(t.coeff, Fraction(comb(K, j) * (-1) ** (K - j)))
        tp = t.t_pow + (K - j)
        Q = t.ts_pow + j
        v = t.ts_log
        if Q == -1:
            c2 = coeff_scale(pref, Fraction(1, v + 1))
            out.append(BivTerm(c2, tp, 0, 0, Fraction(0), v + 1))
            out.append(BivTerm(coeff_neg(c2), tp, v + 1))
        else:
            for r in range(v + 1):
                fac = Fraction((-1) ** r * factorial(v), factorial(v - r)) / (Q + 1) ** (r + 1)
                c2 = coeff_scale(pref, fac)
                out.append(BivTerm(c2, tp, 0, 0, Q + 1, v - r))
                out.append(BivTerm(coeff_neg(c2), tp + Q + 1, v - r))
    return out


def _at_one(t: BivTerm) -> SingExpansion:
    """Substitute σ = 1 into a term that survived every level."""
    if not t.has_ts():
        return SingExpansion.of(LogPowTerm(t.coeff, t.t_pow, t.t_log))
    if t.ts_log == 0 and t.ts_pow.denominator == 1 and t.ts_pow >= 0:
        q = int(t.ts_pow)
        return SingExpansion.of(
            *(
                LogPowTerm(coeff_scale(t.coeff, comb(q, i)), t.t_pow + i, 0)
                for i in range(q + 1)
            )
        )
    # (1+t)^q log(1+t)^v is analytic at 0 but has no finite log-power form;
    # with a nonnegative integer power of t in front it disappears into an
    # unknown analytic tail.  Anything else would mean losing singular data.
    if t.t_pow.denominator != 1 or t.t_pow < 0:
        raise ReductionError(f"singular prefactor t^{t.t_pow} against an analytic remainder")
    return SingExpansion.holo(0)


def _collapse(t: BivTerm) -> LogPowTerm:
    return LogPowTerm(t.coeff, t.t_pow + t.ts_pow, t.t_log + t.ts_log)


def _divergent_plain(divergent: list[BivTerm], levels: tuple) -> SingExpansion:
    residue = SingExpansion(tuple(_collapse(t) for t in divergent)).normalize()
    if residue.terms:
        raise ReductionError(f"divergent 1/σ level does not cancel: {residue}")
    out = SingExpansion.zero()
    for t in divergent:
        if not t.has_ts():
            continue  # pairs with itself, contributing nothing
        if not isinstance(t.coeff, Exact):
            raise ReductionError("divergent class with non-exact coefficient")
        out = out + pair_tower(t.ts_pow, t.ts_log, levels).mul_monomial(
            t.coeff.value, t.t_pow
        )
    return out


def pair_tower(q, v: int, levels: tuple = (("plain", -1),)) -> SingExpansion:
    """Integrate ``[(t+σ)^q log(t+σ)^v - t^q log(t)^v] / σ`` through a tower.

    ``levels[0]`` is the divergent 1/σ level itself; any further levels apply
    on top.  Applying ``t d/dt - q`` to the paired integrand leaves one piece
    where the σ cancels (an ordinary tower) and one piece that is ``v·t``
    times the same pair at ``(q-1, v-1)``; solving back through the Euler
    operator reconstructs the integral modulo its resonances.
    """
    q = Fraction(q)
    if v == 0 and q == 0:
        return SingExpansion.zero()
    rhs = SingExpansion.zero()
    if q != 0:
        inner = (("plain", 0),) + tuple(levels[1:])
        rhs = rhs + eval_tower(inner, [BivTerm(exact(-q), Fraction(0), 0, 0, q - 1, v)])
    if v >= 1 and not (q - 1 == 0 and v - 1 == 0):
        rhs = rhs + pair_tower(q - 1, v - 1, levels).mul_monomial(v, 1)
    return euler_solve(q, rhs)


# ---------------------------------------------------------------------------
# the log-weighted outermost level


def _weight_moment(j: int, m: int) -> Fraction:
    """``∫_0^1 (log σ)^m σ^j dσ`` for j >= 0."""
    return Fraction((-1) ** m * factorial(m), (j + 1) ** (m + 1))


def log_resolvent(m: int, upper: Fraction = Fraction(1)) -> SingExpansion:
    """``∫_0^upper (log σ)^m / (t+σ) dσ`` as an expansion around t = 0.

    Satisfies ``t f_m' = m f_{m-1}`` with a boundary correction that vanishes
    only at upper = 1; the correction's unknown constant is what resonates
    into the undetermined log terms for other upper limits.
    """
    if m < 0:
        raise ValueError("log power must be nonnegative")
    upper = Fraction(upper)
    if upper <= 0:
        raise ValueError("upper limit must be positive")
    cur = SingExpansion((term(-1, 0, 1),), holo_order=1 if upper == 1 else 0)
    for k in range(1, m + 1):
        cur = euler_solve(0, cur.scale(k))
    return cur


def _core(K: int, m: int) -> SingExpansion:
    """``∫_0^1 (log σ)^m σ^K / (t+σ) dσ`` via polynomial division."""
    parts = [
        LogPowTerm(exact((-1) ** i * _weight_moment(K - 1 - i, m)), Fraction(i), 0)
        for i in range(K)
    ]
    out = SingExpansion(tuple(parts)).normalize()
    return out + log_resolvent(m).mul_monomial((-1) ** K, K)


def _poly_log_free(p: int, K: int, m: int) -> SingExpansion:
    """``∫_0^1 (log σ)^m σ^K (t+σ)^p dσ`` for integer p >= 0."""
    return SingExpansion.of(
        *(
            LogPowTerm(exact(comb(p, i) * _weight_moment(K + i, m)), Fraction(p - i), 0)
            for i in range(p + 1)
        )
    )


def _T_mixed(q: int, K: int, m: int) -> SingExpansion:
    """``∫_0^1 (log σ)^m σ^K (t+σ)^q log(t+σ) dσ`` for integer q >= 0,
    built by integrating its t-derivative."""
    if q == 0:
        return _core(K, m).antiderivative() + SingExpansion.holo(0)
    lower = _T_mixed(q - 1, K, m).scale(q) + _poly_log_free(q - 1, K, m)
    return lower.antiderivative() + SingExpansion.holo(0)


def _T_negative(j: int, m: int) -> SingExpansion:
    """``∫_0^1 (log σ)^m (t+σ)^{-j} dσ`` for j >= 1, via t-derivatives."""
    cur = _core(0, m)
    for jj in range(1, j):
        cur = cur.derivative().scale(Fraction(-1, jj))
    return cur


def _log_T(p: Fraction, v: int, m: int) -> SingExpansion:
    if p.denominator != 1:
        raise ReductionError("fractional power at the log-weighted level")
    p = int(p)
    if v == 0:
        return _poly_log_free(p, 0, m) if p >= 0 else _T_negative(-p, m)
    if v == 1 and p >= 0:
        return _T_mixed(p, 0, m)
    raise ReductionError(f"unsupported state (t+σ)^{p} log^{v} at the log-weighted level")


def log_pair(q, v: int, m: int) -> SingExpansion:
    """``∫_0^1 (log σ)^m [(t+σ)^q log(t+σ)^v - t^q log(t)^v] dσ/σ``."""
    q = Fraction(q)
    if v == 0 and q == 0:
        return SingExpansion.zero()
    rhs = SingExpansion.zero()
    if q != 0:
        rhs = rhs + _log_T(q - 1, v, m).scale(-q)
    if v >= 1 and not (q - 1 == 0 and v - 1 == 0):
        rhs = rhs + log_pair(q - 1, v - 1, m).mul_monomial(v, 1)
    return euler_solve(q, rhs)


def _log_level(m_log: int, c: int, terms: list[BivTerm]) -> SingExpansion:
    out = SingExpansion.zero()
    divergent = []
    for t in terms:
        K = t.s_pow + c
        if K == -1:
            divergent.append(t)
            continue
        if K < -1:
            raise ReductionError(f"σ^{K} at the log-weighted level")
        if not t.has_ts():
            out = out + SingExpansion.of(
                LogPowTerm(coeff_scale(t.coeff, _weight_moment(K, m_log)), t.t_pow, t.t_log)
            )
            continue
        if not isinstance(t.coeff, Exact):
            raise ReductionError("non-exact coefficient at the log-weighted level")
        if t.ts_pow.denominator != 1 or t.ts_pow < 0 or t.ts_log > 1:
            raise ReductionError(
                f"unsupported state (t+σ)^{t.ts_pow} log^{t.ts_log} at the log-weighted level"
            )
        q = int(t.ts_pow)
        if t.ts_log == 0:
            piece = _poly_log_free(q, K, m_log)
        else:
            piece = _T_mixed(q, K, m_log)
        out = out + piece.mul_monomial(t.coeff.value, t.t_pow)
    if divergent:
        residue = SingExpansion(tuple(_collapse(t) for t in divergent)).normalize()
        if residue.terms:
            raise ReductionError(f"divergent log-weighted level does not cancel: {residue}")
        for t in divergent:
            if not t.has_ts():
                continue
            if not isinstance(t.coeff, Exact):
                raise ReductionError("divergent class with non-exact coefficient")
            out = out + log_pair(t.ts_pow, t.ts_log, m_log).mul_monomial(
                t.coeff.value, t.t_pow
            )
    return out
