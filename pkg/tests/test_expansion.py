import cmath
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singulog import (
    Exact,
    ExpansionError,
    SingExpansion,
    Undetermined,
    euler_solve,
    term,
)

# ---------------------------------------------------------------- strategies

rationals = st.builds(
    F,
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=1, max_value=4),
)
nonzero_rationals = rationals.filter(lambda q: q != 0)

terms = st.builds(
    term,
    nonzero_rationals,
    rationals,
    st.integers(min_value=0, max_value=3),
)

expansions = st.lists(terms, max_size=5).map(
    lambda ts: SingExpansion(tuple(ts)).normalize()
)


# ---------------------------------------------------------------- normalize


@given(expansions)
def test_normalize_idempotent(e):
    assert e.normalize() == e


def test_normalize_merges_and_drops():
    e = SingExpansion.of(term(F(1, 2), 1, 1), term(F(-1, 2), 1, 1), term(3, 0))
    assert e.terms == (term(3, 0),)


def test_normalize_sort_order():
    e = SingExpansion.of(term(1, 2, 0), term(1, -1, 1), term(1, -1, 2), term(1, 0, 1))
    grid = [(t.exponent, t.logpow) for t in e.terms]
    assert grid == [(-1, 2), (-1, 1), (0, 1), (2, 0)]


def test_tail_absorbs_logfree_integer_terms():
    e = SingExpansion(
        (term(1, 2), term(1, 1, 1), term(1, F(5, 2)), term(1, 0)), holo_order=1
    ).normalize()
    # t^2 swallowed, t^{5/2} (fractional) and t*log kept, t^0 below the tail kept
    grid = [(t.exponent, t.logpow) for t in e.terms]
    assert grid == [(0, 0), (1, 1), (F(5, 2), 0)]
    assert e.holo_order == 1


def test_pure_exact_expansion_keeps_holomorphic_terms():
    e = SingExpansion.of(term(1, 2), term(1, 0))
    assert len(e.terms) == 2


# ---------------------------------------------------------------- linearity


@given(expansions, expansions)
def test_add_commutes(a, b):
    assert (a + b).same_structure(b + a)


@given(expansions, nonzero_rationals)
def test_scale_distributes_over_derivative(e, r):
    assert e.scale(r).derivative().same_structure(e.derivative().scale(r))


def test_mul_monomial_shifts_grid():
    e = SingExpansion.of(term(2, F(1, 2), 1))
    out = e.mul_monomial(F(1, 2), F(3, 2), 1)
    assert out.terms == (term(1, 2, 2),)


def test_mul_monomial_tail_rules():
    e = SingExpansion((term(1, 0, 1),), holo_order=0)
    shifted = e.mul_monomial(1, 2)
    assert shifted.holo_order == 2
    with pytest.raises(ExpansionError):
        e.mul_monomial(1, F(1, 2))
    with pytest.raises(ExpansionError):
        e.mul_monomial(1, 0, 1)


# ---------------------------------------------------------------- calculus

ANTIDERIVATIVE_TABLE = [
    # (integrand, expected antiderivative)
    (term(1, F(-1, 2), 1), [term(2, F(1, 2), 1), term(-4, F(1, 2))]),
    (term(1, 0, 2), [term(1, 1, 2), term(-2, 1, 1), term(2, 1)]),
    (term(1, 2, 1), [term(F(1, 3), 3, 1), term(F(-1, 9), 3)]),
    (term(5, -3), [term(F(-5, 2), -2)]),
]


@pytest.mark.parametrize("src,expected", ANTIDERIVATIVE_TABLE)
def test_antiderivative_table(src, expected):
    out = SingExpansion.of(src).antiderivative()
    assert out == SingExpansion.of(*expected)


@given(expansions.filter(lambda e: all(t.exponent != -1 for t in e.terms)))
def test_antiderivative_inverts_under_derivative(e):
    assert e.antiderivative().derivative().same_structure(e)


def test_antiderivative_refuses_pole():
    with pytest.raises(ExpansionError):
        SingExpansion.of(term(1, -1)).antiderivative()


def test_antiderivative_with_tail_resets_tail_order():
    e = SingExpansion((term(1, 0, 1),), holo_order=3)
    assert e.antiderivative().holo_order == 0


def test_derivative_log_chain():
    # d/dt [t log^2 t] = log^2 t + 2 log t
    e = SingExpansion.of(term(1, 1, 2)).derivative()
    assert e == SingExpansion.of(term(1, 0, 2), term(2, 0, 1))


# ---------------------------------------------------------------- euler


def test_euler_resonant_example():
    f = euler_solve(1, SingExpansion.of(term(1, 1, 1)))
    assert f.terms == (term(F(1, 2), 1, 2),)
    assert f.holo_order == 1


def test_euler_offresonance_with_homogeneous():
    f = euler_solve(F(1, 2), SingExpansion.of(term(1, F(3, 2))))
    assert [(t.exponent, t.logpow) for t in f.terms] == [(F(1, 2), 0), (F(3, 2), 0)]
    assert isinstance(f.terms[0].coeff, Undetermined)
    assert f.terms[1].coeff == Exact(F(1))
    assert f.holo_order is None


def test_euler_shift_zero_absorbs_constant():
    f = euler_solve(0, SingExpansion.of(term(1, 0, 1)))
    assert f.terms == (term(F(1, 2), 0, 2),)
    assert f.holo_order == 0


def test_euler_negative_shift_keeps_homogeneous():
    f = euler_solve(-1, SingExpansion.zero())
    assert len(f.terms) == 1
    assert (f.terms[0].exponent, f.terms[0].logpow) == (-1, 0)
    assert isinstance(f.terms[0].coeff, Undetermined)


def test_euler_tail_resonance_emits_log_term():
    rhs = SingExpansion((term(1, 0, 1),), holo_order=0)
    f = euler_solve(2, rhs)
    hits = [t for t in f.terms if (t.exponent, t.logpow) == (2, 1)]
    assert len(hits) == 1 and isinstance(hits[0].coeff, Undetermined)
    assert f.holo_order == 0


@given(expansions, rationals)
@settings(max_examples=200)
def test_euler_solve_round_trip(rhs, s):
    f = euler_solve(s, rhs)
    back = f.apply_euler(s)
    want = SingExpansion(rhs.terms, back.holo_order).normalize()
    assert back.same_structure(want)


@given(nonzero_rationals, rationals, st.integers(min_value=0, max_value=3))
def test_euler_resonance_raises_log_degree(c, s, m):
    f = euler_solve(s, SingExpansion.of(term(c, s, m)))
    lead = [t for t in f.terms if t.logpow == m + 1]
    assert len(lead) == 1
    assert lead[0].coeff == Exact(c / (m + 1))
    assert lead[0].exponent == s


# ---------------------------------------------------------------- queries


def test_singular_terms_classification():
    e = SingExpansion.of(term(1, 2), term(1, F(1, 2)), term(1, 3, 1), term(1, -1))
    sing = {(t.exponent, t.logpow) for t in e.singular_terms()}
    assert sing == {(F(1, 2), 0), (3, 1), (-1, 0)}


def test_leading_picks_most_singular():
    e = SingExpansion.of(term(7, 1, 1), term(3, 1, 2), term(1, 5))
    lead = e.leading()
    assert (lead.exponent, lead.logpow) == (1, 2)
    with pytest.raises(ExpansionError):
        SingExpansion.of(term(1, 4)).leading()


def test_check_bound():
    e = SingExpansion.of(term(1, 1, 2), term(1, 3))
    e.check_bound(1, 2)
    with pytest.raises(ExpansionError):
        e.check_bound(F(3, 2), 2)
    with pytest.raises(ExpansionError):
        e.check_bound(1, 1)
    # holomorphic terms are exempt
    SingExpansion.of(term(1, 0)).check_bound(5, 0)


def test_evaluate_matches_direct_formula():
    e = SingExpansion.of(term(F(1, 2), 2, 1), term(-3, F(1, 2)))
    z = 0.3 + 0.4j
    want = 0.5 * z**2 * cmath.log(z) - 3 * z**0.5
    assert abs(e.evaluate(z) - want) < 1e-12


def test_evaluate_requires_undetermined_values():
    f = euler_solve(F(-1, 2), SingExpansion.zero())
    with pytest.raises(ExpansionError):
        f.evaluate(0.1j)
    name = f.terms[0].coeff.name
    v = f.evaluate(0.1j, undetermined={name: 2.0})
    assert abs(v - 2.0 * (0.1j) ** -0.5) < 1e-12


def test_render_mentions_branch_and_relabels():
    f = euler_solve(F(-1, 2), SingExpansion.of(term(1, F(-1, 2), 1)))
    s = f.render()
    assert "log(t+i0)" in s
    assert "C1" in s
