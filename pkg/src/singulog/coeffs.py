"""Coefficient arithmetic for singular expansions.

Three kinds of coefficient flow through the expansion machinery:

* ``Exact`` -- a rational number, kept as :class:`fractions.Fraction`.
* ``Undetermined`` -- a symbolic constant whose value the reduction never
  pins down (integration constants, homogeneous solutions).  It carries a
  lineage trail saying which operation introduced it.
* ``Fitted`` -- a float estimated from data, with a standard error.

Sums and rational rescalings keep the strongest representation possible:
exact stays exact, anything touching an undetermined becomes a fresh
undetermined, and fitted values propagate errors in quadrature.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

_counter = itertools.count(1)


@dataclass(frozen=True)
class Exact:
    value: Fraction

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Undetermined:
    """A constant the calculus leaves free.  Distinct instances are distinct
    unknowns even if their names collide after relabelling."""

    name: str
    lineage: tuple[str, ...] = ()

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Fitted:
    value: float
    stderr: float = 0.0

    def __str__(self) -> str:
        return f"{self.value:.6g}±{self.stderr:.2g}"


Coefficient = Union[Exact, Undetermined, Fitted]


def exact(x) -> Exact:
    return Exact(Fraction(x))


ZERO = exact(0)
ONE = exact(1)


def fresh_undetermined(*lineage: str) -> Undetermined:
    return Undetermined(f"u{next(_counter)}", lineage)


def is_zero(c: Coefficient) -> bool:
    return isinstance(c, Exact) and c.value == 0


def coeff_add(a: Coefficient, b: Coefficient) -> Coefficient:
    if is_zero(a):
        return b
    if is_zero(b):
        return a
    if isinstance(a, Undetermined) or isinstance(b, Undetermined):
        parts = []
        for c in (a, b):
            if isinstance(c, Undetermined):
                parts.extend(c.lineage)
                parts.append(c.name)
        return fresh_undetermined("sum", *parts)
    if isinstance(a, Exact) and isinstance(b, Exact):
        return Exact(a.value + b.value)
    av = float(a.value)
    bv = float(b.value)
    ae = a.stderr if isinstance(a, Fitted) else 0.0
    be = b.stderr if isinstance(b, Fitted) else 0.0
    return Fitted(av + bv, (ae * ae + be * be) ** 0.5)


def coeff_scale(a: Coefficient, r: Fraction | int) -> Coefficient:
    r = Fraction(r)
    if r == 0:
        return ZERO
    if isinstance(a, Exact):
        return Exact(a.value * r)
    if isinstance(a, Undetermined):
        # A nonzero rational multiple of an unknown is still just an unknown.
        return fresh_undetermined("scale", a.name, *a.lineage)
    return Fitted(a.value * float(r), a.stderr * abs(float(r)))


def coeff_neg(a: Coefficient) -> Coefficient:
    return coeff_scale(a, -1)
