"""Exact rationals and certified comparisons against natural-log expressions.

All inequality checks in the package compare a rational against an
expression of the form ``q0 + q1*ln(x)`` with rational ``q0, q1, x``.
These are resolved with interval arithmetic at increasing precision and
outward rounding, so a verdict is only ever reported once the interval
no longer straddles the compared value.  For ``x != 1`` rational, ``ln x``
is transcendental, so ties can only occur when the log coefficient is
zero; that case is decided exactly on rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import mpmath.libmp as _libmp

from .errors import FormatError

_MAX_PREC = 1 << 14


def _endpoints(box) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an mpmath interval (no re-rounding)."""
    raw_a, raw_b = box._mpi_
    pa, qa = _libmp.to_rational(raw_a)
    pb, qb = _libmp.to_rational(raw_b)
    return Fraction(int(pa), int(qa)), Fraction(int(pb), int(qb))


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or a decimal string into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"not a rational: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    """Render a Fraction as "p/q", or "p" when integral."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def ceil_fraction(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class LogAffine:
    """The expression ``const + coeff * ln(arg)`` over exact rationals."""

    const: Fraction
    coeff: Fraction
    arg: Fraction

    def __post_init__(self):
        if self.arg <= 0:
            raise ValueError("log argument must be positive")

    def __str__(self):
        if self.coeff == 0:
            return format_rational(self.const)
        return (
            f"{format_rational(self.const)} + "
            f"{format_rational(self.coeff)}*ln({format_rational(self.arg)})"
        )


def _interval(expr: LogAffine, prec: int) -> mpmath.ctx_iv.ivmpf:
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = prec
        x = iv.mpf(expr.arg.numerator) / iv.mpf(expr.arg.denominator)
        c0 = iv.mpf(expr.const.numerator) / iv.mpf(expr.const.denominator)
        c1 = iv.mpf(expr.coeff.numerator) / iv.mpf(expr.coeff.denominator)
        return c0 + c1 * iv.log(x)
    finally:
        iv.prec = old


def compare_with_log(lhs: Fraction, rhs: LogAffine) -> int:
    """Return -1, 0, +1 for lhs <, =, > rhs, certified.

    Equality is only reachable when the log coefficient vanishes or the
    argument is 1; otherwise the value is irrational and the interval is
    refined until it excludes lhs.
    """
    lhs = Fraction(lhs)
    if rhs.coeff == 0 or rhs.arg == 1:
        exact = rhs.const
        return (lhs > exact) - (lhs < exact)
    prec = 64
    while prec <= _MAX_PREC:
        lo, hi = _endpoints(_interval(rhs, prec))
        if lhs < lo:
            return -1
        if lhs > hi:
            return 1
        prec *= 2
    raise RuntimeError(f"could not separate {lhs} from {rhs}")


def log_affine_leq(lhs: Fraction, rhs: LogAffine) -> bool:
    return compare_with_log(lhs, rhs) <= 0


def ceil_log_product(coeff: Fraction, arg: Fraction) -> int:
    """Certified ``ceil(coeff * ln(arg))``.

    Refuses to round while the enclosing interval straddles an integer;
    for rational arg != 1 the product is transcendental, so refinement
    always terminates.
    """
    coeff = Fraction(coeff)
    arg = Fraction(arg)
    if coeff == 0 or arg == 1:
        return 0
    expr = LogAffine(Fraction(0), coeff, arg)
    prec = 64
    while prec <= _MAX_PREC:
        lo, hi = _endpoints(_interval(expr, prec))
        clo, chi = ceil_fraction(lo), ceil_fraction(hi)
        if clo == chi:
            return clo
        prec *= 2
    raise RuntimeError(f"could not certify ceil({coeff}*ln({arg}))")
