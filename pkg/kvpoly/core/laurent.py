"""
kvpoly Laurent Polynomials

Exact single-variable Laurent polynomials in A whose coefficients are rationals
with power-of-two denominators. Every invariant computed by kvpoly lives here.
"""

import logging
import re
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy as sp  # type: ignore
from sympy.parsing.sympy_parser import auto_number, parse_expr  # type: ignore

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

# Exponents stay inside a signed 32-bit word.
MAX_EXPONENT = 2**31 - 1

SYMBOL = sp.Symbol("A")

_POLYNOMIAL_TEXT = re.compile(r"[0-9A\s+\-*/^()]+")


class PolynomialError(ValueError):
    """Raised for non-dyadic coefficients, exponent overflow or unparseable text."""


def _dyadic(value: Scalar) -> Fraction:
    """
    Convert a scalar to a Fraction, rejecting non-dyadic denominators.

    Args:
        value: Integer or Fraction

    Returns:
        The value as a Fraction

    Raises:
        PolynomialError: If the denominator is not a power of two
    """
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise PolynomialError(f"Unsupported coefficient type: {type(value).__name__}")
    coefficient = Fraction(value)
    denominator = coefficient.denominator
    if denominator & (denominator - 1):
        raise PolynomialError(
            f"Coefficient {coefficient} does not have a power-of-two denominator"
        )
    return coefficient


def _checked_exponent(exponent: int) -> int:
    if isinstance(exponent, bool) or not isinstance(exponent, int):
        raise PolynomialError(f"Exponent must be an integer, got {exponent!r}")
    if abs(exponent) > MAX_EXPONENT:
        raise PolynomialError(f"Exponent {exponent} overflows the supported range")
    return exponent


def _log2_denominator(coefficient: Fraction) -> int:
    return coefficient.denominator.bit_length() - 1


def _format_coefficient(coefficient: Fraction) -> str:
    if coefficient.denominator == 1:
        return str(coefficient.numerator)
    return f"{coefficient.numerator}/2^{_log2_denominator(coefficient)}"


class LaurentPolynomial:
    """
    Immutable Laurent polynomial in A with dyadic rational coefficients.

    Terms are kept in canonical form: no stored coefficient is zero, so two
    polynomials are equal exactly when their term maps are equal.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, Scalar]] = None) -> None:
        canonical: Dict[int, Fraction] = {}
        for exponent, value in (terms or {}).items():
            coefficient = _dyadic(value)
            if coefficient:
                canonical[_checked_exponent(exponent)] = coefficient
        object.__setattr__(self, "_terms", canonical)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolynomial is immutable")

    @classmethod
    def _trusted(cls, terms: Dict[int, Fraction]) -> "LaurentPolynomial":
        """Build from terms already known to be canonical and dyadic."""
        poly = cls.__new__(cls)
        object.__setattr__(poly, "_terms", {e: c for e, c in terms.items() if c})
        return poly

    @property
    def terms(self) -> Dict[int, Fraction]:
        """Copy of the exponent -> coefficient map."""
        return dict(self._terms)

    def coefficient(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        """Terms in ascending exponent order."""
        return iter(sorted(self._terms.items()))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    @property
    def min_degree(self) -> Optional[int]:
        return min(self._terms) if self._terms else None

    @property
    def max_degree(self) -> Optional[int]:
        return max(self._terms) if self._terms else None

    def evaluate(self, point: Scalar) -> Fraction:
        """
        Evaluate at a nonzero rational point.

        Args:
            point: Value substituted for A

        Returns:
            Exact value of the polynomial
        """
        x = Fraction(point)
        if x == 0 and any(e < 0 for e in self._terms):
            raise PolynomialError("Cannot evaluate negative powers at A = 0")
        return sum((c * x**e for e, c in self._terms.items()), Fraction(0))

    def to_sympy(self) -> sp.Expr:
        """Convert to a sympy expression in the symbol A."""
        return sp.Add(
            *[
                sp.Rational(c.numerator, c.denominator) * SYMBOL**e
                for e, c in self._terms.items()
            ]
        )

    def to_json(self) -> List[List[int]]:
        """Serialize as ``[exponent, numerator, log2_denominator]`` triples."""
        return lp_to_json(self)

    # Arithmetic

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return lp_add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return lp_scale(self, -1)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return lp_add(self, -other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return lp_add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return lp_scale(self, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return lp_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPolynomial":
        return lp_pow(self, n)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: List[str] = []
        for exponent in sorted(self._terms, reverse=True):
            coefficient = self._terms[exponent]
            magnitude = abs(coefficient)
            if exponent == 0:
                body = _format_coefficient(magnitude)
            else:
                var = "A" if exponent == 1 else f"A^{exponent}"
                body = var if magnitude == 1 else f"{_format_coefficient(magnitude)}*{var}"
            if not parts:
                parts.append(f"-{body}" if coefficient < 0 else body)
            else:
                parts.append(f"- {body}" if coefficient < 0 else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPolynomial('{self}')"


def _coerce(value) -> Optional[LaurentPolynomial]:
    if isinstance(value, LaurentPolynomial):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return lp_monomial(value, 0)
    return None


def lp_monomial(coefficient: Scalar, exponent: int) -> LaurentPolynomial:
    """
    Build a single-term polynomial ``coefficient * A^exponent``.

    Args:
        coefficient: Dyadic rational coefficient (zero gives the zero polynomial)
        exponent: Integer exponent

    Returns:
        Canonical polynomial

    Raises:
        PolynomialError: If the coefficient is not dyadic
    """
    return LaurentPolynomial({exponent: coefficient})


def lp_add(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    """Exact sum in canonical form."""
    terms = dict(p._terms)
    for exponent, coefficient in q._terms.items():
        terms[exponent] = terms.get(exponent, Fraction(0)) + coefficient
    return LaurentPolynomial._trusted(terms)


def lp_mul(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    """Exact product in canonical form."""
    terms: Dict[int, Fraction] = {}
    for e1, c1 in p._terms.items():
        for e2, c2 in q._terms.items():
            exponent = _checked_exponent(e1 + e2)
            terms[exponent] = terms.get(exponent, Fraction(0)) + c1 * c2
    return LaurentPolynomial._trusted(terms)


def lp_pow(p: LaurentPolynomial, n: int) -> LaurentPolynomial:
    """
    Exact n-th power by repeated squaring; ``p ** 0`` is 1.

    Raises:
        PolynomialError: If n is negative
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise PolynomialError(f"Power must be a nonnegative integer, got {n!r}")
    result = ONE
    base = p
    while n:
        if n & 1:
            result = lp_mul(result, base)
        n >>= 1
        if n:
            base = lp_mul(base, base)
    return result


def lp_scale(p: LaurentPolynomial, c: Scalar) -> LaurentPolynomial:
    """
    Multiply every coefficient by a dyadic scalar.

    Raises:
        PolynomialError: If the scalar is not dyadic
    """
    factor = _dyadic(c)
    return LaurentPolynomial._trusted({e: v * factor for e, v in p._terms.items()})


def lp_to_json(p: LaurentPolynomial) -> List[List[int]]:
    """Serialize as ``[exponent, numerator, log2_denominator]`` triples, ascending."""
    return [[e, c.numerator, _log2_denominator(c)] for e, c in p.items()]


def lp_from_json(triples: Sequence[Sequence[int]]) -> LaurentPolynomial:
    """
    Rebuild a polynomial from ``[exponent, numerator, log2_denominator]`` triples.

    Raises:
        PolynomialError: If a triple is malformed
    """
    terms: Dict[int, Fraction] = {}
    for triple in triples:
        if len(triple) != 3 or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in triple
        ):
            raise PolynomialError(f"Malformed polynomial triple: {triple!r}")
        exponent, numerator, log2_den = triple
        if log2_den < 0:
            raise PolynomialError(f"Negative log2 denominator in {triple!r}")
        if exponent in terms:
            raise PolynomialError(f"Duplicate exponent {exponent} in polynomial triples")
        terms[exponent] = Fraction(numerator, 2**log2_den)
    return LaurentPolynomial(terms)


def lp_from_sympy(expr: sp.Expr) -> LaurentPolynomial:
    """
    Convert a sympy expression in A to a LaurentPolynomial.

    Raises:
        PolynomialError: If the expression is not a dyadic Laurent polynomial in A
    """
    terms: Dict[int, Fraction] = {}
    for term in sp.Add.make_args(sp.expand(expr)):
        coefficient, rest = term.as_coeff_Mul()
        if rest == 1:
            exponent = 0
        else:
            base, power = rest.as_base_exp()
            if base != SYMBOL or not power.is_Integer:
                raise PolynomialError(f"Not a Laurent monomial in A: {term}")
            exponent = int(power)
        if not coefficient.is_Rational:
            raise PolynomialError(f"Coefficient is not rational: {coefficient}")
        value = Fraction(int(coefficient.p), int(coefficient.q))
        terms[exponent] = terms.get(exponent, Fraction(0)) + value
    return LaurentPolynomial(terms)


def lp_parse(text: str) -> LaurentPolynomial:
    """
    Parse the text form, e.g. ``A^2 + 2 + A^-2`` or ``1/2^1*A^2 - A``.

    Only integers, the symbol ``A``, ``+ - * / ^`` and parentheses are accepted;
    the expression is built by sympy's parser with no names other than ``A``
    and ``Integer`` in scope.

    Args:
        text: Polynomial text; ``^`` and ``**`` are both accepted for powers

    Returns:
        Parsed polynomial

    Raises:
        PolynomialError: If the text cannot be parsed
    """
    source = text.strip()
    if not source:
        raise PolynomialError("Empty polynomial text")
    if not _POLYNOMIAL_TEXT.fullmatch(source):
        raise PolynomialError(f"Unexpected characters in polynomial '{text}'")
    try:
        expr = parse_expr(
            source.replace("^", "**"),
            local_dict={"A": SYMBOL},
            global_dict={"Integer": sp.Integer},
            transformations=(auto_number,),
        )
    except Exception as e:
        raise PolynomialError(f"Cannot parse polynomial '{text}': {e}") from e
    if not isinstance(expr, sp.Expr) or expr.free_symbols - {SYMBOL}:
        raise PolynomialError(f"Unexpected symbols in '{text}'")
    return lp_from_sympy(expr)


ZERO = LaurentPolynomial()
ONE = lp_monomial(1, 0)
A = lp_monomial(1, 1)
A_INV = lp_monomial(1, -1)

# The factor contributed by each rigid vertex: -A - A^-1.
VERTEX_FACTOR = lp_add(lp_monomial(-1, 1), lp_monomial(-1, -1))
