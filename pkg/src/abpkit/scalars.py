"""Exact scalar arithmetic: rationals and Laurent polynomials in a formal eps.

Every quantity in this package is exact.  Base coefficients are arbitrary
precision rationals (gmpy2.mpq when available, fractions.Fraction otherwise).
On top of those sits :class:`EpsScalar`, a Laurent polynomial in a single
formal infinitesimal ``eps`` with integer (possibly negative) exponents,
stored sparsely as a dict from exponent to coefficient.

No floats appear anywhere; equality of values is literal equality of
canonical representations.
"""

from __future__ import annotations

from typing import Dict, Iterable, Tuple, Union

try:  # pragma: no cover - exercised implicitly by the import that succeeds
    from gmpy2 import mpq as _mpq

    def Rat(a: Union[int, str, "_mpq"] = 0, b: int | None = None):
        """Construct an exact rational.  Accepts ints, 'p/q' strings, Rats."""
        return _mpq(a) if b is None else _mpq(a, b)

    _RAT_TYPES = (type(_mpq(0)), int)
except ImportError:  # pragma: no cover
    from fractions import Fraction as _Fraction

    def Rat(a=0, b=None):
        return _Fraction(a) if b is None else _Fraction(a, b)

    _RAT_TYPES = (_Fraction, int)

RatLike = Union[int, str]

ZERO = Rat(0)
ONE = Rat(1)


def rat_to_str(c) -> str:
    """Canonical text for a rational: '5', '-3', '3/2', '-3/2'."""
    return str(c)


class NegativeEpsPower(ArithmeticError):
    """A limit eps -> 0 was requested of a quantity with a pole at eps = 0."""


class ZeroPolynomial(ValueError):
    """An operation that needs a nonzero polynomial received zero."""


class EpsScalar:
    """A Laurent polynomial in the formal infinitesimal ``eps``.

    Immutable.  ``terms`` maps integer exponent -> nonzero Rat coefficient.
    The zero scalar has an empty dict.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Dict[int, "Rat"] | None = None, *, _trusted: bool = False):
        if terms is None:
            terms = {}
        if not _trusted:
            terms = {int(e): Rat(c) for e, c in terms.items() if c != 0}
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("EpsScalar is immutable")

    # --- constructors -------------------------------------------------

    @staticmethod
    def from_rat(c) -> "EpsScalar":
        c = Rat(c)
        return EpsScalar({0: c} if c != 0 else {}, _trusted=True)

    @staticmethod
    def eps(k: int = 1, coef=1) -> "EpsScalar":
        """The scalar coef * eps**k."""
        c = Rat(coef)
        return EpsScalar({k: c} if c != 0 else {}, _trusted=True)

    # --- predicates and views ------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_rat(self) -> bool:
        """True when no eps appears (zero or a plain rational)."""
        return not self.terms or set(self.terms) == {0}

    def as_rat(self):
        """The value as a plain rational; requires is_rat()."""
        if not self.terms:
            return ZERO
        if set(self.terms) != {0}:
            raise ValueError(f"not eps-free: {self.render()}")
        return self.terms[0]

    def min_exp(self) -> int | None:
        """Smallest eps exponent with nonzero coefficient (None for zero)."""
        return min(self.terms) if self.terms else None

    def max_exp(self) -> int | None:
        return max(self.terms) if self.terms else None

    # --- arithmetic -----------------------------------------------------

    def __add__(self, other: "EpsScalar") -> "EpsScalar":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v == 0:
                    del out[e]
                else:
                    out[e] = v
        return EpsScalar(out, _trusted=True)

    def __neg__(self) -> "EpsScalar":
        return EpsScalar({e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other: "EpsScalar") -> "EpsScalar":
        return self + (-other)

    def __mul__(self, other: "EpsScalar") -> "EpsScalar":
        if not self.terms or not other.terms:
            return _EPS_ZERO
        out: Dict[int, "Rat"] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                v = out.get(e)
                if v is None:
                    out[e] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v == 0:
                        del out[e]
                    else:
                        out[e] = v
        return EpsScalar(out, _trusted=True)

    def scale(self, c) -> "EpsScalar":
        """Multiply by a plain rational."""
        c = Rat(c)
        if c == 0 or not self.terms:
            return _EPS_ZERO
        return EpsScalar({e: c * v for e, v in self.terms.items()}, _trusted=True)

    def shift(self, k: int) -> "EpsScalar":
        """Multiply by eps**k (shift all exponents)."""
        if k == 0 or not self.terms:
            return self
        return EpsScalar({e + k: c for e, c in self.terms.items()}, _trusted=True)

    def scale_exponents(self, t: int) -> "EpsScalar":
        """Substitute eps -> eps**t.  A ring homomorphism for t >= 1."""
        if t == 1 or not self.terms:
            return self
        return EpsScalar({e * t: c for e, c in self.terms.items()}, _trusted=True)

    # --- limits and evaluation ------------------------------------------

    def limit(self):
        """The value at eps -> 0: the eps^0 coefficient.

        Raises NegativeEpsPower if any negative exponent is present.
        """
        m = self.min_exp()
        if m is not None and m < 0:
            raise NegativeEpsPower(f"pole of order {-m} at eps=0 in {self.render()}")
        return self.terms.get(0, ZERO)

    def eval_at(self, a):
        """Evaluate at a nonzero rational eps = a."""
        a = Rat(a)
        if a == 0:
            return self.limit()
        total = ZERO
        for e, c in self.terms.items():
            total = total + c * a**e
        return total

    # --- comparison / hashing -------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, EpsScalar) and self.terms == other.terms

    def __hash__(self) -> int:
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash(tuple(sorted(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # --- rendering --------------------------------------------------------

    def render(self) -> str:
        """Canonical text, terms in ascending eps exponent: '3/2*eps^-1 + 2'."""
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            parts.append((self.terms[e], _eps_atom(e)))
        return join_signed(parts)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"EpsScalar({self.render()!r})"


_EPS_ZERO = EpsScalar({}, _trusted=True)
EPS_ONE = EpsScalar.from_rat(1)


def _eps_atom(e: int) -> str:
    """The variable part of an eps term: '' for e=0, 'eps', 'eps^-2', ..."""
    if e == 0:
        return ""
    if e == 1:
        return "eps"
    return f"eps^{e}"


def join_signed(parts: Iterable[Tuple["Rat", str]]) -> str:
    """Join (coefficient, atom-string) pairs into canonical signed text.

    Coefficients of +/-1 are elided in front of a nonempty atom; terms are
    joined with ' + ' / ' - '.
    """
    out: list[str] = []
    for c, atom in parts:
        neg = c < 0
        mag = -c if neg else c
        if atom and mag == 1:
            body = atom
        elif atom:
            body = f"{rat_to_str(mag)}*{atom}"
        else:
            body = rat_to_str(mag)
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
