"""Affine linear forms over the eps-Laurent scalars, plus edge-label classes.

A form is ``c0 + sum_i c_i * x_i`` with every ``c`` an :class:`EpsScalar`.
These are the only things allowed as edge labels of branching programs and as
the entries of width-2 primitive matrices.

Label classes, ordered from most to least restrictive:

* ``weakest``  - a single bare variable, or any constant (eps allowed);
* ``weak``     - an affine form in at most one variable;
* ``weak+``    - an affine form in at most two variables;
* ``general``  - any affine form.

Every class is closed upward: a ``weakest`` label is also ``weak``, etc.
"""

from __future__ import annotations

from typing import Dict, Mapping, Tuple

from .mpoly import MPoly, PolySyntaxError, parse_mpoly
from .scalars import EpsScalar, Rat, ZeroPolynomial

LABEL_CLASSES = ("weakest", "weak", "weak+", "general")

_RANK = {name: i for i, name in enumerate(LABEL_CLASSES)}


def label_class_rank(cls: str) -> int:
    if cls not in _RANK:
        raise ValueError(f"unknown label class {cls!r}")
    return _RANK[cls]


class AffineForm:
    """Immutable affine form: an EpsScalar constant plus EpsScalar coefficients."""

    __slots__ = ("constant", "coeffs")

    def __init__(
        self,
        constant: EpsScalar | None = None,
        coeffs: Dict[int, EpsScalar] | None = None,
        *,
        _trusted: bool = False,
    ):
        if constant is None:
            constant = EpsScalar()
        if coeffs is None:
            coeffs = {}
        if not _trusted:
            coeffs = {int(v): c for v, c in coeffs.items() if not c.is_zero()}
        object.__setattr__(self, "constant", constant)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("AffineForm is immutable")

    # --- constructors -----------------------------------------------------

    @staticmethod
    def const(c) -> "AffineForm":
        if not isinstance(c, EpsScalar):
            c = EpsScalar.from_rat(c)
        return AffineForm(c, {}, _trusted=True)

    @staticmethod
    def var(v: int, coef=1) -> "AffineForm":
        c = coef if isinstance(coef, EpsScalar) else EpsScalar.from_rat(coef)
        if c.is_zero():
            return _ZERO_FORM
        return AffineForm(EpsScalar(), {v: c}, _trusted=True)

    @staticmethod
    def eps(k: int = 1, coef=1) -> "AffineForm":
        return AffineForm.const(EpsScalar.eps(k, coef))

    # --- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.constant.is_zero() and not self.coeffs

    def is_constant(self) -> bool:
        return not self.coeffs

    def is_eps_free(self) -> bool:
        return self.constant.is_rat() and all(c.is_rat() for c in self.coeffs.values())

    def variables(self) -> set:
        return set(self.coeffs)

    # --- arithmetic ----------------------------------------------------------

    def __add__(self, other: "AffineForm") -> "AffineForm":
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs.items():
            s = coeffs.get(v)
            s = c if s is None else s + c
            if s.is_zero():
                coeffs.pop(v, None)
            else:
                coeffs[v] = s
        return AffineForm(self.constant + other.constant, coeffs, _trusted=True)

    def __neg__(self) -> "AffineForm":
        return AffineForm(
            -self.constant, {v: -c for v, c in self.coeffs.items()}, _trusted=True
        )

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + (-other)

    def scale(self, s) -> "AffineForm":
        """Multiply the whole form by an EpsScalar (or rational)."""
        if not isinstance(s, EpsScalar):
            s = EpsScalar.from_rat(s)
        if s.is_zero():
            return _ZERO_FORM
        coeffs = {}
        for v, c in self.coeffs.items():
            sc = c * s
            if not sc.is_zero():
                coeffs[v] = sc
        return AffineForm(self.constant * s, coeffs, _trusted=True)

    def shift_eps(self, k: int) -> "AffineForm":
        """Multiply by eps**k."""
        return AffineForm(
            self.constant.shift(k),
            {v: c.shift(k) for v, c in self.coeffs.items()},
            _trusted=True,
        )

    def scale_eps_exponents(self, t: int) -> "AffineForm":
        """Substitute eps -> eps**t in every coefficient."""
        if t == 1:
            return self
        return AffineForm(
            self.constant.scale_exponents(t),
            {v: c.scale_exponents(t) for v, c in self.coeffs.items()},
            _trusted=True,
        )

    # --- eps structure ------------------------------------------------------

    def min_eps_exp(self) -> int:
        """Smallest eps exponent anywhere in the form (form must be nonzero)."""
        exps = []
        if not self.constant.is_zero():
            exps.append(self.constant.min_exp())
        for c in self.coeffs.values():
            exps.append(c.min_exp())
        if not exps:
            raise ZeroPolynomial("zero form has no minimal eps exponent")
        return min(exps)

    def eps_limit(self) -> "AffineForm":
        coeffs = {}
        for v, c in self.coeffs.items():
            lim = c.limit()
            if lim != 0:
                coeffs[v] = EpsScalar.from_rat(lim)
        return AffineForm(EpsScalar.from_rat(self.constant.limit()), coeffs, _trusted=True)

    # --- conversions -----------------------------------------------------------

    def to_mpoly(self) -> MPoly:
        p = MPoly.from_eps_scalar(self.constant)
        for v, c in self.coeffs.items():
            p = p + MPoly.var(v) * MPoly.from_eps_scalar(c)
        return p

    @staticmethod
    def from_mpoly(p: MPoly) -> "AffineForm":
        if p.total_degree() > 1:
            raise ValueError(f"not affine: {p.render()}")
        constant: Dict[int, "Rat"] = {}
        coeffs: Dict[int, Dict[int, "Rat"]] = {}
        for (m, e), c in p.terms.items():
            if not m:
                constant[e] = c
            else:
                (v, _exp) = m[0]
                coeffs.setdefault(v, {})[e] = c
        return AffineForm(
            EpsScalar(constant, _trusted=True),
            {v: EpsScalar(d, _trusted=True) for v, d in coeffs.items()},
            _trusted=True,
        )

    # --- evaluation --------------------------------------------------------------

    def eval_eps(self, a) -> Tuple["Rat", Dict[int, "Rat"]]:
        """Specialize eps to a nonzero rational; returns (constant, coeff map)."""
        const = self.constant.eval_at(a)
        coeffs = {}
        for v, c in self.coeffs.items():
            cv = c.eval_at(a)
            if cv != 0:
                coeffs[v] = cv
        return const, coeffs

    # --- comparison / rendering -----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AffineForm)
            and self.constant == other.constant
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.constant, frozenset(self.coeffs.items())))

    def render(self, names: Mapping[int, str] | None = None) -> str:
        return self.to_mpoly().render(names)

    def __repr__(self) -> str:  # pragma: no cover
        return f"AffineForm({self.render()!r})"


_ZERO_FORM = AffineForm(EpsScalar(), {}, _trusted=True)


def classify_label(a: AffineForm) -> str:
    """The most restrictive label class containing the form (see module doc)."""
    n = len(a.coeffs)
    if n == 0:
        return "weakest"
    if n == 1:
        ((v, c),) = a.coeffs.items()
        if a.constant.is_zero() and c == EpsScalar.from_rat(1):
            return "weakest"
        return "weak"
    if n == 2:
        return "weak+"
    return "general"


def parse_affine(text: str, names: Mapping[str, int] | None = None) -> AffineForm:
    """Parse canonical affine-form text (same grammar as polynomials)."""
    p = parse_mpoly(text, names)
    try:
        return AffineForm.from_mpoly(p)
    except ValueError as exc:
        raise PolySyntaxError(str(exc), 0) from None
