"""Sparse exact multivariate polynomials over the eps-Laurent scalars.

An :class:`MPoly` is a polynomial in variables x1, x2, ... whose coefficients
are Laurent polynomials in the formal infinitesimal ``eps`` (see
:mod:`abpkit.scalars`).  Internally it is one flat dict::

    {(monomial, eps_exponent): Rat}

where a monomial is a sorted tuple of (variable-id, positive exponent) pairs.
The flat layout keeps multiplication a single dict merge, which is the hot
path when expanding long matrix products during certificate checks.

Canonical rendering sorts monomials in descending graded-lexicographic order
(variable x1 ranks above x2, etc.), with eps exponents ascending inside each
monomial, e.g. ``3/2*eps^-1*x1*x2^2``.  :func:`parse_mpoly` reads that format
back; rendering then parsing is the identity.
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, Mapping, Tuple

from .scalars import (
    EpsScalar,
    NegativeEpsPower,
    Rat,
    ZeroPolynomial,
    _eps_atom,
    join_signed,
)

Monomial = Tuple[Tuple[int, int], ...]
TermKey = Tuple[Monomial, int]

_MONO_ONE: Monomial = ()
_MUL_CACHE: Dict[Tuple[Monomial, Monomial], Monomial] = {}


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    """Merge two sorted monomials, adding exponents of shared variables."""
    if not a:
        return b
    if not b:
        return a
    key = (a, b)
    hit = _MUL_CACHE.get(key)
    if hit is not None:
        return hit
    merged: Dict[int, int] = dict(a)
    for v, e in b:
        merged[v] = merged.get(v, 0) + e
    out = tuple(sorted(merged.items()))
    _MUL_CACHE[key] = out
    return out


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_sort_key(m: Monomial):
    # Descending graded lex: higher total degree first, then higher power of
    # the smallest-id variable.  Tuples compare lexicographically, so negate.
    return (-mono_degree(m), tuple((v, -e) for v, e in m))


class MPoly:
    """Immutable sparse polynomial in x-variables with eps-Laurent coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[TermKey, "Rat"] | None = None, *, _trusted: bool = False):
        if terms is None:
            terms = {}
        if not _trusted:
            clean: Dict[TermKey, "Rat"] = {}
            for (mono, e), c in terms.items():
                c = Rat(c)
                if c != 0:
                    clean[(tuple(sorted(mono)), int(e))] = c
            terms = clean
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    # --- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "MPoly":
        return _ZERO

    @staticmethod
    def const(c) -> "MPoly":
        c = Rat(c)
        if c == 0:
            return _ZERO
        return MPoly({(_MONO_ONE, 0): c}, _trusted=True)

    @staticmethod
    def var(v: int) -> "MPoly":
        if v < 0:
            raise ValueError(f"variable ids must be nonnegative, got {v}")
        return MPoly({(((v, 1),), 0): Rat(1)}, _trusted=True)

    @staticmethod
    def eps(k: int = 1, coef=1) -> "MPoly":
        c = Rat(coef)
        if c == 0:
            return _ZERO
        return MPoly({(_MONO_ONE, int(k)): c}, _trusted=True)

    @staticmethod
    def from_eps_scalar(s: EpsScalar) -> "MPoly":
        return MPoly({(_MONO_ONE, e): c for e, c in s.terms.items()}, _trusted=True)

    # --- predicates / views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_eps_free(self) -> bool:
        return all(e == 0 for (_, e) in self.terms)

    def is_constant(self) -> bool:
        """True when no x-variable appears (an EpsScalar in disguise)."""
        return all(m == _MONO_ONE for (m, _) in self.terms)

    def as_rat(self):
        """The value as a plain rational; requires a constant eps-free poly."""
        if not self.terms:
            return Rat(0)
        if set(self.terms) != {(_MONO_ONE, 0)}:
            raise ValueError(f"not a plain rational: {self.render()}")
        return self.terms[(_MONO_ONE, 0)]

    def as_eps_scalar(self) -> EpsScalar:
        if not self.is_constant():
            raise ValueError(f"not constant: {self.render()}")
        return EpsScalar({e: c for (_, e), c in self.terms.items()}, _trusted=True)

    def variables(self) -> set:
        out: set = set()
        for m, _ in self.terms:
            for v, _e in m:
                out.add(v)
        return out

    def total_degree(self) -> int:
        """Maximum x-degree of any term (0 for constants and zero)."""
        return max((mono_degree(m) for m, _ in self.terms), default=0)

    def coefficient(self, mono: Monomial) -> EpsScalar:
        """The eps-Laurent coefficient of a given x-monomial."""
        mono = tuple(sorted(mono))
        return EpsScalar(
            {e: c for (m, e), c in self.terms.items() if m == mono}, _trusted=True
        )

    def eps_slice(self, k: int) -> "MPoly":
        """The eps-free polynomial multiplying eps**k."""
        return MPoly(
            {(m, 0): c for (m, e), c in self.terms.items() if e == k}, _trusted=True
        )

    def min_eps_exp(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no minimal eps exponent")
        return min(e for (_, e) in self.terms)

    def max_eps_exp(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no maximal eps exponent")
        return max(e for (_, e) in self.terms)

    # --- ring operations ---------------------------------------------------

    def __add__(self, other: "MPoly") -> "MPoly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v == 0:
                    del out[k]
                else:
                    out[k] = v
        return MPoly(out, _trusted=True)

    def __neg__(self) -> "MPoly":
        return MPoly({k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other: "MPoly") -> "MPoly":
        a, b = self.terms, other.terms
        if not a or not b:
            return _ZERO
        if len(a) < len(b):
            a, b = b, a
        out: Dict[TermKey, "Rat"] = {}
        get = out.get
        for (ma, ea), ca in a.items():
            for (mb, eb), cb in b.items():
                k = (mono_mul(ma, mb), ea + eb)
                v = get(k)
                if v is None:
                    out[k] = ca * cb
                else:
                    v = v + ca * cb
                    if v == 0:
                        del out[k]
                    else:
                        out[k] = v
        return MPoly(out, _trusted=True)

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative powers of polynomials are not defined")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed and n:
                base = base * base
        return result

    def scale(self, c) -> "MPoly":
        c = Rat(c)
        if c == 0 or not self.terms:
            return _ZERO
        return MPoly({k: c * v for k, v in self.terms.items()}, _trusted=True)

    def shift_eps(self, k: int) -> "MPoly":
        """Multiply by eps**k."""
        if k == 0:
            return self
        return MPoly({(m, e + k): c for (m, e), c in self.terms.items()}, _trusted=True)

    # --- eps manipulation ---------------------------------------------------

    def scale_eps_exponents(self, t: int) -> "MPoly":
        """Substitute eps -> eps**t (a ring homomorphism for t >= 1)."""
        if t == 1:
            return self
        return MPoly({(m, e * t): c for (m, e), c in self.terms.items()}, _trusted=True)

    def eps_limit(self) -> "MPoly":
        """The limit eps -> 0; raises NegativeEpsPower on any pole."""
        out: Dict[TermKey, "Rat"] = {}
        for (m, e), c in self.terms.items():
            if e < 0:
                raise NegativeEpsPower(
                    f"pole of order {-e} at eps=0 in term of {render_mono(m)}"
                )
            if e == 0:
                out[(m, 0)] = c
        return MPoly(out, _trusted=True)

    def eval_eps(self, a) -> "MPoly":
        """Substitute a nonzero rational for eps."""
        a = Rat(a)
        if a == 0:
            return self.eps_limit()
        out: Dict[TermKey, "Rat"] = {}
        for (m, e), c in self.terms.items():
            k = (m, 0)
            v = out.get(k, None)
            contrib = c * a**e
            if v is None:
                out[k] = contrib
            else:
                v = v + contrib
                if v == 0:
                    del out[k]
                else:
                    out[k] = v
        return MPoly(out, _trusted=True)

    # --- substitution / evaluation -----------------------------------------

    def substitute(self, mapping: Mapping[int, "MPoly"]) -> "MPoly":
        """Replace variables by polynomials (missing ids stay themselves)."""
        total = _ZERO
        for (m, e), c in self.terms.items():
            term = MPoly({(_MONO_ONE, e): c}, _trusted=True)
            for v, k in m:
                repl = mapping.get(v)
                if repl is None:
                    term = term * MPoly({(((v, k),), 0): Rat(1)}, _trusted=True)
                else:
                    term = term * repl**k
            total = total + term
        return total

    def eval_point(self, assign: Mapping[int, "Rat"], eps_value=None):
        """Exact evaluation at rational points; eps_value may be None if eps-free."""
        total = Rat(0)
        for (m, e), c in self.terms.items():
            val = c
            for v, k in m:
                if v not in assign:
                    raise KeyError(f"no value for x{v}")
                val = val * Rat(assign[v]) ** k
            if e != 0:
                if eps_value is None:
                    raise ValueError("eps appears but no eps value was given")
                val = val * Rat(eps_value) ** e
            total = total + val
        return total

    # --- comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, MPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # --- rendering --------------------------------------------------------------

    def render(self, names: Mapping[int, str] | None = None) -> str:
        """Canonical text form; see the module docstring for the term order."""
        if not self.terms:
            return "0"
        keyed = sorted(
            self.terms.items(), key=lambda kv: (_mono_sort_key(kv[0][0]), kv[0][1])
        )
        parts = []
        for (m, e), c in keyed:
            atoms = []
            ea = _eps_atom(e)
            if ea:
                atoms.append(ea)
            atoms.extend(_var_atom(v, k, names) for v, k in m)
            parts.append((c, "*".join(atoms)))
        return join_signed(parts)

    def __repr__(self) -> str:  # pragma: no cover
        return f"MPoly({self.render()!r})"


_ZERO = MPoly({}, _trusted=True)


def _var_atom(v: int, e: int, names: Mapping[int, str] | None) -> str:
    name = names.get(v, f"x{v}") if names else f"x{v}"
    return name if e == 1 else f"{name}^{e}"


def render_mono(m: Monomial, names: Mapping[int, str] | None = None) -> str:
    if not m:
        return "1"
    return "*".join(_var_atom(v, e, names) for v, e in m)


# --- the operation names used by the rest of the package -------------------


def mpoly_arith(a: MPoly, b: MPoly, op: str) -> MPoly:
    """Dispatch '+', '-', '*' on polynomials (convenience wrapper)."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def eps_substitute_power(p: MPoly, t: int) -> MPoly:
    """eps -> eps**t on every term; t must be a positive integer."""
    if t < 1:
        raise ValueError(f"substitution power must be >= 1, got {t}")
    return p.scale_eps_exponents(t)


def eps_limit(p: MPoly) -> MPoly:
    return p.eps_limit()


def error_degree(p: MPoly) -> int:
    """Largest eps exponent appearing in p (p must be nonzero)."""
    return p.max_eps_exp()


# --- parsing ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^()]))"
)


class PolySyntaxError(ValueError):
    """Bad polynomial text; carries the character position of the problem."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise PolySyntaxError(f"unexpected character {stripped[0]!r}", pos)
        if m.lastgroup == "num":
            out.append(("num", m.group("num"), m.start("num")))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name"), m.start("name")))
        else:
            out.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_mpoly(text: str, names: Mapping[str, int] | None = None) -> MPoly:
    """Parse the canonical rendering (sums of '*'-joined factors).

    ``names`` maps identifiers to variable ids; without it, identifiers must
    look like ``x<k>``.  ``eps`` is always the formal infinitesimal.  Grammar
    (no parentheses; canonical output never needs them)::

        poly   := [sign] term (sign term)*
        term   := factor ('*' factor)*
        factor := NUMBER | 'eps' ['^' [-] INT] | VAR ['^' INT]
    """
    toks = _tokenize(text)
    i = 0
    total = MPoly.zero()

    def peek():
        return toks[i]

    kind, val, pos = peek()
    if kind == "end":
        raise PolySyntaxError("empty polynomial text", 0)

    sign = 1
    if kind == "op" and val in "+-":
        sign = -1 if val == "-" else 1
        i += 1

    while True:
        term, i = _parse_term(toks, i, names)
        total = total + (term if sign > 0 else -term)
        kind, val, pos = toks[i]
        if kind == "end":
            return total
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
        else:
            raise PolySyntaxError(f"expected '+' or '-', found {val!r}", pos)


def _parse_term(toks, i, names):
    factors = []
    while True:
        f, i = _parse_factor(toks, i, names)
        factors.append(f)
        kind, val, pos = toks[i]
        if kind == "op" and val == "*":
            i += 1
            continue
        break
    term = MPoly.const(1)
    for f in factors:
        term = term * f
    return term, i


def _parse_factor(toks, i, names):
    kind, val, pos = toks[i]
    if kind == "num":
        return MPoly.const(Rat(val)), i + 1
    if kind != "name":
        raise PolySyntaxError(f"expected a number or variable, found {val!r}", pos)
    i += 1
    exp = 1
    kind2, val2, pos2 = toks[i]
    if kind2 == "op" and val2 == "^":
        i += 1
        negexp = False
        kind3, val3, pos3 = toks[i]
        if kind3 == "op" and val3 == "-":
            negexp = True
            i += 1
            kind3, val3, pos3 = toks[i]
        if kind3 != "num" or "/" in val3:
            raise PolySyntaxError("exponent must be an integer", pos3)
        exp = -int(val3) if negexp else int(val3)
        i += 1
    if val == "eps":
        return MPoly.eps(exp), i
    if exp < 0:
        raise PolySyntaxError("negative powers are only allowed on eps", pos2)
    if names and val in names:
        return MPoly.var(names[val]) ** exp, i
    m = re.fullmatch(r"x(\d+)", val)
    if not m:
        raise PolySyntaxError(f"unknown variable {val!r}", pos)
    return MPoly.var(int(m.group(1))) ** exp, i
