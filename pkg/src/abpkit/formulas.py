"""Arithmetic formulas: binary +/* trees over variables and rational constants.

The formula type is the common input of every compiler in the package.  A
formula's ``size`` is its leaf count and ``depth`` the longest root-to-leaf
edge count; both are cached on the node.

Text syntax (``parse_formula``): infix ``+`` and ``*`` with the usual
precedence, parentheses, rational literals ``a`` / ``a/b`` (optionally
negative), and variables ``x1, x2, ...``.  There is no subtraction or unary
minus node; negation is multiplication by ``-1`` and negative literals cover
the constant case.

``brent_reduce`` rebalances a formula to logarithmic depth, preserving the
computed polynomial exactly, by repeatedly splitting at a subtree ``g`` of
weight between 1/3 and 2/3 of the whole and rewriting ``f = A*g + B``.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .mpoly import MPoly, PolySyntaxError
from .scalars import Rat, rat_to_str


class FormulaSyntaxError(PolySyntaxError):
    """Bad formula text; carries the character position of the problem."""


@dataclass(frozen=True)
class Formula:
    kind: str  # 'var' | 'const' | 'add' | 'mul'
    var: Optional[int] = None
    value: object = None  # Rat for 'const'
    left: Optional["Formula"] = None
    right: Optional["Formula"] = None
    size: int = 1
    depth: int = 0

    def children(self) -> Iterator["Formula"]:
        if self.left is not None:
            yield self.left
        if self.right is not None:
            yield self.right

    def __repr__(self) -> str:  # pragma: no cover
        return f"Formula({render_formula(self)!r})"


def Var(v: int) -> Formula:
    return Formula("var", var=int(v))


def Const(c) -> Formula:
    return Formula("const", value=Rat(c))


def Add(left: Formula, right: Formula) -> Formula:
    return Formula(
        "add",
        left=left,
        right=right,
        size=left.size + right.size,
        depth=1 + max(left.depth, right.depth),
    )


def Mul(left: Formula, right: Formula) -> Formula:
    return Formula(
        "mul",
        left=left,
        right=right,
        size=left.size + right.size,
        depth=1 + max(left.depth, right.depth),
    )


def eval_formula(f: Formula) -> MPoly:
    """Expand the formula into the exact (eps-free) polynomial it computes."""
    if f.kind == "var":
        return MPoly.var(f.var)
    if f.kind == "const":
        return MPoly.const(f.value)
    left = eval_formula(f.left)
    right = eval_formula(f.right)
    return left + right if f.kind == "add" else left * right


def formula_variables(f: Formula) -> set:
    if f.kind == "var":
        return {f.var}
    if f.kind == "const":
        return set()
    return formula_variables(f.left) | formula_variables(f.right)


# --- text form -------------------------------------------------------------

_FTOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>x\d+)|(?P<op>[-+*()]))")


def _formula_tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _FTOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise FormulaSyntaxError(f"unexpected character {stripped[0]!r}", pos)
        for group in ("num", "name", "op"):
            if m.group(group) is not None:
                out.append((group, m.group(group), m.start(group)))
                break
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_formula(text: str) -> Formula:
    """Parse infix formula text into a left-associated tree."""
    toks = _formula_tokens(text)
    f, i = _parse_sum(toks, 0)
    kind, val, pos = toks[i]
    if kind != "end":
        raise FormulaSyntaxError(f"trailing input {val!r}", pos)
    return f


def _parse_sum(toks, i):
    f, i = _parse_product(toks, i)
    while True:
        kind, val, _ = toks[i]
        if kind == "op" and val == "+":
            g, i = _parse_product(toks, i + 1)
            f = Add(f, g)
        else:
            return f, i


def _parse_product(toks, i):
    f, i = _parse_primary(toks, i)
    while True:
        kind, val, _ = toks[i]
        if kind == "op" and val == "*":
            g, i = _parse_primary(toks, i + 1)
            f = Mul(f, g)
        else:
            return f, i


def _parse_primary(toks, i):
    kind, val, pos = toks[i]
    if kind == "num":
        return Const(Rat(val)), i + 1
    if kind == "name":
        return Var(int(val[1:])), i + 1
    if kind == "op" and val == "-":
        kind2, val2, pos2 = toks[i + 1]
        if kind2 != "num":
            raise FormulaSyntaxError("'-' may only prefix a rational literal", pos)
        return Const(-Rat(val2)), i + 2
    if kind == "op" and val == "(":
        f, i = _parse_sum(toks, i + 1)
        kind2, val2, pos2 = toks[i]
        if not (kind2 == "op" and val2 == ")"):
            raise FormulaSyntaxError("expected ')'", pos2)
        return f, i + 1
    raise FormulaSyntaxError(f"expected a formula, found {val!r}", pos)


def render_formula(f: Formula) -> str:
    """Infix text with minimal parentheses; parse_formula round-trips it."""
    if f.kind == "var":
        return f"x{f.var}"
    if f.kind == "const":
        s = rat_to_str(f.value)
        return s
    if f.kind == "add":
        return f"{render_formula(f.left)} + {render_formula(f.right)}"
    # mul: parenthesize additive or negative-constant operands
    parts = []
    for child in (f.left, f.right):
        s = render_formula(child)
        if child.kind == "add" or (child.kind == "const" and child.value < 0):
            s = f"({s})"
        parts.append(s)
    return f"{parts[0]}*{parts[1]}"


# --- JSON form ----------------------------------------------------------------

def formula_to_json(f: Formula) -> dict:
    if f.kind == "var":
        return {"kind": "var", "id": f.var}
    if f.kind == "const":
        return {"kind": "const", "value": rat_to_str(f.value)}
    return {
        "kind": f.kind,
        "left": formula_to_json(f.left),
        "right": formula_to_json(f.right),
    }


def formula_from_json(obj: dict) -> Formula:
    kind = obj.get("kind")
    if kind == "var":
        return Var(int(obj["id"]))
    if kind == "const":
        return Const(Rat(str(obj["value"])))
    if kind in ("add", "mul"):
        left = formula_from_json(obj["left"])
        right = formula_from_json(obj["right"])
        return Add(left, right) if kind == "add" else Mul(left, right)
    raise ValueError(f"bad formula node kind {kind!r}")


def formula_dumps(f: Formula) -> str:
    return json.dumps(formula_to_json(f), indent=2, sort_keys=True)


# --- depth reduction -------------------------------------------------------------


def _smart_add(a: Formula, b: Formula) -> Formula:
    if a.kind == "const" and a.value == 0:
        return b
    if b.kind == "const" and b.value == 0:
        return a
    if a.kind == "const" and b.kind == "const":
        return Const(a.value + b.value)
    return Add(a, b)


def _smart_mul(a: Formula, b: Formula) -> Formula:
    if a.kind == "const":
        if a.value == 0:
            return Const(0)
        if a.value == 1:
            return b
        if b.kind == "const":
            return Const(a.value * b.value)
    if b.kind == "const":
        if b.value == 0:
            return Const(0)
        if b.value == 1:
            return a
    return Mul(a, b)


def brent_reduce(f: Formula, threshold: int = 3) -> Formula:
    """Rebalance to depth O(log size) while computing the same polynomial.

    Splits at a subtree g with size(f)/3 < size(g) <= 2*size(f)/3 (found by
    walking heavy children), rewrites f = A*g + B with A and B built from the
    siblings along the walk, and recurses on A, g, B.
    """
    n = f.size
    if n <= threshold:
        return f

    # Walk heavy children until the subtree weight drops to <= 2n/3.
    a = Const(1)
    b = Const(0)
    cur = f
    while 3 * cur.size > 2 * n:
        heavy, sibling, is_mul = _heavy_child(cur)
        if is_mul:
            a = _smart_mul(a, sibling)
        else:
            b = _smart_add(_smart_mul(a, sibling), b)
        cur = heavy

    ra = brent_reduce(a, threshold)
    rg = brent_reduce(cur, threshold)
    rb = brent_reduce(b, threshold)
    return _smart_add(_smart_mul(ra, rg), rb)


def _heavy_child(f: Formula):
    if f.left.size >= f.right.size:
        return f.left, f.right, f.kind == "mul"
    return f.right, f.left, f.kind == "mul"


# --- random corpus ---------------------------------------------------------------


def random_formula(
    rng: random.Random,
    max_depth: int,
    n_vars: int = 8,
    p_mul: float = 0.4,
    p_leaf: float = 0.3,
    p_const_leaf: float = 0.2,
) -> Formula:
    """Draw a random formula of depth <= max_depth over x1..x<n_vars>.

    Deterministic given the Random instance's state.  Constants are drawn
    from a small pool including non-integers so compiled programs exercise
    rational scaling.
    """
    if max_depth == 0 or rng.random() < p_leaf:
        if rng.random() < p_const_leaf:
            pool = (Rat(-2), Rat(-1), Rat(1), Rat(2), Rat(3), Rat(1, 2), Rat(3, 2))
            return Const(pool[rng.randrange(len(pool))])
        return Var(rng.randrange(1, n_vars + 1))
    left = random_formula(rng, max_depth - 1, n_vars, p_mul, p_leaf, p_const_leaf)
    right = random_formula(rng, max_depth - 1, n_vars, p_mul, p_leaf, p_const_leaf)
    return Mul(left, right) if rng.random() < p_mul else Add(left, right)
