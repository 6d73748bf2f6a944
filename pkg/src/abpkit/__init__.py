"""abpkit: exact compilers from formulas to small-width branching programs.

The package lowers arithmetic formulas to

* width-2 branching programs that compute the target up to an explicit
  O(eps) error in a formal-infinitesimal extension (:mod:`abpkit.width2`),
* exact width-3 branching programs built from shear/permutation/diagonal
  primitives (:mod:`abpkit.width3`),
* sums over the Boolean hypercube of products of affine forms
  (:mod:`abpkit.hypercube`),

and certifies every output by exact polynomial expansion.  All arithmetic is
exact rational; there is no floating point anywhere.
"""

from .scalars import EpsScalar, NegativeEpsPower, Rat, ZeroPolynomial
from .mpoly import MPoly, eps_limit, eps_substitute_power, error_degree, parse_mpoly
from .forms import AffineForm, classify_label, label_class_rank, parse_affine
from .formulas import Formula, eval_formula, parse_formula, render_formula

__all__ = [
    "AffineForm",
    "EpsScalar",
    "Formula",
    "MPoly",
    "NegativeEpsPower",
    "Rat",
    "ZeroPolynomial",
    "classify_label",
    "eps_limit",
    "eps_substitute_power",
    "error_degree",
    "eval_formula",
    "label_class_rank",
    "parse_affine",
    "parse_formula",
    "parse_mpoly",
    "render_formula",
]
