"""Graded Betti-number engine: splittings, loop-space models, the E1 page and theorem checks."""
from .e1 import E1Table, e1_table
from .formulas import (
    DjSummand,
    SpaceFormula,
    Sphere,
    Summand,
    betti_of_formula,
    space_formula,
    stability_dims,
)
from .series import (
    FieldChoice,
    GradedDims,
    betti_Cj_F2,
    betti_Dj,
    betti_loop_model,
)
from .verify import CHECK_IDS, CheckResult, VerifyReport, snaith_sum, verify_theorems

__all__ = [
    "CHECK_IDS",
    "CheckResult",
    "DjSummand",
    "E1Table",
    "FieldChoice",
    "GradedDims",
    "SpaceFormula",
    "Sphere",
    "Summand",
    "VerifyReport",
    "betti_Cj_F2",
    "betti_Dj",
    "betti_loop_model",
    "betti_of_formula",
    "e1_table",
    "snaith_sum",
    "space_formula",
    "stability_dims",
    "verify_theorems",
]
