"""Reductions, additive decompositions and elementary integration in
rationally hyperexponential towers over QQ(x)."""

from .additive import AdditiveDecomposition, ad_rht, is_derivative
from .elementary import IntegralExpression, elementary_test, integrate, residues_constant, rothstein_trager_resultant
from .errors import (
    DuplicateGenerator,
    HyperredError,
    InvariantViolation,
    NotDifferentialReduced,
    NotWeaklyNormalized,
    PreconditionViolated,
    UnsupportedCase,
    UnsupportedTower,
)
from .field import Tower, TowerElement
from .frontend.build import build_tower, evaluate
from .kernel import gks, is_weakly_normalized
from .matryoshka import matryoshka_decompose, project
from .rational import build_residual_basis, hermite_ostrogradsky, hyperexp_hermite
from .reductions import gkr, gksr, gsr, in_Vf
from .tower import classify, derive

__version__ = "0.1.0"

__all__ = [
    "AdditiveDecomposition",
    "DuplicateGenerator",
    "HyperredError",
    "IntegralExpression",
    "InvariantViolation",
    "NotDifferentialReduced",
    "NotWeaklyNormalized",
    "PreconditionViolated",
    "Tower",
    "TowerElement",
    "UnsupportedCase",
    "UnsupportedTower",
    "ad_rht",
    "build_residual_basis",
    "build_tower",
    "classify",
    "derive",
    "elementary_test",
    "evaluate",
    "gkr",
    "gks",
    "gksr",
    "gsr",
    "hermite_ostrogradsky",
    "hyperexp_hermite",
    "in_Vf",
    "integrate",
    "is_derivative",
    "is_weakly_normalized",
    "matryoshka_decompose",
    "project",
    "residues_constant",
    "rothstein_trager_resultant",
]
