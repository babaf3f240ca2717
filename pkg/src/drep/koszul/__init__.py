"""Koszul-duality apparatus: finite algebras, cyclic and CE complexes, twisting cochains."""

from drep.koszul.algebras import (
    FiniteGradedAlgebra,
    dual_numbers_algebra,
    finite_algebra,
    square_zero_algebra,
    truncated_algebra,
)
from drep.koszul.complexes import (
    CEComplex,
    MatrixLieAlgebra,
    ce_complex,
    connes_complex,
    lqt_theta,
    theta_chain_map_check,
)
from drep.koszul.twisting import (
    BarCoalgebra,
    SymCoalgebra,
    TwistingCochainData,
    factorization_check,
    standard_cochain,
    sym_coalgebra_extension,
    t_map,
    tau_rn,
    twisted_tensor,
    universal_cochain,
    verify_twisting_cochain,
)

__all__ = [
    "BarCoalgebra",
    "CEComplex",
    "FiniteGradedAlgebra",
    "MatrixLieAlgebra",
    "SymCoalgebra",
    "TwistingCochainData",
    "ce_complex",
    "connes_complex",
    "dual_numbers_algebra",
    "factorization_check",
    "finite_algebra",
    "lqt_theta",
    "square_zero_algebra",
    "standard_cochain",
    "sym_coalgebra_extension",
    "t_map",
    "tau_rn",
    "theta_chain_map_check",
    "truncated_algebra",
    "twisted_tensor",
    "universal_cochain",
    "verify_twisting_cochain",
]
