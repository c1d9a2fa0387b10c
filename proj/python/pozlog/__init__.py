from ._pozlog import (
    BranchSet,
    Formula,
    PozlogError,
    Registry,
    Structure,
    canonical_model,
    check_theta_tl,
    evaluate,
    full_model,
    omega_of,
    psi_A,
    psi_fam,
    run_cli,
)

__all__ = [
    "BranchSet",
    "Formula",
    "PozlogError",
    "Registry",
    "Structure",
    "canonical_model",
    "check_theta_tl",
    "evaluate",
    "full_model",
    "omega_of",
    "psi_A",
    "psi_fam",
    "run_cli",
]
