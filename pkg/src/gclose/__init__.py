"""Exact computation in the circle group: topological torsion, duals of
finitely generated abelian groups, closures of character subgroups, and
escape witnesses for non-members."""

__version__ = "0.1.0"

from .circle import (
    BoundedExpansionError,
    CFExpansion,
    CircleError,
    CirclePoint,
    Enclosure,
    SurdSum,
    cf_expand,
    convergent_denominators,
    convergents,
    norm,
)
from .duality import (
    Character,
    DualClosure,
    DualSubgroup,
    DualityError,
    FgAbelianGroup,
    IntMatrix,
    PrecompactTopology,
    Sublattice,
    annihilator,
    closure_in_dual,
    group_from_presentation,
    row_hnf,
    smith_normal_form,
    von_neumann_radical,
)
from .torsion import (
    Budget,
    CFDenominators,
    Constant,
    Explicit,
    Factorial,
    Geometric,
    Interleave,
    IntVecSeq,
    NotFound,
    NullCertificate,
    NullSequenceResult,
    NullTermCert,
    Policy,
    RationalTorsionProfile,
    Subsequence,
    TorsionError,
    Verdict,
    eval_seq,
    null_sequence,
    rational_torsion_profile,
    recheck_null_certificate,
    s_membership,
    t_membership,
)
from .witness import (
    BdsReport,
    ConsistentWithMembership,
    EscapeTermCert,
    Exhausted,
    NotInGClosure,
    Witness,
    WitnessError,
    bds_experiment,
    check_witness,
    find_witness,
    g_membership_experiment,
)

__all__ = [
    "__version__",
    "BoundedExpansionError",
    "CFExpansion",
    "CircleError",
    "CirclePoint",
    "Enclosure",
    "SurdSum",
    "cf_expand",
    "convergent_denominators",
    "convergents",
    "norm",
    "Character",
    "DualClosure",
    "DualSubgroup",
    "DualityError",
    "FgAbelianGroup",
    "IntMatrix",
    "PrecompactTopology",
    "Sublattice",
    "annihilator",
    "closure_in_dual",
    "group_from_presentation",
    "row_hnf",
    "smith_normal_form",
    "von_neumann_radical",
    "Budget",
    "CFDenominators",
    "Constant",
    "Explicit",
    "Factorial",
    "Geometric",
    "Interleave",
    "IntVecSeq",
    "NotFound",
    "NullCertificate",
    "NullSequenceResult",
    "NullTermCert",
    "Policy",
    "RationalTorsionProfile",
    "Subsequence",
    "TorsionError",
    "Verdict",
    "eval_seq",
    "null_sequence",
    "rational_torsion_profile",
    "recheck_null_certificate",
    "s_membership",
    "t_membership",
    "BdsReport",
    "ConsistentWithMembership",
    "EscapeTermCert",
    "Exhausted",
    "NotInGClosure",
    "Witness",
    "WitnessError",
    "bds_experiment",
    "check_witness",
    "find_witness",
    "g_membership_experiment",
]
