"""Ternary continued fraction algorithms and the words they generate.

Two multidimensional continued fraction maps (a two-branch ternary map
and a semi-sorted variant defined on the cone max(x2,x3) <= x1 <= x2+x3),
their matrix cocycles, the substitutions attached to each branch, and the
S-adic words those substitutions generate. The package checks structural
properties of the words (factor complexity 2n+1, tree extension graphs,
bispecial antecedent chains), conjugacy between the two maps, Lyapunov
exponents of the cocycle, and letter balance.

Vectors carry their arithmetic with them: exact Fraction entries or
float64 entries, never mixed. Exact mode is the reference semantics;
float mode exists for speed and guards against near-cancellation.
"""

from .exactlin import (
    DomainError,
    IntMatrix3,
    Vector3,
    apply_inverse,
    mat_mul,
    one_norm,
    vector_payload,
)
from .mcf import (
    BRANCH_MATRICES,
    C1,
    C2,
    CASSAIGNE,
    DEFAULT_EPS,
    S1,
    S2,
    SELMER,
    Z,
    DirectiveSequence,
    NonExpansiveError,
    OrbitStep,
    classify_cassaigne,
    classify_selmer,
    cocycle,
    conjugate_to_selmer,
    in_selmer_cone,
    orbit,
    orbit_steps,
    project,
    step_cassaigne,
    step_selmer,
)
from .morphisms import (
    CPRIME,
    AmbiguousDecodingError,
    CPrimeBlock,
    Morphism,
    NoDecodingError,
    apply,
    c1,
    c2,
    compose,
    compose_all,
    desubstitute,
    incidence,
    recode_cprime,
    s1,
    s2,
    z_left,
    z_right,
)
from .sadic import (
    GeneratedWord,
    NonConvergentError,
    PrimitivityReport,
    directive,
    generate,
    generation_morphism,
    letter_frequencies,
    primitivity_window_check,
    shifted_word,
)
from .factors import (
    EMPTY_WORD_EXTENSIONS,
    NONORDINARY_FAMILY,
    BispecialRecord,
    ExtensionSet,
    FactorIndex,
    TreeWordAudit,
    antecedent_chain,
    audit_tree_word,
    build_index,
    complexity,
    empty_extension_set,
    extension_set,
    is_ordinary,
    is_tree,
    propagate_extensions,
    stabilized_horizon,
)
from .metrics import (
    BalanceTable,
    LyapunovEstimate,
    balance,
    lyapunov,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousDecodingError",
    "BRANCH_MATRICES",
    "BalanceTable",
    "BispecialRecord",
    "C1",
    "C2",
    "CASSAIGNE",
    "CPRIME",
    "CPrimeBlock",
    "DEFAULT_EPS",
    "DirectiveSequence",
    "DomainError",
    "EMPTY_WORD_EXTENSIONS",
    "ExtensionSet",
    "FactorIndex",
    "GeneratedWord",
    "IntMatrix3",
    "LyapunovEstimate",
    "Morphism",
    "NONORDINARY_FAMILY",
    "NoDecodingError",
    "NonConvergentError",
    "NonExpansiveError",
    "OrbitStep",
    "PrimitivityReport",
    "S1",
    "S2",
    "SELMER",
    "TreeWordAudit",
    "Vector3",
    "Z",
    "antecedent_chain",
    "apply",
    "apply_inverse",
    "audit_tree_word",
    "balance",
    "build_index",
    "c1",
    "c2",
    "classify_cassaigne",
    "classify_selmer",
    "cocycle",
    "complexity",
    "compose",
    "compose_all",
    "conjugate_to_selmer",
    "desubstitute",
    "directive",
    "empty_extension_set",
    "extension_set",
    "generate",
    "generation_morphism",
    "in_selmer_cone",
    "incidence",
    "is_ordinary",
    "is_tree",
    "letter_frequencies",
    "lyapunov",
    "mat_mul",
    "one_norm",
    "orbit",
    "orbit_steps",
    "primitivity_window_check",
    "project",
    "propagate_extensions",
    "recode_cprime",
    "s1",
    "s2",
    "shifted_word",
    "stabilized_horizon",
    "step_cassaigne",
    "step_selmer",
    "vector_payload",
    "z_left",
    "z_right",
]
