"""Finite permutation groups: laws, equations, closedness audits, monoliths
and retractions."""

from .catalog import Catalog, resolve, shipped_catalog
from .equations import (
    EquationSystem,
    Exhausted,
    NoSolution,
    Solution,
    enumerate_words,
    is_algebraically_closed_sample,
    is_verbally_closed,
    solve,
    word_image,
)
from .errors import BudgetExceeded, GroupTooLarge, NotASubgroup, NotNormal, RetractKitError, WordSyntaxError
from .groups import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    center,
    centralizer,
    conjugacy_classes,
    direct_power,
    direct_product,
    generate,
    is_normal,
    normalizer,
    quotient,
    sylow_subgroup,
)
from .morphisms import are_isomorphic, search_homomorphisms
from .perm import Permutation
from .retracts import (
    all_subgroups,
    find_retraction_brute,
    find_retraction_lemma,
    strong_retract_audit,
    variety_membership,
    verify_star,
)
from .structure import (
    abelian_strong_retract_criterion,
    is_maximal_monolithic,
    is_nilpotent,
    kmo_hypotheses,
    monolith,
    normal_subgroups,
    verify_subnormal_series,
)
from .words import evaluate, holds_law, holds_law_set, parse_equation, parse_law, parse_word, to_text

__version__ = "0.1.0"
