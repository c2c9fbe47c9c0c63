"""Equalisers of free group homomorphisms: words, Stallings foldings,
rational constraints, the marker reduction and equaliser search."""

from .equaliser import (
    DerivedGraph,
    EqReport,
    apply_phi,
    basis_from_rank,
    brute_force_eq,
    build_derived_graph,
    eq_core_consistency,
    search_solutions,
)
from .errors import (
    AlphabetMismatchError,
    BudgetExceededError,
    EqfreeError,
    HypothesesRefutedError,
    InjectiveError,
    NotASolutionError,
    NotBothNonInjectiveError,
    NotDecomposableError,
    NotInImageError,
    NotInjectiveError,
    NotMemberError,
    ParseError,
    ValidationError,
    WrongShapeError,
)
from .genericity import ExperimentConfig, ExperimentStats, run_experiment, sample_pair, sample_reduced_word
from .instances import InstanceFile, parse_instance, render_instance
from .kernels import BACKEND
from .rational import (
    Automaton,
    benois_reduce,
    compile,
    decide_pcp_r,
    el_automaton,
    intersect,
    is_trivial,
    parse_constraint,
    reduced_only,
)
from .reductions import (
    CiCheck,
    ElInstance,
    FactorKind,
    GpcpInstance,
    MarkerFactor,
    PcpInstance,
    ci_hypotheses_check,
    decide_gpcp_ci,
    decompose_solution,
    gpcp_to_el,
    gpcp_to_pcp,
    pcp_as_gpcp,
    transfer_solution,
    verify_solution,
)
from .stallings import (
    CoreGraph,
    basis,
    common_kernel_witness,
    conjugacy_separated,
    core_of,
    express,
    is_injective,
    kernel_witness,
    member,
    rank,
)
from .words import Alphabet, Homomorphism, Letter, Word, apply_hom, concat, free_reduce, invert

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
