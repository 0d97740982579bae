"""Finite, ill-founded and cyclic proofs for intuitionistic Goedel-Loeb logic."""

from .calculus import CheckReport, R, RuleName, Step, System, check_finite, conclusion, is_proof, match_rule, node
from .core import (
    BOT,
    TOP,
    And,
    Bot,
    Box,
    FMultiset,
    Formula,
    Imp,
    Or,
    ParseError,
    ResourceLimit,
    Sequent,
    Var,
    interpret,
    parse_formula,
    parse_sequent,
    seq,
    show,
    show_sequent,
)
from .cyclic import CyclicDerivation, check_cyclic, classify_assumptions, k4_progress, unroll
from .semantics import Countermodel, KripkeFrame, KripkeModel, Valid, satisfies, valid_up_to
from .transform import InternalError, NotAProof, Prover, contract, loeb, prove, weaken
from .translate import check_unfolding, circ_to_fin, fin_to_circ, trans, validate_beta
from .trees import FinTree, LazyTree, corecurse, unfold_to_depth

__version__ = "0.1.0"

__all__ = [
    "And",
    "BOT",
    "Bot",
    "Box",
    "CheckReport",
    "Countermodel",
    "CyclicDerivation",
    "FMultiset",
    "FinTree",
    "Formula",
    "Imp",
    "InternalError",
    "KripkeFrame",
    "KripkeModel",
    "LazyTree",
    "NotAProof",
    "Or",
    "ParseError",
    "Prover",
    "R",
    "ResourceLimit",
    "RuleName",
    "Sequent",
    "Step",
    "System",
    "TOP",
    "Valid",
    "Var",
    "check_cyclic",
    "check_finite",
    "check_unfolding",
    "circ_to_fin",
    "classify_assumptions",
    "conclusion",
    "contract",
    "corecurse",
    "fin_to_circ",
    "interpret",
    "is_proof",
    "k4_progress",
    "loeb",
    "match_rule",
    "node",
    "parse_formula",
    "parse_sequent",
    "prove",
    "satisfies",
    "seq",
    "show",
    "show_sequent",
    "trans",
    "unfold_to_depth",
    "unroll",
    "valid_up_to",
    "validate_beta",
    "weaken",
]
