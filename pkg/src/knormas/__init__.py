"""Normative multi-agent systems as intuitionistic hybrid logic models."""

from .classical import ClassicalHybridModel, eval_all_worlds, eval_classical, validate_classical
from .conflict import (
    COLLISION, CONTRADICTION, ComplianceStatement, ConflictReport, analyse_conflicts,
    conformity_statements, detect_conflicts, joint_compliance_test, obedience_statement,
)
from .formula import free_nominals, parse_formula, render_formula
from .intuitionistic import (
    IntuitionisticHybridModel, WAssignment, check_persistence, discrete_reduction_eval,
    eval_intuitionistic, validate_heredity,
)
from .lattice import LatticeTerm, canonicalize_term, term, term_join, term_leq, term_meet
from .mas import MasSystem, enumerate_traces
from .modelfile import load_model
from .norms import (
    DEFAULT_BOUND, KelsenianModel, NormSpec, build_kelsenian_model, joint_compliance_set,
    trace_complies,
)
from .sdl import check_proof, chisholm_demo, is_tautology, parse_proof

__all__ = [name for name in dir() if not name.startswith("_")]
