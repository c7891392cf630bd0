# Higher-order superposition prover: terms, orders, unification, calculus, loop and TPTP frontend

from .clausify import Problem, clausify, load_problem, problem_from_text
from .config import ProverConfig
from .errors import (
    ClausifyError, EncodingError, LambdaSupError, PositionError, ResourceLimit, TermTypeError,
    TptpSyntaxError, UnsupportedInputError,
)
from .report import exit_code, report, szs_status
from .saturation import ProverResult, Status, saturate
from .signature import Signature
from .tptp import parse_file, parse_term, parse_tptp

__all__ = [
    "ClausifyError", "EncodingError", "LambdaSupError", "PositionError", "Problem", "ProverConfig",
    "ProverResult", "ResourceLimit", "Signature", "Status", "TermTypeError", "TptpSyntaxError",
    "UnsupportedInputError", "clausify", "exit_code", "load_problem", "parse_file", "parse_term",
    "parse_tptp", "problem_from_text", "report", "saturate", "szs_status",
]
