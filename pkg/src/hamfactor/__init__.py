"""Exact construction of Hamiltonian structures and integrable systems for u' = Bu."""

from .classifier import Verdict, classify, conserved_report, invertible_choice
from .dsolver import DFamily, compare_with_oracle, oracle_family, solve_family
from .exact import LinForm, ParamMatrix, RatMatrix
from .integrability import build_integrable, commutant, commutant_oracle, verify_system
from .jordan import JordanSpec, realize

__all__ = [
    "DFamily", "JordanSpec", "LinForm", "ParamMatrix", "RatMatrix", "Verdict",
    "build_integrable", "classify", "commutant", "commutant_oracle", "compare_with_oracle",
    "conserved_report", "invertible_choice", "oracle_family", "realize", "solve_family",
    "verify_system",
]
