"""Variation norms, finite-difference and Littlewood-Paley Besov norms,
K-functionals, and numerical checks of composition inequalities."""

__version__ = "0.1.0"

from .errors import EvalDomainError, NumericError, ParseError, ValidationError, VarnormError
from .sampled import Interval, SampledFunction, StepFunction, UniformGrid, read_csv, sample, sample_midpoints
from .expr import chain_derivative, compose, differentiate, evaluate, parse, to_text
from .pvar import bvp1_norm, bvp_alpha_norm, pvar_bruteforce, pvar_dp, up_seminorm, vp_norm
from .findiff import BesovParams, besov_fd_seminorm, finite_difference, holder_zygmund_seminorm, sobolev_fd_norm
from .lpaley import build_partition, decompose, lp_besov_norm, paraproduct_split, scaling_check
from .interp import embedding_chain_report, interp_norm, kfunctional_sup_l1
from .corpus import FunctionFamily
from .verify import InequalityReport, scan_example4

__all__ = [
    "EvalDomainError", "NumericError", "ParseError", "ValidationError", "VarnormError",
    "Interval", "SampledFunction", "StepFunction", "UniformGrid", "read_csv", "sample", "sample_midpoints",
    "chain_derivative", "compose", "differentiate", "evaluate", "parse", "to_text",
    "bvp1_norm", "bvp_alpha_norm", "pvar_bruteforce", "pvar_dp", "up_seminorm", "vp_norm",
    "BesovParams", "besov_fd_seminorm", "finite_difference", "holder_zygmund_seminorm", "sobolev_fd_norm",
    "build_partition", "decompose", "lp_besov_norm", "paraproduct_split", "scaling_check",
    "embedding_chain_report", "interp_norm", "kfunctional_sup_l1",
    "FunctionFamily", "InequalityReport", "scan_example4",
]
