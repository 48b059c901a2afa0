"""(p,q)-gamma and digamma functions, their inequalities, and limit studies."""

from ._core import (
    ConfigError,
    DomainError,
    EvalResult,
    HypothesisError,
    InequalityReport,
    OrderError,
    OverflowError,
    ToleranceNotReached,
    euler_gamma,
    evaluate,
    fd_derivative,
    gamma_p,
    gamma_pq,
    gamma_q,
    hp_psi_pq,
    log_gamma_classical,
    log_gamma_p,
    log_gamma_pq,
    log_gamma_q,
    log_q_factorial,
    log_q_number,
    psi,
    psi_m,
    psi_p,
    psi_pq,
    psi_pq_m,
    psi_q,
    q_number,
    recovery_table,
    sweep,
    witness_sweep,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
