"""Exponential-sum rigidity lab for +-1 multiplicative functions modulo a prime."""
from .arith import (
    MultiplicativeFunctionSpec,
    ValueTable,
    factor_table,
    factorize,
    legendre_symbol,
    mf_table,
    parse_function_spec,
    sieve_primes,
)
from .expsum import ExpSumTable, dft_fast, dft_naive
from .rigidity import RigidityReport, correlation, deficit, rigidity_scan

__version__ = "0.1.0"
