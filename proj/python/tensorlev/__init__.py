"""Ridge leverage score sampling for tensor product and polynomial kernels.

Datasets are d x n arrays with one column per point.
"""

import numpy as np

from ._tensorlev import (
    ConfigError,
    ContractViolation,
    DataError,
    NumericalError,
    gaussian_kernel,
    ntk_kernel,
    ntk_taylor_coeff,
    polynomial_kernel,
    set_thread_count,
    spectral_check,
    statistical_dimension,
    thread_count,
    version,
    woodbury_coefficients,
)
from . import _tensorlev

__version__ = version()

__all__ = [
    "ConfigError",
    "ContractViolation",
    "DataError",
    "NumericalError",
    "exact_kernel",
    "gaussian_kernel",
    "ntk_kernel",
    "ntk_taylor_coeff",
    "polynomial_kernel",
    "sample",
    "set_thread_count",
    "spectral_check",
    "statistical_dimension",
    "thread_count",
    "version",
    "woodbury_coefficients",
]


def _as_matrix(x):
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64))


def sample(x, kernel="poly", q=2, eps=0.5, lam=1.0, mu=None, samples_const=4.0, samples=0, seed=0):
    """Draws a recursive leverage score sketch Z = Pi Phi of the kernel's features.

    `x` is one dataset, or a sequence of datasets for kernel="tensor". With
    mu=None the statistical dimension of the exact kernel is used. For
    kernel="ntk", q > 0 fixes the truncation degree instead of deriving it.
    Returns a dict with the s x n sketch, the sampled rows and level data.
    """
    datasets = [_as_matrix(a) for a in x] if kernel == "tensor" else [_as_matrix(x)]
    if mu is None:
        mu = max(1.0, statistical_dimension(exact_kernel(x, kernel, q), lam))
    return _tensorlev.sample(kernel, datasets, q, eps, lam, mu, samples_const, samples, seed)


def exact_kernel(x, kernel="poly", q=2):
    """Exact n x n kernel matrix, for mu estimates and verification."""
    if kernel == "tensor":
        mats = [_as_matrix(a) for a in x]
        k = np.ones((mats[0].shape[1], mats[0].shape[1]))
        for a in mats:
            k *= a.T @ a
        return k
    x = _as_matrix(x)
    if kernel == "poly":
        return polynomial_kernel(x, x, q)
    if kernel == "gaussian":
        return gaussian_kernel(x, x)
    if kernel == "ntk":
        return ntk_kernel(x, x)
    raise ConfigError(f"unknown kernel '{kernel}'")
