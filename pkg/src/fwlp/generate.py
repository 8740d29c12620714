"""Random instances with a known optimal primal-dual pair.

The construction plants a support S of size m, sets b := A x* for a
positive x* on S, and prices c := A'y* plus a strictly positive slack
off S, so (x*, y*) is optimal by complementary slackness and the radii
thresholds 2||x*||_1 and 2||y*||_inf are known exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from fwlp.model import LpError, StandardFormLP


class RankDeficiencyRetryLimit(LpError):
    pass


@dataclass
class GeneratedInstance:
    problem: StandardFormLP
    x_star: np.ndarray
    y_star: np.ndarray
    xi_min: float
    eta_min: float


_RANK_CHECK_LIMIT = 250_000  # dense rank test only for m*n up to this


def generate_instance(seed: int, m: int, n: int, density: float = 0.5,
                      value_scale: float = 1.0,
                      max_attempts: int = 50) -> GeneratedInstance:
    """Deterministic-in-seed instance with planted optimum.

    Every column and row receives at least one entry; rank-deficient
    draws are resampled (detected by a dense SVD rank test on desk-scale
    sizes) up to ``max_attempts`` times.
    """
    if not (n > m >= 1):
        raise ValueError(f"need n > m >= 1, got m={m}, n={n}")
    if not (0.0 < density <= 1.0):
        raise ValueError(f"density must be in (0, 1], got {density}")
    rng = np.random.default_rng(seed)

    for _ in range(max_attempts):
        rows_acc, cols_acc, vals_acc = [], [], []
        for j in range(n):
            nnz = int(np.clip(rng.binomial(m, density), 1, m))
            rws = rng.choice(m, nnz, replace=False)
            mag = rng.uniform(0.2, 1.0, nnz) * value_scale
            sgn = rng.choice((-1.0, 1.0), nnz)
            rows_acc.append(rws)
            cols_acc.append(np.full(nnz, j))
            vals_acc.append(mag * sgn)
        rows = np.concatenate(rows_acc)
        cols = np.concatenate(cols_acc)
        vals = np.concatenate(vals_acc)
        empty = np.setdiff1d(np.arange(m), np.unique(rows))
        if empty.size:
            fill_cols = rng.choice(n, empty.size)
            rows = np.concatenate([rows, empty])
            cols = np.concatenate([cols, fill_cols])
            vals = np.concatenate([
                vals,
                rng.uniform(0.2, 1.0, empty.size) * value_scale
                * rng.choice((-1.0, 1.0), empty.size)])
        A = sp.coo_matrix((vals, (rows, cols)), shape=(m, n)).tocsc()
        A.sum_duplicates()
        if m * n <= _RANK_CHECK_LIMIT:
            if np.linalg.matrix_rank(A.toarray()) < m:
                continue
        break
    else:
        raise RankDeficiencyRetryLimit(
            f"no full-row-rank draw in {max_attempts} attempts "
            f"(m={m}, n={n}, density={density})")

    support = np.sort(rng.choice(n, m, replace=False))
    x_star = np.zeros(n)
    x_star[support] = rng.uniform(0.5, 1.5, m) * value_scale
    b = A @ x_star
    y_star = rng.uniform(-1.0, 1.0, m) * value_scale
    slack = rng.uniform(0.1, 1.0, n) * value_scale
    slack[support] = 0.0
    c = A.T @ y_star + slack

    problem = StandardFormLP(A, b, c)
    # planted-optimality sanity: strong duality is an algebraic identity here
    assert abs(float(c @ x_star - b @ y_star)) <= 1e-10 * (1 + abs(c @ x_star))
    return GeneratedInstance(
        problem=problem, x_star=x_star, y_star=y_star,
        xi_min=2.0 * float(np.abs(x_star).sum()),
        eta_min=2.0 * float(np.abs(y_star).max()))
