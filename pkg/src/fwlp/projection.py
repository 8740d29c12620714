"""Exact Euclidean projections onto the capped simplex and the dual box.

The capped-simplex projection is computed through the KKT system of the
unit-cap quadratic program

    min -w'x + ||x||^2/2   s.t.   e'x <= 1,  x >= 0,

solved by a descending sort + cumulative-sum scan; ``brute_force_unit_cap``
is an independent exhaustive oracle used by the tests.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fwlp import _kernels
from fwlp.model import LpError, NonFiniteEntry


class SizeLimitExceeded(LpError):
    pass


@dataclass
class KktSolution:
    """KKT triple of the unit-cap program.

    ``x`` is the projection, ``mu`` the multiplier of e'x <= 1 and
    ``support`` the indices allowed to be nonzero.  The multipliers ``z``
    of x >= 0 are not materialized on the production path; call
    ``multipliers(w)`` to construct them for verification.
    """

    x: np.ndarray
    mu: float
    support: np.ndarray

    def multipliers(self, w) -> np.ndarray:
        """The sign multipliers z: mu - w off the support, zero on it."""
        z = self.mu - np.asarray(w, dtype=np.float64)
        z[self.support] = 0.0
        return z

    def residuals(self, w) -> dict:
        """The five KKT residuals (all should be ~0 for a valid triple)."""
        w = np.asarray(w, dtype=np.float64)
        z = self.multipliers(w)
        cap = float(self.x.sum() - 1.0)
        return {
            "stationarity": float(np.max(np.abs(-w + self.x + self.mu - z),
                                         initial=0.0)),
            "cap_feasibility": max(0.0, cap),
            "cap_complementarity": abs(self.mu * cap),
            "sign_complementarity": abs(float(z @ self.x)),
            "nonnegativity": max(0.0, -float(self.x.min(initial=0.0)),
                                 -self.mu, -float(z.min(initial=0.0))),
        }


def kkt_unit_cap(w) -> KktSolution:
    """Unique minimizer of -w'x + ||x||^2/2 over {x >= 0, e'x <= 1}."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    if not np.isfinite(w).all():
        raise NonFiniteEntry("projection input contains a non-finite entry")
    x, mu, support = _kernels.unit_cap_project(w)
    return KktSolution(x=x, mu=mu, support=support)


def brute_force_unit_cap(w, tol: float = 1e-12) -> np.ndarray:
    """Exhaustive oracle for the unit-cap projection, n <= 10 only.

    Enumerates all 2^n support sets, once with the cap inactive (mu = 0)
    and once with it active (mu from e'x = 1), solves each candidate in
    closed form, filters by feasibility and multiplier signs, and returns
    the surviving candidate with the smallest objective.
    """
    w = np.asarray(w, dtype=np.float64)
    n = w.shape[0]
    if n > 10:
        raise SizeLimitExceeded(f"brute force limited to n <= 10, got {n}")
    masks = ((np.arange(2 ** n)[:, None] >> np.arange(n)) & 1).astype(bool)
    sizes = masks.sum(axis=1)

    candidates = []
    # cap inactive: x = w on the support, mu = 0, z = -w off the support
    x_in = np.where(masks, w, 0.0)
    ok_in = ((x_in >= -tol).all(axis=1)
             & (x_in.sum(axis=1) <= 1.0 + tol)
             & (np.where(masks, 0.0, -w) >= -tol).all(axis=1))
    candidates.append(x_in[ok_in])
    # cap active: mu = (sum_T w - 1)/|T|, x = w - mu on the support
    act = sizes > 0
    mu_act = (masks[act] @ w - 1.0) / sizes[act]
    x_act = np.where(masks[act], w - mu_act[:, None], 0.0)
    z_act = np.where(masks[act], 0.0, mu_act[:, None] - w)
    ok_act = ((x_act >= -tol).all(axis=1)
              & (mu_act >= -tol)
              & (z_act >= -tol).all(axis=1))
    candidates.append(x_act[ok_act])

    cand = np.concatenate(candidates, axis=0)
    if cand.shape[0] == 0:  # unreachable: the true solution always survives
        raise LpError("no feasible candidate in brute-force enumeration")
    obj = -(cand @ w) + 0.5 * (cand * cand).sum(axis=1)
    best = cand[int(np.argmin(obj))]
    return np.maximum(best, 0.0)


def project_simplex_cap(w0, xi: float) -> np.ndarray:
    """argmin ||w0 - x||^2 over {x >= 0, e'x <= xi}."""
    if not xi > 0:
        raise ValueError(f"xi must be positive, got {xi}")
    w0 = np.asarray(w0, dtype=np.float64)
    return xi * kkt_unit_cap(w0 / xi).x


def project_box(v, eta: float) -> np.ndarray:
    """Componentwise clamp of v to [-eta, eta]."""
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    return np.clip(np.asarray(v, dtype=np.float64), -eta, eta)
