"""A scikit-learn style transformer over a fixed monoid.

``fit`` takes the generators and computes the atoms and the monoid's
elasticity; ``transform`` maps lattice points to per-element length
invariants.  Non-members get NaN rows.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .elasticity import elasticity_fg
from .factorization import length_set
from .geometry import ContractError
from .monoid import atoms_of

FEATURES = ("min_length", "max_length", "n_lengths", "elasticity")


def check_lattice_points(X, dim=None, name="X"):
    """Validate a 2-D array of nonnegative integers; returns a list of int tuples.

    Values are converted through Python ints so large coordinates stay exact.
    """
    rows = [list(r) for r in X] if not isinstance(X, np.ndarray) else X.tolist()
    if not rows:
        raise ContractError(f"{name} is empty")
    width = len(rows[0])
    out = []
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ContractError(f"{name}[{i}] has {len(r)} coordinates, expected {width}")
        vec = []
        for j, c in enumerate(r):
            if isinstance(c, float) and not c.is_integer():
                raise ContractError(f"{name}[{i}][{j}] = {c} is not an integer")
            c = int(c)
            if c < 0:
                raise ContractError(f"{name}[{i}][{j}] = {c} is negative")
            vec.append(c)
        out.append(tuple(vec))
    if dim is not None and width != dim:
        raise ContractError(f"{name} has {width} features, but the monoid lives in dimension {dim}")
    return out


class FactorizationInvariants(TransformerMixin, BaseEstimator):
    """Length invariants of elements of the monoid generated by ``fit``'s input.

    Parameters
    ----------
    compute_elasticity : bool
        Also solve the LP for the monoid's elasticity at fit time.
    """

    def __init__(self, compute_elasticity=True):
        self.compute_elasticity = compute_elasticity

    def fit(self, X, y=None):
        gens = check_lattice_points(X, name="generators")
        if any(not any(g) for g in gens):
            raise ContractError("generators must be nonzero")
        self.atoms_ = atoms_of(gens)
        self.n_features_in_ = len(gens[0])
        self.elasticity_ = elasticity_fg(self.atoms_).value if self.compute_elasticity else None
        return self

    def transform(self, X):
        check_is_fitted(self, "atoms_")
        pts = check_lattice_points(X, dim=self.n_features_in_)
        out = np.full((len(pts), len(FEATURES)), np.nan)
        for i, x in enumerate(pts):
            L = length_set(self.atoms_, x)
            if not L:
                continue
            rho = L[-1] / L[0] if L[0] else 1.0
            out[i] = (L[0], L[-1], len(L), rho)
        return out

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURES, dtype=object)
