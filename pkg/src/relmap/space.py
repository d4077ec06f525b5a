"""Matrix weighting, truncated SVD smoothing, and relational similarity.

The pipeline is: raw frequency matrix F -> weighted matrix X (positive
PMI by default, log entropy as the alternative) -> truncated SVD ->
W = row-normalized U_k * Sigma_k. The relational similarity of two
term pairs is the dot product of their unit rows of W (their cosine);
a pair without a row scores zero against everything.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import svds

from .errors import ConfigError, DataError, TransformError
from .terms import Term, TermPair

# Below this dimension a dense LAPACK decomposition is cheaper and more
# robust than the iterative sparse solver.
_DENSE_SVD_LIMIT = 600

PPMIC = "ppmic"
LOG_ENTROPY = "logentropy"
TRANSFORMS = (PPMIC, LOG_ENTROPY)


def _as_csr(matrix) -> sp.csr_matrix:
    if sp.issparse(matrix):
        out = matrix.tocsr().astype(np.float64)
    else:
        out = sp.csr_matrix(np.asarray(matrix, dtype=np.float64))
    out.eliminate_zeros()  # stored zeros would poison the log-based weights
    return out


def transform_ppmic(F) -> sp.csr_matrix:
    """Positive pointwise mutual information of each cell.

    Probabilities are ratios of frequency sums over the whole matrix;
    cells whose PMI is negative are zeroed, so density never grows.
    """
    F = _as_csr(F)
    total = F.sum()
    if total <= 0:
        raise TransformError("cannot transform an all-zero frequency matrix")
    row_sums = np.asarray(F.sum(axis=1)).ravel()
    col_sums = np.asarray(F.sum(axis=0)).ravel()
    out = F.tocoo(copy=True)
    with np.errstate(divide="ignore"):
        pmi = np.log(out.data * total / (row_sums[out.row] * col_sums[out.col]))
    out.data = np.where(pmi > 0, pmi, 0.0)
    result = out.tocsr()
    result.eliminate_zeros()
    return result


def transform_log_entropy(F) -> tuple[sp.csr_matrix, np.ndarray]:
    """log(f+1) cells scaled by one minus the column's normalized entropy.

    Returns (X, kept_cols) where kept_cols are the original indices of
    the surviving columns: all-zero columns of F are dropped. A column
    whose mass sits in a single row keeps full weight; a column uniform
    over every row is weighted to zero.
    """
    F = _as_csr(F)
    total = F.sum()
    if total <= 0:
        raise TransformError("cannot transform an all-zero frequency matrix")
    n_r = F.shape[0]
    col_sums = np.asarray(F.sum(axis=0)).ravel()
    kept = np.flatnonzero(col_sums > 0)
    coo = F[:, kept].tocoo()
    if n_r > 1:
        q = coo.data / col_sums[kept][coo.col]
        ent = np.zeros(len(kept))
        np.add.at(ent, coo.col, q * np.log(q))
        weights = 1.0 + ent / np.log(n_r)
    else:
        weights = np.ones(len(kept))
    data = np.log1p(coo.data) * weights[coo.col]
    out = sp.csr_matrix((data, (coo.row, coo.col)), shape=coo.shape)
    out.eliminate_zeros()
    return out, kept


def _svd_components(X, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(U_k, sigma_k, Vt_k) with singular values descending.

    When k exceeds the smaller matrix dimension, the factors are padded
    with zero columns/values so shapes stay (n, k), (k,), (k, m).
    """
    if k < 1:
        raise ConfigError(f"svd rank k must be >= 1, got {k}")
    X = _as_csr(X)
    n, m = X.shape
    small = min(n, m)
    if small == 0:
        return np.zeros((n, k)), np.zeros(k), np.zeros((k, m))
    if small > _DENSE_SVD_LIMIT and 1 <= k < small:
        rng = np.random.default_rng(0)
        u, s, vt = svds(X, k=k, v0=rng.standard_normal(small), which="LM")
        order = np.argsort(s)[::-1]
        return u[:, order], s[order], vt[order]
    u, s, vt = np.linalg.svd(X.toarray(), full_matrices=False)
    kk = min(k, small)
    u, s, vt = u[:, :kk], s[:kk], vt[:kk]
    if kk < k:
        u = np.pad(u, ((0, 0), (0, k - kk)))
        s = np.pad(s, (0, k - kk))
        vt = np.pad(vt, ((0, k - kk), (0, 0)))
    return u, s, vt


def truncated_svd(X, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Rank-k factors (U_k, sigma_k); the right factor is not needed here."""
    u, s, _ = _svd_components(X, k)
    return u, s


def _normalize_rows(M: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(M, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    return M / safe[:, None]


@dataclass
class RelationSpace:
    """Unit rows of the smoothed pair-pattern matrix, one per term pair.

    Immutable after construction; similarity queries are dot products
    and are computed on demand rather than materializing the full
    pairwise cosine matrix.
    """

    row_index: dict[TermPair, int]
    W: np.ndarray
    k: Optional[int]                    # None when SVD was skipped
    transform: str = PPMIC
    provenance: dict = field(default_factory=dict)

    def sim_r(self, p: TermPair, q: TermPair) -> float:
        """Cosine of the two pair rows; zero if either pair has no row."""
        i = self.row_index.get(p)
        j = self.row_index.get(q)
        if i is None or j is None:
            return 0.0
        return float(self.W[i] @ self.W[j])

    def save(self, path: str | Path) -> None:
        labels = [[p.x.text, p.y.text] for p in self.row_index]
        meta = {"k": self.k, "transform": self.transform,
                "provenance": self.provenance}
        np.savez(path, W=self.W, labels=json.dumps(labels), meta=json.dumps(meta))

    @classmethod
    def load(cls, path: str | Path) -> "RelationSpace":
        try:
            with np.load(path, allow_pickle=False) as data:
                W = data["W"]
                labels = json.loads(str(data["labels"]))
                meta = json.loads(str(data["meta"]))
        except (OSError, KeyError, ValueError) as exc:
            raise DataError(f"cannot load relation space {path}: {exc}") from exc
        row_index = {TermPair(Term.parse(x), Term.parse(y)): i
                     for i, (x, y) in enumerate(labels)}
        return cls(row_index=row_index, W=W, k=meta["k"],
                   transform=meta["transform"], provenance=meta["provenance"])


def build_space(U_k: np.ndarray, sigma_k: np.ndarray,
                row_index: dict[TermPair, int], *,
                transform: str = PPMIC,
                provenance: Optional[dict] = None) -> RelationSpace:
    """Space over W = row-normalized U_k * diag(sigma_k); zero rows stay zero."""
    W = _normalize_rows(U_k * sigma_k[None, :])
    return RelationSpace(row_index=dict(row_index), W=W, k=len(sigma_k),
                         transform=transform, provenance=provenance or {})


def build_space_from_matrix(X, rows: list[TermPair], *,
                            k: Optional[int],
                            transform: str = PPMIC,
                            provenance: Optional[dict] = None) -> RelationSpace:
    """Space from a weighted matrix, with or without SVD smoothing.

    k=None skips the decomposition entirely: similarities are then
    cosines over the weighted matrix rows themselves.
    """
    row_index = {pair: i for i, pair in enumerate(rows)}
    if len(row_index) != len(rows):
        raise DataError("duplicate pair rows in relation space")
    X = _as_csr(X)
    if k is None:
        space = RelationSpace(row_index=row_index, W=_normalize_rows(X.toarray()),
                              k=None, transform=transform,
                              provenance=provenance or {})
        return space
    u, s = truncated_svd(X, k)
    return build_space(u, s, row_index, transform=transform,
                       provenance=provenance or {})
