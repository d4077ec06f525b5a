import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import log_entropy_cell, ppmi_cell
from relmap.corpus import ingest
from relmap.errors import ConfigError, TransformError
from relmap.evaluation import mine_for_problems, space_from_stats
from relmap.patterns import (build_frequency_matrix, build_pair_list,
                             mine_patterns, prune_rows, select_columns)
from relmap.problems import MappingProblem
from relmap.space import (RelationSpace, _svd_components, build_space,
                          build_space_from_matrix, transform_log_entropy,
                          transform_ppmic, truncated_svd)
from relmap.terms import TermPair

from conftest import write_corpus


def dense(matrix):
    return matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)


# --- PPMI transform ---------------------------------------------------------

def test_ppmic_uniform_matrix_is_zero():
    out = transform_ppmic([[3.0, 3.0], [3.0, 3.0]])
    assert out.nnz == 0


def test_ppmic_diagonal_log2():
    out = dense(transform_ppmic([[4.0, 0.0], [0.0, 4.0]]))
    want = [[math.log(2.0), 0.0], [0.0, math.log(2.0)]]
    assert np.allclose(out, want, atol=1e-12)


def test_ppmic_clamps_negative_cells():
    F = [[3.0, 1.0], [1.0, 3.0]]
    out = dense(transform_ppmic(F))
    for i in range(2):
        for j in range(2):
            assert out[i][j] == pytest.approx(ppmi_cell(F, i, j), abs=1e-12)
    assert out[0][1] == 0.0 and out[1][0] == 0.0


def test_ppmic_rejects_all_zero():
    with pytest.raises(TransformError):
        transform_ppmic([[0.0, 0.0], [0.0, 0.0]])


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60)
def test_ppmic_matches_scalar_oracle(seed):
    rng = np.random.default_rng(seed)
    F = rng.integers(0, 5, size=(6, 9)).astype(float)
    if F.sum() == 0:
        F[0, 0] = 1.0
    out = dense(transform_ppmic(F))
    rows = F.tolist()
    for i in range(F.shape[0]):
        for j in range(F.shape[1]):
            assert out[i][j] == pytest.approx(ppmi_cell(rows, i, j), abs=1e-9)
    assert np.count_nonzero(out) <= np.count_nonzero(F)
    assert np.all(out[F == 0] == 0)


# --- log entropy transform --------------------------------------------------

def test_log_entropy_single_mass_column():
    X, kept = transform_log_entropy([[5.0, 0.0], [0.0, 2.0]])
    out = dense(X)
    assert kept.tolist() == [0, 1]
    assert out[0][0] == pytest.approx(math.log(6.0))
    assert out[1][1] == pytest.approx(math.log(3.0))


def test_log_entropy_uniform_column_zeroed():
    X, kept = transform_log_entropy([[2.0, 3.0], [2.0, 0.0]])
    out = dense(X)
    assert out[0][0] == 0.0 and out[1][0] == 0.0  # uniform column, weight 0
    assert out[0][1] > 0


def test_log_entropy_drops_zero_columns():
    X, kept = transform_log_entropy([[1.0, 0.0, 2.0], [1.0, 0.0, 0.0]])
    assert kept.tolist() == [0, 2]
    assert X.shape == (2, 2)


def test_log_entropy_matches_scalar_oracle():
    F = [[2.0, 0.0], [1.0, 1.0]]
    X, kept = transform_log_entropy(F)
    out = dense(X)
    for i in range(2):
        for j in range(2):
            assert out[i][j] == pytest.approx(log_entropy_cell(F, i, j),
                                              abs=1e-12)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40)
def test_log_entropy_random_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    F = rng.integers(0, 4, size=(5, 7)).astype(float)
    if F.sum() == 0:
        F[0, 0] = 1.0
    X, kept = transform_log_entropy(F)
    out = dense(X)
    rows = F.tolist()
    for col_out, j in enumerate(kept):
        for i in range(F.shape[0]):
            assert out[i][col_out] == pytest.approx(
                log_entropy_cell(rows, i, int(j)), abs=1e-9)


# --- truncated SVD ----------------------------------------------------------

def test_svd_rank_one_exact():
    X = np.outer([1.0, 2.0, 3.0], [4.0, 5.0])
    u, s, vt = _svd_components(sp.csr_matrix(X), 1)
    recon = (u * s) @ vt
    assert np.linalg.norm(recon - X) <= 1e-8


def test_svd_diagonal_analytic():
    # singular values of diag(3, 1) are exactly 3 and 1
    u, s = truncated_svd(np.diag([3.0, 1.0]), 1)
    assert s.shape == (1,)
    assert s[0] == pytest.approx(3.0, abs=1e-12)
    u_full, s_full, vt = _svd_components(sp.csr_matrix(np.diag([3.0, 1.0])), 1)
    recon = (u_full * s_full) @ vt
    assert np.allclose(recon, [[3.0, 0.0], [0.0, 0.0]], atol=1e-10)


def test_svd_full_rank_reconstruction():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((6, 4))
    u, s, vt = _svd_components(sp.csr_matrix(X), 4)
    err = np.linalg.norm((u * s) @ vt - X) / np.linalg.norm(X)
    assert err <= 1e-8


def test_svd_orthonormal_columns():
    rng = np.random.default_rng(7)
    X = rng.standard_normal((20, 30))
    u, s = truncated_svd(X, 8)
    gram = u.T @ u
    assert np.linalg.norm(gram - np.eye(8)) <= 1e-8
    assert all(s[i] >= s[i + 1] for i in range(len(s) - 1))


def test_svd_pads_when_k_exceeds_dimension():
    X = np.diag([2.0, 1.0])
    u, s = truncated_svd(X, 5)
    assert u.shape == (2, 5)
    assert s.shape == (5,)
    assert np.all(s[2:] == 0)
    assert np.all(u[:, 2:] == 0)


def test_svd_rejects_bad_k():
    with pytest.raises(ConfigError):
        truncated_svd(np.eye(3), 0)


def test_svd_beats_random_rank_k_competitors():
    rng = np.random.default_rng(42)
    for _ in range(5):
        X = rng.standard_normal((12, 18))
        k = 3
        u, s, vt = _svd_components(sp.csr_matrix(X), k)
        best = np.linalg.norm((u * s) @ vt - X)
        for _ in range(20):
            B = rng.standard_normal((12, k)) @ rng.standard_normal((k, 18))
            assert best <= np.linalg.norm(B - X) + 1e-8


def test_svd_sparse_path_matches_dense():
    rng = np.random.default_rng(3)
    X = sp.random(700, 900, density=0.01, random_state=rng, format="csr")
    u, s = truncated_svd(X, 5)   # min(shape) > dense limit: iterative path
    dense_s = np.linalg.svd(X.toarray(), compute_uv=False)[:5]
    assert np.allclose(s, dense_s, rtol=1e-6, atol=1e-8)
    assert np.linalg.norm(u.T @ u - np.eye(5)) <= 1e-6


# --- relation space ---------------------------------------------------------

def pair_index(*pairs):
    return {TermPair.parse(*xy): i for i, xy in enumerate(pairs)}


def test_build_space_normalizes_rows():
    U = np.array([[3.0, 0.0], [1.0, 1.0], [0.0, 0.0]])
    sigma = np.array([2.0, 1.0])
    space = build_space(U, sigma, pair_index(("a", "b"), ("c", "d"), ("e", "f")))
    norms = np.linalg.norm(space.W, axis=1)
    assert norms[0] == pytest.approx(1.0)
    assert norms[1] == pytest.approx(1.0)
    assert norms[2] == 0.0


def test_build_space_identity_example():
    space = build_space(np.eye(2), np.array([2.0, 1.0]),
                        pair_index(("a", "b"), ("c", "d")))
    assert np.allclose(space.W, np.eye(2))


def test_sim_self_is_one():
    space = build_space(np.eye(2), np.array([2.0, 1.0]),
                        pair_index(("a", "b"), ("c", "d")))
    p = TermPair.parse("a", "b")
    assert space.sim_r(p, p) == pytest.approx(1.0, abs=1e-12)


def test_sim_absent_pair_is_zero():
    space = build_space(np.eye(2), np.array([2.0, 1.0]),
                        pair_index(("a", "b"), ("c", "d")))
    assert space.sim_r(TermPair.parse("a", "b"),
                       TermPair.parse("q", "z")) == 0.0


def build_toy_space(tmp_path, k=None, transform="ppmic"):
    texts = ["p1 links q1 fill fill fill p2 links q2",
             "p1 ties q1 fill fill fill p2 near q2 fill p3 far q3"]
    index = write_corpus(tmp_path, texts)
    prob = MappingProblem.build(id="toy", source=["p1", "q1", "p3"],
                                target=["p2", "q2", "q3"])
    pairs = build_pair_list([prob])
    stats = mine_patterns(index, pairs)
    rows = prune_rows(pairs, stats.phrase_counts)
    cols = select_columns(stats, t=50, n_r=len(rows))
    F = build_frequency_matrix(rows, cols, stats)
    X = transform_ppmic(F)
    return X, rows


def test_sim_matches_dense_cosine_oracle(tmp_path):
    X, rows = build_toy_space(tmp_path)
    k = 3
    space = build_space_from_matrix(X, rows, k=k)
    Xd = X.toarray()
    u, s, vt = np.linalg.svd(Xd, full_matrices=False)
    proj = u[:, :k] * s[:k]
    for i, p in enumerate(rows):
        for j, q in enumerate(rows):
            ni, nj = np.linalg.norm(proj[i]), np.linalg.norm(proj[j])
            if ni == 0 or nj == 0:
                want = 0.0
            else:
                want = float(proj[i] @ proj[j] / (ni * nj))
            assert space.sim_r(p, q) == pytest.approx(want, abs=1e-9)


def test_sim_symmetric_under_pair_reversal(tmp_path):
    X, rows = build_toy_space(tmp_path)
    space = build_space_from_matrix(X, rows, k=4)
    present = list(space.row_index)
    for p in present:
        for q in present:
            if p.reversed() in space.row_index and q.reversed() in space.row_index:
                assert space.sim_r(p, q) == pytest.approx(
                    space.sim_r(p.reversed(), q.reversed()), abs=1e-9)


def test_sim_range(tmp_path):
    X, rows = build_toy_space(tmp_path)
    space = build_space_from_matrix(X, rows, k=2)
    for p in rows:
        for q in rows:
            v = space.sim_r(p, q)
            assert -1.0 - 1e-12 <= v <= 1.0 + 1e-12


def test_no_svd_equals_direct_cosines(tmp_path):
    X, rows = build_toy_space(tmp_path)
    space = build_space_from_matrix(X, rows, k=None)
    assert space.k is None
    Xd = X.toarray()
    for i, p in enumerate(rows):
        for j, q in enumerate(rows):
            ni, nj = np.linalg.norm(Xd[i]), np.linalg.norm(Xd[j])
            want = 0.0 if ni == 0 or nj == 0 else float(Xd[i] @ Xd[j] / (ni * nj))
            assert space.sim_r(p, q) == pytest.approx(want, abs=1e-12)


def test_space_roundtrip_exact(tmp_path):
    X, rows = build_toy_space(tmp_path)
    space = build_space_from_matrix(X, rows, k=3,
                                    provenance={"corpus_digest": "abc", "t": 50})
    path = tmp_path / "space.npz"
    space.save(path)
    loaded = RelationSpace.load(path)
    assert loaded.k == space.k
    assert loaded.transform == space.transform
    assert loaded.provenance == space.provenance
    for p in rows:
        for q in rows:
            assert abs(loaded.sim_r(p, q) - space.sim_r(p, q)) <= 1e-12


def test_empty_space_from_empty_corpus():
    index = ingest([])
    prob = MappingProblem.build(id="e", source=["a", "b"], target=["c", "d"])
    pairs, stats = mine_for_problems(index, [prob])
    space, diag = space_from_stats(pairs, stats, t=20, k=300)
    assert diag["n_r"] == 0
    assert space.sim_r(TermPair.parse("a", "b"), TermPair.parse("c", "d")) == 0.0
