import numpy as np
import pytest

from hyperspec import hypergraph as hg
from hyperspec import spectral as sp
from hyperspec import tensor as tn
from hyperspec.hypergraph import Hypergraph
from hyperspec.rng import SplitMix64
from hyperspec.spectral import PowerIterationConfig
from hyperspec.tensor import EdgeListOperator

from oracles import graph_matrices

CFG = PowerIterationConfig()


def connected_graphs(k, count, n=7, m=6, kind="uniform-random"):
    out, seed = [], 0
    while len(out) < count:
        gen = hg.generate(kind, n, k, m, seed)
        seed += 1
        if gen.connected:
            out.append(gen.graph)
    return out


def test_config_validation():
    for kwargs in ({"tol": 0}, {"max_iter": 0}, {"shift": -1.0}):
        with pytest.raises(ValueError):
            PowerIterationConfig(**kwargs)


# -- power iteration ---------------------------------------------------------------


def test_single_edge_radii():
    G = hg.single_edge(4)
    q = sp.power_rho(EdgeListOperator(G, "Q"))
    a = sp.power_rho(tn.adjacency_tensor(G))
    assert abs(q.lam - 2) <= 1e-9 and abs(a.lam - 1) <= 1e-9
    assert np.allclose(q.pair.x, 1.0) and q.converged


def test_triangle_q_radius():
    _, _, Q = graph_matrices(3, [(1, 2), (2, 3), (1, 3)])
    oracle = np.max(np.linalg.eigvalsh(Q))
    res = sp.power_rho(tn.signless_laplacian(hg.cycle(3)))
    assert abs(oracle - 4) < 1e-12 and abs(res.lam - 4) <= 1e-9


@pytest.mark.parametrize("seed", range(8))
def test_k2_against_matrix_oracle(seed):
    gen = hg.generate("uniform-random", 9, 2, 12, seed)
    G = gen.graph
    if not gen.connected:
        pytest.skip("disconnected draw")
    A, _, Q = graph_matrices(G.n, G.edges)
    for op, M in ((EdgeListOperator(G, "A"), A), (EdgeListOperator(G, "Q"), Q)):
        res = sp.power_rho(op)
        rho = np.max(np.abs(np.linalg.eigvalsh(M)))
        lo, hi = res.bracket
        assert lo <= hi
        assert lo - 1e-12 <= rho <= hi + 1e-12
        assert abs(res.lam - rho) <= 1e-8


def test_bracket_contains_radius_every_step():
    # stop at every iteration count and check the bracket encloses the true value
    G = hg.path(6)
    _, _, Q = graph_matrices(G.n, G.edges)
    rho = np.max(np.linalg.eigvalsh(Q))
    for it in range(1, 40):
        res = sp.power_rho(EdgeListOperator(G, "Q"), PowerIterationConfig(max_iter=it))
        lo, hi = res.bracket
        assert lo <= rho + 1e-12 and rho <= hi + 1e-12


def test_dense_and_edge_list_agree():
    for G in connected_graphs(4, 3, kind="odd-bipartite"):
        a = sp.power_rho(EdgeListOperator(G, "Q"))
        b = sp.power_rho(tn.signless_laplacian(G))
        assert abs(a.lam - b.lam) <= 2 * CFG.tol


def test_power_rho_refusals():
    with pytest.raises(sp.NotWeaklyIrreducible):
        sp.power_rho(EdgeListOperator(hg.single_edge(4, n=5), "Q"))
    with pytest.raises(sp.SpectralError):
        sp.power_rho(EdgeListOperator(hg.triad(), "L"))
    with pytest.raises(sp.SpectralError):
        sp.power_rho(tn.laplacian(hg.triad()))


def test_non_converged_flag():
    G = connected_graphs(4, 1)[0]
    res = sp.power_rho(EdgeListOperator(G, "Q"), PowerIterationConfig(tol=1e-30, max_iter=50))
    assert not res.converged and res.iterations == 50
    lo, hi = res.bracket
    assert lo <= res.lam <= hi


@pytest.mark.parametrize("G", connected_graphs(4, 3) + connected_graphs(2, 3, n=6, m=7))
def test_shift_equivariance(G):
    vals = [sp.power_rho(EdgeListOperator(G, "Q"), PowerIterationConfig(shift=s)).lam for s in (0.5, 1.0, 2.0)]
    assert max(vals) - min(vals) <= 2 * CFG.tol


def test_bipartite_adjacency_needs_shift_only_for_speed():
    # A of an even cycle is periodic; the shifted iteration still converges
    res = sp.power_rho(EdgeListOperator(hg.cycle(6), "A"))
    assert res.converged and abs(res.lam - 2) <= 1e-9


def test_monotone_under_edge_deletion():
    rng = SplitMix64(99)
    trials = 0
    for G in connected_graphs(4, 12, n=7, m=9):
        for _ in range(3):
            idx = rng.below(G.num_edges)
            Gp = G.without_edge(idx)
            if not hg.is_connected(Gp)[0]:
                continue
            big = sp.power_rho(EdgeListOperator(G, "Q")).lam
            small = sp.power_rho(EdgeListOperator(Gp, "Q")).lam
            assert small <= big + 2 * CFG.tol
            trials += 1
    assert trials >= 10


# -- residuals ------------------------------------------------------------------


def test_residual_examples():
    G = hg.single_edge(4)
    assert sp.residual(tn.signless_laplacian(G), 2.0, np.ones(4)) == 0.0
    assert sp.residual(tn.adjacency_tensor(G), 0.5, np.ones(4)) == 0.5
    # scale invariance through the normalization
    assert sp.residual(tn.adjacency_tensor(G), 0.5, 3 * np.ones(4)) == 0.5
    with pytest.raises(sp.SpectralError):
        sp.residual(tn.adjacency_tensor(G), 1.0, np.zeros(4))


def test_power_residual_within_tol():
    for G in connected_graphs(4, 4):
        res = sp.power_rho(EdgeListOperator(G, "Q"))
        assert res.pair.residual <= CFG.tol * max(1.0, res.bracket[1])
        again = sp.residual(EdgeListOperator(G, "Q"), res.lam, res.pair.x)
        assert abs(again - res.pair.residual) <= 1e-14
        assert np.max(res.pair.x) == 1.0 and np.all(res.pair.x > 0)


# -- constructions -------------------------------------------------------------------


def test_zero_q_single_edge():
    G = hg.single_edge(4)
    pair = sp.zero_q_eigenvector(G, hg.odd_bipartition(G))
    assert list(pair.x) == [-1, 1, 1, 1] and pair.lam == 0.0 and pair.residual == 0.0
    assert np.max(np.abs(tn.apply(tn.signless_laplacian(G), pair.x))) <= 1e-13


def test_zero_q_generated():
    gen = hg.generate("odd-bipartite", 6, 4, 3, 1)
    pair = sp.zero_q_eigenvector(gen.graph, hg.odd_bipartition(gen.graph))
    assert pair.residual == 0.0
    assert np.all(sp.edge_terms(gen.graph, pair.x) == 0.0)


def test_zero_q_rejects():
    with pytest.raises(sp.CertificateError):
        sp.zero_q_eigenvector(hg.triad(), hg.odd_bipartition(hg.triad()))
    bogus = hg.Bipartition(hg.CERTIFICATE, v1=frozenset({1, 2}))
    with pytest.raises(sp.CertificateError):
        sp.zero_q_eigenvector(hg.single_edge(4), bogus)
    G3 = Hypergraph(3, 3, ((1, 2, 3),))
    with pytest.raises(sp.CertificateError):
        sp.zero_q_eigenvector(G3, hg.Bipartition(hg.CERTIFICATE, v1=frozenset({1})))


def test_edge_terms_nonnegative():
    rng = np.random.default_rng(3)
    G = hg.triad()
    for _ in range(200):
        assert np.all(sp.edge_terms(G, rng.normal(size=6)) >= 0)


def test_laplacian_rho_single_edge_and_k2():
    G = hg.single_edge(4)
    res = sp.laplacian_rho_eigenpair(G, hg.odd_bipartition(G))
    assert res.lam == 2.0 and list(res.pair.x) == [-1, 1, 1, 1] and res.pair.residual == 0.0
    K2 = hg.path(2)
    res = sp.laplacian_rho_eigenpair(K2, hg.odd_bipartition(K2))
    assert abs(res.lam - 2) <= 1e-9 and list(res.pair.x) == [-1, 1]


def test_laplacian_rho_generated():
    gen = hg.generate("odd-bipartite", 8, 4, 4, 7)
    G = gen.graph
    assert gen.connected
    res = sp.laplacian_rho_eigenpair(G, hg.odd_bipartition(G))
    rho_q = sp.power_rho(EdgeListOperator(G, "Q")).lam
    assert res.lam == rho_q
    assert res.pair.residual <= 1e-8
    assert sp.residual(tn.laplacian(G), res.lam, res.pair.x) <= 1e-8


def test_product_eigenpair_single_edges():
    G = hg.single_edge(4)
    p = sp.power_rho(EdgeListOperator(G, "Q")).pair
    op = EdgeListOperator(G, "Q")
    w = sp.product_eigenpair(p, p, op, op)
    assert w.lam == 4.0 and np.all(w.x == 1.0) and len(w.x) == 16
    GG = hg.cartesian_product(G, G)
    assert sp.residual(EdgeListOperator(GG, "Q"), 4.0, w.x) == 0.0


def test_product_of_zero_eigenpairs():
    G = hg.single_edge(4)
    H = hg.generate("odd-bipartite", 6, 4, 3, 1).graph
    zg = sp.zero_q_eigenvector(G, hg.odd_bipartition(G))
    zh = sp.zero_q_eigenvector(H, hg.odd_bipartition(H))
    w = sp.product_eigenpair(zg, zh, EdgeListOperator(G, "Q"), EdgeListOperator(H, "Q"))
    assert w.lam == 0.0 and w.residual == 0.0
    assert sp.residual(EdgeListOperator(hg.cartesian_product(G, H), "Q"), 0.0, w.x) == 0.0


def test_product_eigenpair_residual_matches_materialized():
    G, H = connected_graphs(4, 2, n=5, m=3)
    p = sp.power_rho(EdgeListOperator(G, "Q")).pair
    q = sp.power_rho(EdgeListOperator(H, "Q")).pair
    w = sp.product_eigenpair(p, q, EdgeListOperator(G, "Q"), EdgeListOperator(H, "Q"))
    T = tn.kron_sum(tn.signless_laplacian(G), tn.signless_laplacian(H))
    assert abs(sp.residual(T, w.lam, w.x) - w.residual) <= 1e-12
    assert w.residual <= p.residual + q.residual + 1e-12
    with pytest.raises(tn.TensorError):
        sp.product_eigenpair(p, q, EdgeListOperator(G, "Q"), EdgeListOperator(hg.cycle(3), "Q"))


def test_eigenpair_json_shape():
    d = sp.power_rho(EdgeListOperator(hg.single_edge(4), "Q")).to_dict()
    assert set(d) == {"lambda", "bracket", "iterations", "converged", "residual", "vector"}
