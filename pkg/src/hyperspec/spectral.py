"""H-eigenpairs: Perron-Frobenius power iteration and explicit constructions."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .hypergraph import Bipartition, Hypergraph, is_connected, is_valid_certificate
from .tensor import (
    LAPLACIAN,
    SIGNLESS,
    EdgeListOperator,
    Operator,
    TensorError,
    apply,
    kron_vector,
    weakly_irreducible,
)

SIGN_EXACT_TOL = 1e-13


class SpectralError(ValueError):
    pass


class NotWeaklyIrreducible(SpectralError):
    pass


class CertificateError(SpectralError):
    pass


@dataclass(frozen=True)
class PowerIterationConfig:
    tol: float = 1e-10
    max_iter: int = 100_000
    shift: float = 1.0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if not self.shift >= 0:
            raise ValueError("shift must be nonnegative")


@dataclass(frozen=True)
class EigenPair:
    """``T x = lam x^[m-1]`` up to ``residual`` (infinity norm, ``|x|_inf = 1``)."""

    lam: float
    x: np.ndarray
    residual: float

    def to_dict(self) -> dict:
        return {"lambda": float(self.lam), "residual": float(self.residual), "vector": [float(v) for v in self.x]}


@dataclass(frozen=True)
class PowerResult:
    pair: EigenPair
    bracket: tuple
    iterations: int
    converged: bool

    @property
    def lam(self) -> float:
        return self.pair.lam

    def to_dict(self) -> dict:
        return {
            "lambda": float(self.pair.lam),
            "bracket": [float(self.bracket[0]), float(self.bracket[1])],
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "residual": float(self.pair.residual),
            "vector": [float(v) for v in self.pair.x],
        }


def _scale(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    top = np.max(np.abs(x)) if x.size else 0.0
    if top == 0:
        raise SpectralError("eigenvector must be nonzero")
    return x / top


def normalize(x) -> np.ndarray:
    """Scale to unit infinity norm with the first nonzero entry positive."""
    x = _scale(x)
    first = x[np.flatnonzero(x)[0]]
    return -x if first < 0 else x


def residual(T: Operator, lam: float, x) -> float:
    """``|T x - lam x^[m-1]|_inf`` after scaling ``x`` to unit infinity norm."""
    x = _scale(x)
    if T.order < 2:
        raise TensorError("residual needs order >= 2")
    return float(np.max(np.abs(apply(T, x) - lam * x ** (T.order - 1))))


def eigenpair(T: Operator, lam: float, x) -> EigenPair:
    """Pair with the residual computed against ``T``; keeps the sign of ``x``."""
    x = _scale(x)
    x.setflags(write=False)
    return EigenPair(float(lam), x, residual(T, lam, x))


def power_rho(T: Operator, cfg: PowerIterationConfig = PowerIterationConfig()) -> PowerResult:
    """Spectral radius of a nonnegative weakly irreducible tensor.

    Iterates ``x <- normalize((T x + shift x^[m-1])^[1/(m-1)])`` from the
    all-ones vector.  The min and max of ``(T' x)_i / x_i^(m-1)`` bracket
    ``rho(T) + shift`` at every step; iteration stops once the bracket's
    width is at most ``tol * max(1, upper)``.
    """
    if T.order < 2:
        raise TensorError("power iteration needs order >= 2")
    if not T.is_nonnegative():
        raise SpectralError("power iteration needs a nonnegative tensor")
    if not weakly_irreducible(T):
        raise NotWeaklyIrreducible("tensor is not weakly irreducible; the bracket need not close")
    m = T.order
    x = np.ones(T.dim)
    best_lo, best_hi = -np.inf, np.inf
    lo = hi = 0.0
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        xp = x ** (m - 1)
        y = apply(T, x) + cfg.shift * xp
        ratios = y / xp
        lo, hi = float(ratios.min()), float(ratios.max())
        best_lo, best_hi = max(best_lo, lo), min(best_hi, hi)
        if hi - lo <= cfg.tol * max(1.0, hi):
            converged = True
            break
        x_next = y ** (1.0 / (m - 1))
        x = x_next / x_next.max()
    if converged:
        # x^T T' x / sum x^m: a weighted mean of the ratios, so it stays inside
        # the bracket, and second-order accurate for symmetric T
        w = x**m
        lam = float(np.clip(np.dot(w, ratios) / w.sum(), lo, hi)) - cfg.shift
    else:
        lo, hi = best_lo, best_hi
        lam = 0.5 * (lo + hi) - cfg.shift
    pair = eigenpair(T, lam, normalize(x))
    return PowerResult(pair, (lo - cfg.shift, hi - cfg.shift), it, converged)


def edge_terms(G: Hypergraph, x) -> np.ndarray:
    """Per edge: ``sum_v x_v^k + k prod_v x_v``; all zero for a null vector of Q."""
    x = np.asarray(x, dtype=np.float64)
    if not G.edges:
        return np.zeros(0)
    X = x[G.edge_array()]
    return np.sum(X**G.k, axis=1) + G.k * np.prod(X, axis=1)


def _require_certificate(G: Hypergraph, cert: Bipartition):
    if G.k % 2:
        raise CertificateError(f"k={G.k} is odd; odd-bipartite certificates need even k")
    if not cert.is_certificate or not is_valid_certificate(G, cert.v1):
        raise CertificateError("not a valid odd-bipartition certificate for this hypergraph")


def zero_q_eigenvector(G: Hypergraph, cert: Bipartition) -> EigenPair:
    """Null vector of the signless Laplacian: -1 on ``v1``, +1 elsewhere."""
    _require_certificate(G, cert)
    x = cert.signs(G.n)
    terms = edge_terms(G, x)
    if terms.size and np.max(np.abs(terms)) > SIGN_EXACT_TOL:
        raise CertificateError(f"edge identity violated by {np.max(np.abs(terms))}")
    pair = eigenpair(EdgeListOperator(G, SIGNLESS), 0.0, x)
    if pair.residual > SIGN_EXACT_TOL:
        raise CertificateError(f"residual {pair.residual} for the constructed null vector")
    return pair


def laplacian_rho_eigenpair(
    G: Hypergraph, cert: Bipartition, cfg: PowerIterationConfig = PowerIterationConfig()
) -> PowerResult:
    """Eigenpair of L at rho(Q), transferred from the Perron pair of Q by the sign flip.

    The bracket and iteration count are those of the power iteration on Q.
    """
    _require_certificate(G, cert)
    if not is_connected(G)[0]:
        raise NotWeaklyIrreducible("hypergraph is not connected")
    res = power_rho(EdgeListOperator(G, SIGNLESS), cfg)
    y = cert.signs(G.n) * res.pair.x
    pair = eigenpair(EdgeListOperator(G, LAPLACIAN), res.pair.lam, y)
    return replace(res, pair=pair)


def product_eigenpair(p: EigenPair, q: EigenPair, A: Operator, B: Operator) -> EigenPair:
    """``(lam + mu, u (x) v)`` as an eigenpair of ``A (x) I + I (x) B``.

    The residual is evaluated through the factors,
    ``(A u) (x) v^[k-1] + u^[k-1] (x) (B v)``, so the product is never built.
    """
    if A.order != B.order:
        raise TensorError(f"order mismatch: {A.order} vs {B.order}")
    k = A.order
    u, v = _scale(p.x), _scale(q.x)
    if u.shape != (A.dim,) or v.shape != (B.dim,):
        raise TensorError("eigenvector length does not match its operator")
    lam = p.lam + q.lam
    w = kron_vector(u, v)
    Tw = kron_vector(apply(A, u), v ** (k - 1)) + kron_vector(u ** (k - 1), apply(B, v))
    res = float(np.max(np.abs(Tw - lam * w ** (k - 1))))
    w.setflags(write=False)
    return EigenPair(float(lam), w, res)
