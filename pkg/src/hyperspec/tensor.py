"""Dense order-m tensors and the hypergraph tensors built on them.

Indices are 0-based internally; dumps and anything user-facing use 1-based
labels.  All products flatten pair indices ``(i, j)`` lexicographically,
the same order :func:`hyperspec.hypergraph.cartesian_product` uses.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .hypergraph import Hypergraph, degrees, is_connected

DEFAULT_ENTRY_CAP = 10**8
MAX_K = 12
EXACT_TOL = 1e-12

ADJACENCY = "adjacency"
DEGREE = "degree"
LAPLACIAN = "laplacian"
SIGNLESS = "signless-laplacian"
_MODE_ALIASES = {
    "A": ADJACENCY, "D": DEGREE, "L": LAPLACIAN, "Q": SIGNLESS,
    ADJACENCY: ADJACENCY, DEGREE: DEGREE, LAPLACIAN: LAPLACIAN, SIGNLESS: SIGNLESS,
}


class TensorError(ValueError):
    pass


class CapExceeded(TensorError):
    pass


def entry_cap() -> int:
    """Dense-entry cap, overridable through ``HYPERSPEC_ENTRY_CAP``."""
    raw = os.environ.get("HYPERSPEC_ENTRY_CAP")
    if raw:
        try:
            cap = int(float(raw))
        except ValueError:
            raise TensorError(f"HYPERSPEC_ENTRY_CAP is not a number: {raw!r}") from None
        if cap < 1:
            raise TensorError("HYPERSPEC_ENTRY_CAP must be positive")
        return cap
    return DEFAULT_ENTRY_CAP


def _check_cap(dim: int, order: int, cap: Optional[int]):
    cap = entry_cap() if cap is None else cap
    if dim**order > cap:
        raise CapExceeded(f"{dim}^{order} = {dim**order} entries exceeds the cap of {cap}")


class DenseTensor:
    """An order-m, dimension-n real tensor backed by a read-only ndarray."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim < 1:
            raise TensorError("a tensor needs order >= 1")
        if len(set(arr.shape)) != 1:
            raise TensorError(f"all axes must share one dimension, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise TensorError("dimension must be >= 1")
        if not np.all(np.isfinite(arr)):
            raise TensorError("tensor entries must be finite")
        arr.setflags(write=False)
        self.data = arr

    @property
    def order(self) -> int:
        return self.data.ndim

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Row-major flattening, first index slowest."""
        return self.data.reshape(-1)

    def __add__(self, other):
        return DenseTensor(self.data + other.data)

    def __sub__(self, other):
        return DenseTensor(self.data - other.data)

    def __neg__(self):
        return DenseTensor(-self.data)

    def __mul__(self, scalar):
        return DenseTensor(self.data * scalar)

    __rmul__ = __mul__

    def __repr__(self):
        return f"DenseTensor(order={self.order}, dim={self.dim})"

    def max_abs_diff(self, other: "DenseTensor") -> float:
        if self.data.shape != other.data.shape:
            raise TensorError(f"shape mismatch {self.data.shape} vs {other.data.shape}")
        if self.data.size == 0:
            return 0.0
        return float(np.max(np.abs(self.data - other.data)))

    def allclose(self, other: "DenseTensor", tol: float = EXACT_TOL) -> bool:
        return self.max_abs_diff(other) <= tol

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.data >= 0))

    def materialize(self) -> "DenseTensor":
        return self


def unit_tensor(n: int, order: int) -> DenseTensor:
    """1 at every ``(i, ..., i)``, 0 elsewhere, so that ``I x = x^[order-1]``."""
    data = np.zeros((n,) * order)
    idx = np.arange(n)
    data[(idx,) * order] = 1.0
    return DenseTensor(data)


def diagonal_tensor(values, order: int) -> DenseTensor:
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    data = np.zeros((n,) * order)
    idx = np.arange(n)
    data[(idx,) * order] = values
    return DenseTensor(data)


# -- hypergraph tensors -------------------------------------------------------


def _edge_weight(k: int) -> float:
    if k > MAX_K:
        raise TensorError(f"uniformity {k} exceeds the supported maximum {MAX_K}")
    return 1.0 / math.factorial(k - 1)


def adjacency_tensor(G: Hypergraph, cap: Optional[int] = None) -> DenseTensor:
    w = _edge_weight(G.k)
    _check_cap(G.n, G.k, cap)
    data = np.zeros((G.n,) * G.k)
    for e in G.edge_array():
        perms = np.array(list(permutations(e)))
        data[tuple(perms.T)] = w
    return DenseTensor(data)


def degree_tensor(G: Hypergraph, cap: Optional[int] = None) -> DenseTensor:
    _edge_weight(G.k)
    _check_cap(G.n, G.k, cap)
    return diagonal_tensor(degrees(G), G.k)


def laplacian(G: Hypergraph, cap: Optional[int] = None) -> DenseTensor:
    return degree_tensor(G, cap) - adjacency_tensor(G, cap)


def signless_laplacian(G: Hypergraph, cap: Optional[int] = None) -> DenseTensor:
    return degree_tensor(G, cap) + adjacency_tensor(G, cap)


def hypergraph_tensor(G: Hypergraph, which: str, cap: Optional[int] = None) -> DenseTensor:
    mode = _MODE_ALIASES.get(which)
    if mode is None:
        raise TensorError(f"unknown tensor {which!r}")
    return {
        ADJACENCY: adjacency_tensor,
        DEGREE: degree_tensor,
        LAPLACIAN: laplacian,
        SIGNLESS: signless_laplacian,
    }[mode](G, cap)


@dataclass(frozen=True)
class EdgeListOperator:
    """``x -> T x`` for a hypergraph tensor, computed edge by edge.

    Never materializes the ``n^k`` entries; an edge contributes the product
    of its other k-1 coordinates to each of its vertices.
    """

    graph: Hypergraph
    mode: str = ADJACENCY

    def __post_init__(self):
        mode = _MODE_ALIASES.get(self.mode)
        if mode is None:
            raise TensorError(f"unknown operator mode {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        _edge_weight(self.graph.k)

    @property
    def order(self) -> int:
        return self.graph.k

    @property
    def dim(self) -> int:
        return self.graph.n

    def is_nonnegative(self) -> bool:
        return self.mode != LAPLACIAN or not self.graph.edges

    def materialize(self, cap: Optional[int] = None) -> DenseTensor:
        return hypergraph_tensor(self.graph, self.mode, cap)

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        G = self.graph
        if x.shape != (G.n,):
            raise TensorError(f"vector of length {x.shape} does not match dimension {G.n}")
        out = np.zeros(G.n)
        if self.mode != DEGREE and G.edges:
            E = G.edge_array()
            X = x[E]
            # products of all-but-one coordinate via prefix/suffix products (no division)
            pre = np.ones_like(X)
            suf = np.ones_like(X)
            for p in range(1, G.k):
                pre[:, p] = pre[:, p - 1] * X[:, p - 1]
                suf[:, G.k - 1 - p] = suf[:, G.k - p] * X[:, G.k - p]
            others = pre * suf
            np.add.at(out, E.ravel(), others.ravel())
        if self.mode == ADJACENCY:
            return out
        diag = degrees(G) * x ** (G.k - 1)
        if self.mode == DEGREE:
            return diag
        if self.mode == LAPLACIAN:
            return diag - out
        return diag + out


Operator = Union[DenseTensor, EdgeListOperator]


# -- products -------------------------------------------------------------------


def apply(T: Operator, x) -> np.ndarray:
    """``(T x)_i = sum t[i, i2..im] x[i2] ... x[im]``."""
    if isinstance(T, EdgeListOperator):
        return T.apply(x)
    x = np.asarray(x, dtype=np.float64)
    if T.order < 2:
        raise TensorError("apply needs order >= 2")
    if x.shape != (T.dim,):
        raise TensorError(f"vector of length {x.shape} does not match dimension {T.dim}")
    y = T.data
    for _ in range(T.order - 1):
        y = y @ x
    return y


def hadamard_power(x, r: float) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if r <= 0:
        raise ValueError("exponent must be positive")
    if float(r).is_integer():
        return x ** int(r)
    if np.any(x < 0):
        raise ValueError("negative base with a fractional exponent")
    return x**r


def general_product(A: DenseTensor, B, cap: Optional[int] = None) -> DenseTensor:
    """``c[i, a1..a_{m-1}] = sum a[i, i2..im] b[i2, a1] ... b[im, a_{m-1}]``.

    ``A`` has order m >= 2 and ``B`` order k >= 1; the result has order
    ``(m-1)(k-1)+1``.  Each ``a_j`` is a (k-1)-multi-index, flattened
    row-major.  A vector ``B`` gives ``apply(A, B)`` as an order-1 tensor.
    """
    if not isinstance(B, DenseTensor):
        B = DenseTensor(B)
    if A.order < 2:
        raise TensorError("left factor needs order >= 2")
    if A.dim != B.dim:
        raise TensorError(f"dimension mismatch: {A.dim} vs {B.dim}")
    m, k, n = A.order, B.order, A.dim
    out_order = (m - 1) * (k - 1) + 1
    _check_cap(n, out_order, cap)
    B2 = B.data.reshape(n, -1)
    C = A.data
    for _ in range(m - 1):
        C = np.tensordot(C, B2, axes=([1], [0]))
    return DenseTensor(C.reshape((n,) * out_order))


def matrix_sandwich(P, A: DenseTensor, Q) -> DenseTensor:
    """``b[i1..im] = sum a[j1..jm] p[i1,j1] q[j2,i2] ... q[jm,im]``."""
    P = np.asarray(P, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    n = A.dim
    if P.shape != (n, n) or Q.shape != (n, n):
        raise TensorError(f"matrices must be {n}x{n}")
    data = np.tensordot(P, A.data, axes=([1], [0]))
    for axis in range(1, A.order):
        data = np.moveaxis(np.tensordot(data, Q, axes=([axis], [0])), -1, axis)
    return DenseTensor(data)


def diag_similarity(A: DenseTensor, d) -> DenseTensor:
    """``D^-(m-1) A D`` for the diagonal matrix ``D = diag(d)``."""
    d = np.asarray(d, dtype=np.float64)
    if d.shape != (A.dim,):
        raise TensorError(f"diagonal of length {d.shape} does not match dimension {A.dim}")
    if np.any(d == 0):
        raise TensorError("diagonal similarity needs a nonsingular diagonal")
    m = A.order
    data = A.data * (1.0 / d ** (m - 1)).reshape((-1,) + (1,) * (m - 1))
    for axis in range(1, m):
        shape = [1] * m
        shape[axis] = -1
        data = data * d.reshape(shape)
    return DenseTensor(data)


def direct_product(A, B, cap: Optional[int] = None) -> DenseTensor:
    """``(A (x) B)[(i1,j1)..(ik,jk)] = a[i1..ik] b[j1..jk]``."""
    if not isinstance(A, DenseTensor):
        A = DenseTensor(A)
    if not isinstance(B, DenseTensor):
        B = DenseTensor(B)
    if A.order != B.order:
        raise TensorError(f"order mismatch: {A.order} vs {B.order}")
    k = A.order
    _check_cap(A.dim * B.dim, k, cap)
    outer = np.multiply.outer(A.data, B.data)
    axes = [ax for p in range(k) for ax in (p, k + p)]
    return DenseTensor(outer.transpose(axes).reshape((A.dim * B.dim,) * k))


def kron_vector(u, v) -> np.ndarray:
    """``(u (x) v)[(i,j)] = u[i] v[j]`` in lexicographic order."""
    return np.outer(np.asarray(u, dtype=np.float64), np.asarray(v, dtype=np.float64)).reshape(-1)


def kron_sum(A: DenseTensor, B: DenseTensor, cap: Optional[int] = None) -> DenseTensor:
    """``A (x) I_m + I_n (x) B``."""
    if A.order != B.order:
        raise TensorError(f"order mismatch: {A.order} vs {B.order}")
    k = A.order
    return direct_product(A, unit_tensor(B.dim, k), cap) + direct_product(unit_tensor(A.dim, k), B, cap)


def weakly_irreducible(T: Operator) -> bool:
    """Strong connectivity of the representation digraph.

    Arc ``i -> j`` whenever some nonzero ``t[i, i2..im]`` has ``j`` among
    ``i2..im``.
    """
    if isinstance(T, EdgeListOperator):
        if not T.is_nonnegative():
            raise TensorError("weak irreducibility is defined for nonnegative tensors")
        if T.graph.n == 1:
            return True
        if T.mode == DEGREE:
            return False
        return is_connected(T.graph)[0]
    if T.order < 2:
        raise TensorError("weak irreducibility needs order >= 2")
    if not T.is_nonnegative():
        raise TensorError("weak irreducibility is defined for nonnegative tensors")
    n, m = T.dim, T.order
    if n == 1:
        return True
    mask = T.data > 0
    arcs = np.zeros((n, n), dtype=bool)
    for p in range(1, m):
        other = tuple(ax for ax in range(1, m) if ax != p)
        arcs |= mask.any(axis=other) if other else mask
    arcs[np.arange(n), np.arange(n)] = False
    count, _ = connected_components(csr_matrix(arcs), directed=True, connection="strong")
    return count == 1


# -- dump format ----------------------------------------------------------------


def dump_tensor(T: DenseTensor) -> str:
    lines = [f"t {T.order} {T.dim}"]
    nz = np.argwhere(T.data != 0)
    for idx in nz:
        value = float(T.data[tuple(idx)])
        lines.append(" ".join(str(i + 1) for i in idx) + f" {value!r}")
    return "\n".join(lines) + "\n"


def load_tensor(text: str) -> DenseTensor:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "t" or len(lines[0]) != 3:
        raise TensorError("missing 't <order> <dim>' header")
    order, dim = int(lines[0][1]), int(lines[0][2])
    data = np.zeros((dim,) * order)
    for parts in lines[1:]:
        if len(parts) != order + 1:
            raise TensorError(f"malformed entry line {' '.join(parts)!r}")
        idx = tuple(int(p) - 1 for p in parts[:order])
        data[idx] = float(parts[order])
    return DenseTensor(data)
