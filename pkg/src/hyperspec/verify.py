"""Executable checks of the odd-bipartite spectral characterizations.

Each ``check_*`` function returns a list of :class:`Check` records; nothing
here raises for a failed claim.  ``status`` says how strong a verdict is:

- ``checked``: the claim itself was evaluated on the instance;
- ``consequence-checked``: only a computable consequence was evaluated
  (spectral-radius level, or full matrix spectra when k = 2);
- ``bounded``: an exhaustive part was skipped because n is too large;
- ``not-checked``: no finite procedure is attempted (passes vacuously);
- ``error``: the check could not run; counts as a failure.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Optional

import numpy as np

from . import hypergraph as hg
from .hypergraph import Hypergraph
from .rng import SplitMix64
from .spectral import (
    PowerIterationConfig,
    SpectralError,
    laplacian_rho_eigenpair,
    edge_terms,
    power_rho,
    product_eigenpair,
    residual,
    zero_q_eigenvector,
)
from .tensor import (
    ADJACENCY,
    SIGNLESS,
    DenseTensor,
    EdgeListOperator,
    TensorError,
    adjacency_tensor,
    degree_tensor,
    diag_similarity,
    direct_product,
    general_product,
    kron_sum,
    laplacian,
    signless_laplacian,
)

CHECKED = "checked"
CONSEQUENCE = "consequence-checked"
BOUNDED = "bounded"
NOT_CHECKED = "not-checked"
ERROR = "error"


@dataclass
class Tolerances:
    exact: float = 1e-13
    eig: float = 1e-8
    mixed: float = 1e-12
    exhaustive_limit: int = 20


@dataclass
class Check:
    name: str
    claim: str
    passed: bool
    status: str
    tolerance: float
    evidence: dict = field(default_factory=dict)
    instance: str = ""

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "name": self.name,
            "claim": self.claim,
            "pass": bool(self.passed),
            "status": self.status,
            "tolerance": self.tolerance,
            "evidence": {k: _jsonable(v) for k, v in self.evidence.items()},
        }


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


def _graph_precondition(G: Hypergraph):
    if not G.edges:
        raise ValueError("hypergraph has no edges")
    if not hg.is_connected(G)[0]:
        raise ValueError("hypergraph is not connected")


# -- sign similarity ------------------------------------------------------------


def negating_sign_diagonals(G: Hypergraph, limit: int = 20, chunk: int = 1 << 14) -> list:
    """Every sign vector ``p != -1`` with ``A = -P^-(k-1) A P``, by enumeration.

    Only entries on edge orderings can be nonzero, and there the entry
    condition reads ``p[i1]^-(k-1) * prod_{j != i1} p[j] = -1`` for every
    choice of the leading index ``i1`` within the edge.
    """
    n, k = G.n, G.k
    if n > limit:
        raise ValueError(f"n={n} exceeds the exhaustive limit {limit}")
    E = G.edge_array()
    found = []
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        S = np.where((codes[:, None] >> np.arange(n)) & 1, -1.0, 1.0)
        ok = np.ones(len(codes), dtype=bool)
        for e in E:
            Se = S[:, e]
            for lead in range(k):
                rest = np.prod(np.delete(Se, lead, axis=1), axis=1)
                ok &= Se[:, lead] ** (-(k - 1)) * rest == -1.0
        ok &= codes != (1 << n) - 1
        found.extend(S[ok])
    return found


def check_sign_similarity(G: Hypergraph, tol: Tolerances = Tolerances(), cap: Optional[int] = None) -> list:
    """L = P^-(k-1) Q P  <=>  A = -P^-(k-1) A P  <=>  k even and odd-bipartite."""
    _graph_precondition(G)
    cert = hg.odd_bipartition(G)
    out = []
    feasible = G.n <= tol.exhaustive_limit
    if cert.is_certificate:
        p = cert.signs(G.n)
        A, Q, L = adjacency_tensor(G, cap), signless_laplacian(G, cap), laplacian(G, cap)
        dev_l = L.max_abs_diff(diag_similarity(Q, p))
        dev_a = A.max_abs_diff(-diag_similarity(A, p))
        dev_d = degree_tensor(G, cap).max_abs_diff(diag_similarity(degree_tensor(G, cap), p))
        ev = {"v1": sorted(cert.v1), "P_is_minus_identity": bool(np.all(p == -1))}
        out.append(Check("sign-similarity/laplacian", "L = P^-(k-1) Q P", dev_l <= tol.exact and not ev["P_is_minus_identity"],
                         CHECKED, tol.exact, {**ev, "max_deviation": dev_l, "degree_fixed_deviation": dev_d}))
        out.append(Check("sign-similarity/adjacency", "A = -P^-(k-1) A P", dev_a <= tol.exact,
                         CHECKED, tol.exact, {**ev, "max_deviation": dev_a}))
        out.append(Check("sign-similarity/k-even", "k is even", G.k % 2 == 0, CHECKED, 0.0, {"k": G.k}))
        if feasible:
            count = len(negating_sign_diagonals(G, tol.exhaustive_limit))
            out.append(Check("sign-similarity/exhaustive", "some sign diagonal negates A", count > 0,
                             CHECKED, 0.0, {"sign_diagonals_found": count, "searched": 2**G.n}))
    else:
        ev = {"witness": list(cert.witness), "reason": cert.reason,
              "witness_valid": bool(hg.is_valid_witness(G, cert.witness)) if cert.witness else None}
        if feasible:
            count = len(negating_sign_diagonals(G, tol.exhaustive_limit))
            ok = count == 0 and (cert.reason is not None or ev["witness_valid"])
            out.append(Check("sign-similarity/exhaustive", "no sign diagonal negates A", ok, CHECKED, 0.0,
                             {**ev, "sign_diagonals_found": count, "searched": 2**G.n}))
        else:
            out.append(Check("sign-similarity/exhaustive", "no sign diagonal negates A",
                             bool(cert.reason is not None or ev["witness_valid"]), BOUNDED, 0.0, ev))
    return out


# -- spectra of L and Q -------------------------------------------------------


def check_spectral_equality(G: Hypergraph, cfg: PowerIterationConfig = PowerIterationConfig(),
                            tol: Tolerances = Tolerances(), cap: Optional[int] = None) -> list:
    """Consequences of: Hspec(L) = Hspec(Q) iff odd-bipartite; rho(L) = rho(Q) iff Spec(L) = Spec(Q)."""
    _graph_precondition(G)
    cert = hg.odd_bipartition(G)
    out = []
    if cert.is_certificate:
        res = laplacian_rho_eigenpair(G, cert, cfg)
        out.append(Check("spectral-equality/rho-transfer", "rho(Q) is an H-eigenvalue of L via y = P x",
                         res.converged and res.pair.residual <= tol.eig, CONSEQUENCE, tol.eig,
                         {"rho_Q": res.lam, "bracket": list(res.bracket), "iterations": res.iterations,
                          "converged": res.converged, "residual_L": res.pair.residual}))
    elif G.k != 2:
        out.append(Check("spectral-equality/rho-transfer", "Hspec(L) != Hspec(Q) when not odd-bipartite",
                         True, NOT_CHECKED, 0.0, {"reason": cert.reason or "no certificate"}))
    if G.k == 2:
        lam_l = np.linalg.eigvalsh(laplacian(G, cap).data)
        lam_q = np.linalg.eigvalsh(signless_laplacian(G, cap).data)
        spec_dev = float(np.max(np.abs(np.sort(lam_l) - np.sort(lam_q))))
        rho_l, rho_q = float(np.max(np.abs(lam_l))), float(np.max(np.abs(lam_q)))
        same_spec = spec_dev <= tol.eig
        same_rho = abs(rho_l - rho_q) <= tol.eig
        bip = cert.is_certificate
        ev = {"bipartite": bip, "spec_L": np.sort(lam_l), "spec_Q": np.sort(lam_q),
              "spectrum_deviation": spec_dev, "rho_L": rho_l, "rho_Q": rho_q}
        out.append(Check("spectral-equality/matrix-spectra", "Spec(L) = Spec(Q) iff bipartite (k = 2)",
                         same_spec == bip, CHECKED, tol.eig, ev))
        out.append(Check("spectral-equality/matrix-rho", "rho(L) = rho(Q) iff Spec(L) = Spec(Q) (k = 2)",
                         same_rho == same_spec, CHECKED, tol.eig,
                         {"rho_L": rho_l, "rho_Q": rho_q, "same_spectrum": same_spec}))
    return out


# -- zero eigenvalue of Q ---------------------------------------------------------


def check_zero_eigenvalue(G: Hypergraph, tol: Tolerances = Tolerances(), cap: Optional[int] = None) -> list:
    """0 is an H-eigenvalue of Q iff k is even and G is odd-bipartite."""
    _graph_precondition(G)
    cert = hg.odd_bipartition(G)
    if cert.is_certificate:
        pair = zero_q_eigenvector(G, cert)
        terms = edge_terms(G, pair.x)
        dense_res = residual(signless_laplacian(G, cap), 0.0, pair.x)
        worst = float(np.max(np.abs(terms))) if terms.size else 0.0
        ok = pair.residual <= tol.exact and worst <= tol.exact and dense_res <= tol.exact
        return [Check("zero-eigenvalue/forward", "Q x = 0 for x = -1 on V1, +1 elsewhere", ok, CHECKED, tol.exact,
                      {"residual": pair.residual, "dense_residual": dense_res, "max_edge_term": worst,
                       "vector": pair.x})]
    if G.k == 2:
        lam_min = float(np.min(np.linalg.eigvalsh(signless_laplacian(G, cap).data)))
        return [Check("zero-eigenvalue/reverse", "min eig(Q) > 0 for a non-bipartite graph", lam_min > tol.eig,
                      CHECKED, tol.eig, {"min_eigenvalue_Q": lam_min})]
    return [Check("zero-eigenvalue/reverse", "0 is not an H-eigenvalue of Q", True, NOT_CHECKED, 0.0,
                  {"reason": cert.reason or "no certificate; no finite search attempted"})]


# -- Cartesian products -----------------------------------------------------------


def _random_tensor(rng: np.random.Generator, order: int, dim: int) -> DenseTensor:
    return DenseTensor(rng.uniform(-1.0, 1.0, size=(dim,) * order))


def mixed_product_deviation(rng: np.random.Generator, max_dim: int = 3, max_order: int = 3) -> dict:
    """One random trial of (A (x) B)(C (x) D) = (AC) (x) (BD)."""
    k = int(rng.integers(2, max_order + 1))
    r = int(rng.integers(1, max_order + 1))
    n = int(rng.integers(1, max_dim + 1))
    m = int(rng.integers(1, max_dim + 1))
    A, B = _random_tensor(rng, k, n), _random_tensor(rng, k, m)
    C, D = _random_tensor(rng, r, n), _random_tensor(rng, r, m)
    lhs = general_product(direct_product(A, B), direct_product(C, D))
    rhs = direct_product(general_product(A, C), general_product(B, D))
    return {"k": k, "r": r, "n": n, "m": m, "deviation": lhs.max_abs_diff(rhs)}


def check_mixed_product(seed: int, trials: int, tol: Tolerances = Tolerances()) -> list:
    rng = np.random.default_rng(seed)
    devs = [mixed_product_deviation(rng)["deviation"] for _ in range(trials)]
    worst = max(devs) if devs else 0.0
    return [Check("cartesian/mixed-product", "(A (x) B)(C (x) D) = (AC) (x) (BD)", worst <= tol.mixed,
                  CHECKED, tol.mixed, {"trials": trials, "seed": seed, "max_deviation": worst})]


def check_cartesian(G: Hypergraph, H: Hypergraph, cfg: PowerIterationConfig = PowerIterationConfig(),
                    tol: Tolerances = Tolerances(), cap: Optional[int] = None, mixed_seed: Optional[int] = None,
                    mixed_trials: int = 0) -> list:
    """Tensor identities, eigenpair composition and radius additivity for G x H."""
    if G.k != H.k:
        raise hg.HypergraphError(f"uniformity mismatch: {G.k} vs {H.k}")
    GH = hg.cartesian_product(G, H)
    out = []
    builders = {"A": adjacency_tensor, "D": degree_tensor, "L": laplacian, "Q": signless_laplacian}
    for name, build in builders.items():
        dev = build(GH, cap).max_abs_diff(kron_sum(build(G, cap), build(H, cap), cap))
        out.append(Check(f"cartesian/identity-{name}", f"{name}(G x H) = {name}(G) (x) I + I (x) {name}(H)",
                         dev <= tol.exact, CHECKED, tol.exact, {"max_deviation": dev, "n": G.n, "m": H.n}))
    if mixed_trials:
        out.extend(check_mixed_product(mixed_seed or 0, mixed_trials, tol))

    g_conn, h_conn = hg.is_connected(G)[0], hg.is_connected(H)[0]
    additivity_tol = 3 * cfg.tol
    if not (g_conn and h_conn):
        out.append(Check("cartesian/additivity", "rho(G x H) = rho(G) + rho(H)", True, NOT_CHECKED, additivity_tol,
                         {"reason": "a factor is disconnected; power iteration needs weak irreducibility"}))
        return out

    radii = {}
    for mode, label in ((ADJACENCY, "A"), (SIGNLESS, "Q")):
        ops = [EdgeListOperator(X, mode) for X in (G, H, GH)]
        try:
            rg, rh, rgh = (power_rho(op, cfg) for op in ops)
        except SpectralError as exc:
            out.append(Check(f"cartesian/additivity-{label}", f"rho({label}(G x H)) = rho({label}(G)) + rho({label}(H))",
                             False, ERROR, additivity_tol, {"error": str(exc)}))
            continue
        radii[label] = (rg, rh, rgh)
        gap = abs(rgh.lam - rg.lam - rh.lam)
        conv = rg.converged and rh.converged and rgh.converged
        out.append(Check(f"cartesian/additivity-{label}", f"rho({label}(G x H)) = rho({label}(G)) + rho({label}(H))",
                         conv and gap <= additivity_tol, CHECKED, additivity_tol,
                         {"rho_G": rg.lam, "rho_H": rh.lam, "rho_GxH": rgh.lam, "gap": gap, "converged": conv,
                          "iterations": [rg.iterations, rh.iterations, rgh.iterations]}))
    if "Q" in radii:
        rg, rh, rgh = radii["Q"]
        qg, qh = EdgeListOperator(G, SIGNLESS), EdgeListOperator(H, SIGNLESS)
        pair = product_eigenpair(rg.pair, rh.pair, qg, qh)
        direct = residual(EdgeListOperator(GH, SIGNLESS), pair.lam, pair.x)
        conv = rg.converged and rh.converged
        out.append(Check("cartesian/eigenpair-composition", "(A (x) I + I (x) B)(u (x) v) = (lam + mu)(u (x) v)^[k-1]",
                         conv and max(pair.residual, direct) <= tol.eig, CHECKED, tol.eig,
                         {"lambda": pair.lam, "residual_via_factors": pair.residual,
                          "residual_on_product": direct, "converged": conv}))

    cg, ch = hg.odd_bipartition(G), hg.odd_bipartition(H)
    if cg.is_certificate and ch.is_certificate:
        v1 = hg.product_certificate(G, cg.v1, H, ch.v1)
        direct_ok = hg.is_valid_certificate(GH, v1)
        solved = hg.odd_bipartition(GH)
        out.append(Check("cartesian/odd-bipartite-product", "G x H is odd-bipartite", direct_ok and solved.is_certificate,
                         CHECKED, 0.0, {"constructed_valid": direct_ok, "solver_kind": solved.kind,
                                        "v1_size": len(v1)}))
        try:
            lg, lh = laplacian_rho_eigenpair(G, cg, cfg), laplacian_rho_eigenpair(H, ch, cfg)
            lgh = laplacian_rho_eigenpair(GH, hg.Bipartition(hg.CERTIFICATE, v1=v1), cfg)
        except SpectralError as exc:
            out.append(Check("cartesian/additivity-L", "rho(L(G x H)) = rho(L(G)) + rho(L(H))", False, ERROR,
                             additivity_tol, {"error": str(exc)}))
        else:
            gap = abs(lgh.lam - lg.lam - lh.lam)
            worst_res = max(lg.pair.residual, lh.pair.residual, lgh.pair.residual)
            conv = lg.converged and lh.converged and lgh.converged
            out.append(Check("cartesian/additivity-L", "rho(L(G x H)) = rho(L(G)) + rho(L(H))",
                             conv and gap <= additivity_tol and worst_res <= tol.eig, CHECKED, additivity_tol,
                             {"rho_G": lg.lam, "rho_H": lh.lam, "rho_GxH": lgh.lam, "gap": gap,
                              "max_residual_L": worst_res, "converged": conv}))
    return out


# -- suite ------------------------------------------------------------------------


@dataclass
class SuiteConfig:
    seeds: list = field(default_factory=lambda: list(range(1, 21)))
    ks: list = field(default_factory=lambda: [2, 4])
    n_min: int = 3
    n_max: int = 10
    tol: float = 1e-10
    max_iter: int = 100_000
    shift: float = 1.0
    exact_tol: float = 1e-13
    eig_tol: float = 1e-8
    exhaustive_limit: int = 20
    named_instances: bool = True
    product_pairs: int = 5
    product_max_vertices: int = 30
    mixed_trials: int = 20
    entry_cap: Optional[int] = None

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.power()  # validates tol / max_iter / shift
        if cfg.n_min < 1 or cfg.n_max < cfg.n_min:
            raise ValueError("need 1 <= n_min <= n_max")
        return cfg

    def power(self) -> PowerIterationConfig:
        return PowerIterationConfig(tol=self.tol, max_iter=self.max_iter, shift=self.shift)

    def tolerances(self) -> Tolerances:
        return Tolerances(exact=self.exact_tol, eig=self.eig_tol, exhaustive_limit=self.exhaustive_limit)


@dataclass
class Report:
    config: dict
    instances: list
    checks: list

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "instances": self.instances,
            "checks": [c.to_dict() for c in self.checks],
            "overall": self.overall,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance", "name", "status", "pass", "tolerance", "claim", "evidence"])
        for c in self.checks:
            d = c.to_dict()
            w.writerow([d["instance"], d["name"], d["status"], d["pass"], d["tolerance"], d["claim"],
                        json.dumps(d["evidence"], sort_keys=True)])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"{flag} [{c.status}] {c.instance} {c.name}: {c.claim}")
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'} ({len(self.checks)} checks)")
        return "\n".join(lines) + "\n"


def named_instances() -> dict:
    return {
        "single-edge-k4": hg.single_edge(4),
        "triad-k4": hg.triad(),
        "triangle": hg.cycle(3),
        "path-4": hg.path(4),
        "k2": hg.path(2),
    }


def _random_instance(seed: int, k: int, n_min: int, n_max: int, n_cap: Optional[int] = None):
    """Seeded generator parameters, then the instance itself."""
    rng = SplitMix64(seed * 7919 + k)
    hi = n_max if n_cap is None else min(n_max, n_cap)
    n = rng.randint(max(k, n_min), max(k, n_min, hi))
    odd = k % 2 == 0 and seed % 2 == 0
    m_min = -(-(n - 1) // (k - 1))
    m_max = comb(n, k)
    if odd:
        m_max = min(m_max, max(hg.odd_subset_count(n, k, s) for s in range(1, n)))
    m_min = min(m_min, m_max)
    m = rng.randint(m_min, min(m_max, m_min + n))
    kind = "odd-bipartite" if odd else "uniform-random"
    return hg.generate(kind, n, k, m, seed)


def _instance_checks(G: Hypergraph, cfg: SuiteConfig) -> list:
    tol, power = cfg.tolerances(), cfg.power()
    if not G.edges or not hg.is_connected(G)[0]:
        return [Check("precondition", "connected with at least one edge", True, NOT_CHECKED, 0.0,
                      {"reason": "disconnected or edgeless; connected-only checks skipped"})]
    out = []
    for fn, args in ((check_sign_similarity, (G, tol, cfg.entry_cap)),
                     (check_spectral_equality, (G, power, tol, cfg.entry_cap)),
                     (check_zero_eigenvalue, (G, tol, cfg.entry_cap))):
        try:
            out.extend(fn(*args))
        except (ValueError, SpectralError, TensorError) as exc:
            out.append(Check(fn.__name__.replace("check_", "").replace("_", "-"), "check ran", False, ERROR, 0.0,
                             {"error": f"{type(exc).__name__}: {exc}"}))
    return out


def run_suite(cfg: SuiteConfig = SuiteConfig()) -> Report:
    """Generate instances from ``cfg``, run every check, aggregate.

    Deterministic for a fixed configuration.
    """
    instances, checks = [], []

    def describe(name, G, **extra):
        instances.append({"id": name, "hash": G.digest(), "n": G.n, "k": G.k, "m": G.num_edges,
                          "connected": hg.is_connected(G)[0], **extra})

    def tag(name, items):
        for c in items:
            c.instance = name
        checks.extend(items)

    if cfg.named_instances:
        for name, G in named_instances().items():
            describe(name, G)
            tag(name, _instance_checks(G, cfg))

    for k in cfg.ks:
        for seed in cfg.seeds:
            name = f"gen-k{k}-s{seed}"
            try:
                gen = _random_instance(seed, k, cfg.n_min, cfg.n_max)
            except hg.GenerationError as exc:
                tag(name, [Check("generate", "instance generated", False, ERROR, 0.0, {"error": str(exc)})])
                continue
            describe(name, gen.graph, seed=seed, kind=gen.kind)
            tag(name, _instance_checks(gen.graph, cfg))

    pairs = []
    if cfg.named_instances:
        pairs += [("single-edge-k4", hg.single_edge(4), "single-edge-k4", hg.single_edge(4)),
                  ("k2", hg.path(2), "k2", hg.path(2)),
                  ("triangle", hg.cycle(3), "k2", hg.path(2))]
    for k in cfg.ks:
        for idx, seed in enumerate(cfg.seeds[: cfg.product_pairs]):
            cap_n = max(k, int(math.isqrt(cfg.product_max_vertices)))
            try:
                g = _random_instance(1000 + seed, k, k, cfg.n_max, cap_n)
                h_cap = max(k, cfg.product_max_vertices // g.graph.n)
                h = _random_instance(2000 + seed, k, k, cfg.n_max, h_cap)
            except hg.GenerationError as exc:
                tag(f"product-k{k}-s{seed}", [Check("generate", "factors generated", False, ERROR, 0.0,
                                                    {"error": str(exc)})])
                continue
            for label, gen in (("G", g), ("H", h)):
                describe(f"factor{label}-k{k}-s{seed}", gen.graph, seed=(1000 if label == "G" else 2000) + seed,
                         kind=gen.kind)
            pairs.append((f"factorG-k{k}-s{seed}", g.graph, f"factorH-k{k}-s{seed}", h.graph))

    for idx, (gname, G, hname, H) in enumerate(pairs):
        name = f"{gname}*{hname}"
        try:
            items = check_cartesian(G, H, cfg.power(), cfg.tolerances(), cfg.entry_cap,
                                    mixed_seed=idx, mixed_trials=cfg.mixed_trials)
        except (ValueError, SpectralError, TensorError) as exc:
            items = [Check("cartesian", "check ran", False, ERROR, 0.0, {"error": f"{type(exc).__name__}: {exc}"})]
        tag(name, items)

    return Report(config=asdict(cfg), instances=instances, checks=checks)
