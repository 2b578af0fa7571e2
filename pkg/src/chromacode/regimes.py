"""Regime certificates and structural decompositions.

Classification is evidence-based and finite: "certified-unique" means the
exact rational certificate inequality holds, "counterexample-exists" means a
concrete graph with measured lambda2 <= lambda carries >= 2 colorings at the
required distance, and "unknown" is an honest third state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import codes, colorings as col, graphs, spectral
from .codes import CodeSet, FamilyConfig, distance_threshold
from .colorings import Coloring
from .errors import OutOfRange, PreconditionFail, QTooLarge, TooManyClasses
from .graphs import RegularGraph

SIGMA_Q_CAP = 8
CLASS_CAP = 1 << 16

CERTIFIED = "certified-unique"
COUNTEREXAMPLE = "counterexample-exists"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class RegimePoint:
    delta: Fraction
    lam: Fraction
    q: int
    classification: str
    evidence: Mapping = field(default_factory=dict)

    def __post_init__(self):
        # the nontrivial region: distances are capped at (1 - 1/q) n
        if not (0 <= self.delta <= 1 - Fraction(1, self.q)):
            raise OutOfRange(
                f"delta={self.delta} outside [0, 1 - 1/{self.q}]"
            )


@dataclass(frozen=True)
class CertificateResult:
    certified: bool
    lhs: Fraction
    rhs: Fraction


def unique_regime_certificate(q: int, delta, lam) -> CertificateResult:
    """Exact-arithmetic membership certificate for the unique regime.

    Certifies (delta, lambda) when
        (q-1)(1-delta)^2 + (1 - (q-1)(1-delta))^2 < 1 - (1 - 1/(q-1)) / (1 - lambda),
    for 1 - 1/(q-1) <= delta <= 1 - 1/q and 0 < lambda < 1 (strict inequality:
    both boundary constructions sit exactly on equality).
    """
    if q < 3:
        raise OutOfRange("certificate needs q >= 3")
    delta = Fraction(delta)
    lam = Fraction(lam)
    lo = 1 - Fraction(1, q - 1)
    hi = 1 - Fraction(1, q)
    if not (lo <= delta <= hi):
        raise OutOfRange(f"delta={delta} outside [{lo}, {hi}] for q={q}")
    if not (0 < lam < 1):
        raise OutOfRange(f"lambda={lam} outside (0, 1)")
    gap = 1 - delta
    lhs = (q - 1) * gap * gap + (1 - (q - 1) * gap) ** 2
    rhs = 1 - (1 - Fraction(1, q - 1)) / (1 - lam)
    return CertificateResult(lhs < rhs, lhs, rhs)


def bipartite_threshold(q: int) -> Fraction:
    """1 - (1/floor(q/2) + 1/ceil(q/2)) / 2, the bipartite construction's distance."""
    if q < 3:
        raise ValueError("threshold defined for q >= 3")
    return 1 - Fraction(1, 2) * (Fraction(1, q // 2) + Fraction(1, (q + 1) // 2))


@dataclass(frozen=True)
class SigmaProfile:
    """Per-permutation overlap profile of a coloring pair.

    For each sigma, V_sigma = {v : X(v) = sigma(Y(v))}; stores w(V_sigma) and
    e(V_sigma, complement), plus the lambda2 the inequality was checked at.
    """

    sigmas: tuple[tuple[int, ...], ...]
    w: tuple[float, ...]
    e_cross: tuple[float, ...]
    lambda2: float


def sigma_profile(
    G: RegularGraph, X: Coloring, Y: Coloring, lam: float | None = None
) -> SigmaProfile:
    """Compute all q! overlap sets and check the spectral cut inequality.

    Verifies e(V_sigma, complement) >= 2 (1 - lambda2) (w - w^2) for every
    sigma (tolerance 1e-9), that the cyclic-shift orbit of every sigma covers
    V exactly once, and that d(X, Y) = n (1 - max_sigma w).
    """
    q = X.q
    if q > SIGMA_Q_CAP:
        raise QTooLarge(f"q={q} enumerates {q}! permutations; cap is {SIGMA_Q_CAP}")
    col._check_pair(X, Y)
    if lam is None:
        lam = spectral.lambda2(G)
    xarr, yarr = X.as_array(), Y.as_array()
    eu, ev = G.edge_arrays()
    n, m = G.n, G.m
    sigmas = []
    ws = []
    crosses = []
    sizes = {}
    for sigma in permutations(range(q)):
        sig = np.array(sigma, dtype=np.int64)
        mask = xarr == sig[yarr]
        size = int(mask.sum())
        cross = int((mask[eu] != mask[ev]).sum())
        w = size / n
        e_cross = cross / m if m else 0.0
        if e_cross < 2.0 * (1.0 - lam) * (w - w * w) - 1e-9:
            raise AssertionError(
                f"cut inequality violated at sigma={sigma}: "
                f"{e_cross} < 2(1-{lam})({w}-{w}^2)"
            )
        sigmas.append(sigma)
        ws.append(w)
        crosses.append(e_cross)
        sizes[sigma] = size
    # every cyclic-shift orbit covers V exactly once
    for sigma in sizes:
        total = sum(
            sizes[tuple((c + i) % q for c in sigma)] for i in range(q)
        )
        if total != n:
            raise AssertionError(f"orbit of {sigma} covers {total} != {n} vertices")
    dist, _ = col.distance(X, Y)
    if dist != n - max(sizes.values()):
        raise AssertionError("distance disagrees with 1 - max_sigma w(V_sigma)")
    return SigmaProfile(tuple(sigmas), tuple(ws), tuple(crosses), lam)


def near_independent_union_bound(
    G: RegularGraph,
    A: Sequence[int],
    B: Sequence[int],
    gamma: float,
    xi: float,
) -> tuple[float, float, bool]:
    """Check e(A u B) <= 3 max(lambda2, xi) / gamma for heavy, weakly-joined sets.

    Raises PreconditionFail naming the first violated hypothesis.
    """
    measures = graphs.subset_measures(G, A, B)  # raises Overlap if not disjoint
    wb = len(set(B)) / G.n
    if measures.w < gamma or wb < gamma:
        raise PreconditionFail(
            f"w(A)={measures.w}, w(B)={wb} must both reach gamma={gamma}"
        )
    if measures.e_cross > xi + 1e-12:
        raise PreconditionFail(f"e(A,B)={measures.e_cross} exceeds xi={xi}")
    lam2 = spectral.lambda2(G)
    union = graphs.subset_measures(G, set(A) | set(B))
    bound = 3.0 * max(lam2, xi) / gamma
    actual = union.e_within
    return bound, actual, actual <= bound + 1e-12


@dataclass(frozen=True)
class PartitionComponent:
    classes: tuple[tuple[int, ...], ...]
    size: int
    w: float
    e_within: float


@dataclass(frozen=True)
class PartitionReport:
    gamma: float
    components: tuple[PartitionComponent, ...]
    heavy_classes: int
    light_weight: float
    light_weight_bound: float
    component_edge_bound: float
    lambda2: float


def near_independent_partition(
    G: RegularGraph, C: CodeSet, gamma: float, class_cap: int = CLASS_CAP
) -> PartitionReport:
    """Partition the heavy color classes of a code into near-independent groups.

    Vertices are classed by their color vector alpha under the K = |C|
    colorings; classes with w >= gamma are joined whenever they agree on some
    coordinate, and the connected components S_1..S_t are returned with
    measured w and e. Checks that classes agreeing on a coordinate have zero
    crossing edges (forced by properness) and that cross-component classes
    disagree everywhere. The quantitative (3/gamma)^(q^K) lambda2 bound is
    reported, not asserted.
    """
    codes._check_members(C.members)
    K = len(C.members)
    q = C.members[0].q
    if q**K > class_cap:
        raise TooManyClasses(f"q^K = {q**K} exceeds cap {class_cap}")
    n = G.n
    arrays = [X.as_array() for X in C.members]
    classes: dict[tuple[int, ...], list[int]] = {}
    for v in range(n):
        alpha = tuple(int(a[v]) for a in arrays)
        classes.setdefault(alpha, []).append(v)
    heavy = {a: vs for a, vs in classes.items() if len(vs) / n >= gamma}
    light_weight = sum(len(vs) for a, vs in classes.items() if a not in heavy) / n
    keys = sorted(heavy)
    # union-find over heavy classes; join iff they agree on >= 1 coordinate
    parent = list(range(len(keys)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if any(keys[i][t] == keys[j][t] for t in range(K)):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(len(keys)):
        groups.setdefault(find(i), []).append(i)

    # properness forces zero edges between classes that agree somewhere
    vertex_sets = {a: set(vs) for a, vs in heavy.items()}
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if any(keys[i][t] == keys[j][t] for t in range(K)):
                cross = graphs.subset_measures(
                    G, vertex_sets[keys[i]], vertex_sets[keys[j]]
                ).cross_edges
                if cross != 0:
                    raise AssertionError(
                        f"classes {keys[i]} and {keys[j]} agree on a coordinate "
                        f"but share {cross} edges (colorings not proper?)"
                    )
    comps = []
    roots = sorted(groups)
    for r in roots:
        idxs = groups[r]
        union = set()
        for i in idxs:
            union |= vertex_sets[keys[i]]
        meas = graphs.subset_measures(G, union)
        comps.append(
            PartitionComponent(
                classes=tuple(keys[i] for i in idxs),
                size=meas.size,
                w=meas.w,
                e_within=meas.e_within,
            )
        )
    # cross-component classes must disagree on every coordinate
    for a in range(len(roots)):
        for b in range(a + 1, len(roots)):
            for i in groups[roots[a]]:
                for j in groups[roots[b]]:
                    if any(keys[i][t] == keys[j][t] for t in range(K)):
                        raise AssertionError("agreeing classes ended up in different components")
    lam2 = spectral.lambda2(G)
    try:
        edge_bound = (3.0 / gamma) ** (q**K) * lam2 if gamma > 0 else math.inf
    except OverflowError:
        edge_bound = math.inf
    return PartitionReport(
        gamma=gamma,
        components=tuple(comps),
        heavy_classes=len(keys),
        light_weight=light_weight,
        light_weight_bound=(q**K) * gamma,
        component_edge_bound=edge_bound,
        lambda2=lam2,
    )


def independent_size_bound(
    G: RegularGraph, A: Sequence[int]
) -> tuple[float, float, bool]:
    """w(A) <= (1 + e(A)) / 2, checked in exact integer arithmetic.

    Returns (w, e_within, ok).
    """
    if G.d < 1:
        raise ValueError("bound needs d >= 1")
    meas = graphs.subset_measures(G, A)
    # w <= (1 + e)/2  <=>  2 |A| m <= n (m + |E(A)|)
    ok = 2 * meas.size * G.m <= G.n * (G.m + meas.inner_edges)
    return meas.w, meas.e_within, ok


def hoffman_bound(G: RegularGraph) -> float:
    """Chromatic-number lower bound 1 - 1/lambda_min."""
    if G.d < 1:
        raise ValueError("Hoffman bound needs d >= 1")
    if not spectral.is_connected(G):
        raise ValueError("Hoffman bound needs a connected graph")
    return 1.0 - 1.0 / spectral.lambda_min(G)


# -- regime map sweep ---------------------------------------------------------

@dataclass(frozen=True)
class SweepFamily:
    """One evidence family for the sweep; params are constructor-specific."""

    kind: str  # layered-pair | biased | gadget | tensor-lift
    params: Mapping


@dataclass(frozen=True)
class SweepConfig:
    q: int
    delta_grid: tuple[Fraction, ...]
    lambda_grid: tuple[Fraction, ...]
    families: tuple[SweepFamily, ...]
    seed: int = 0
    budget: int = 400
    target: int = 8


CSV_HEADER = "q,delta,lambda,classification,evidence_kind,n,lambda2_measured,code_size,min_dist"


@dataclass
class _Instance:
    kind: str
    graph: RegularGraph
    lambda2: float
    fixed_code: CodeSet | None  # delta-independent evidence (pair / lifted coordinates)
    sampler: object | None      # per-delta packing when not fixed
    label: str


def _build_sweep_instance(q: int, fam: SweepFamily, seed: int, idx: int) -> _Instance:
    p = dict(fam.params)
    if fam.kind == "layered-pair":
        d = int(p.get("d", 25))
        m = int(p.get("m", 50))
        half = (q - 1) * m
        G = graphs.random_regular_bipartite(half, d, seed=(seed, idx))
        X, Y = col.layered_bipartite_pair(G, q)
        dist, _ = col.distance(X, Y)
        code = CodeSet((X, Y), Fraction(0), dist, {"family": "layered-pair", "d": d})
        return _Instance(fam.kind, G, spectral.lambda2(G), code, None, f"layered-pair(d={d},m={m})")
    if fam.kind == "biased":
        d = int(p.get("d", 4))
        half = int(p.get("half", 500))
        tau = float(Fraction(p["tau"])) if "tau" in p else 1.0 / (8 * d * d)
        G = graphs.random_regular_bipartite(half, d, seed=(seed, idx))
        sampler = lambda s: col.sample_bipartite_biased(G, q, tau, s)
        return _Instance(fam.kind, G, spectral.lambda2(G), None, sampler, f"biased(d={d},half={half})")
    if fam.kind == "gadget":
        base_half = int(p.get("base_half", 8))
        base = graphs.random_regular_bipartite(base_half, 3, seed=(seed, idx))
        G = graphs.gadget_expand(base)
        sampler = lambda s: col.sample_gadget_coloring(G, q, s)
        return _Instance(fam.kind, G, spectral.lambda2(G), None, sampler, f"gadget(base_half={base_half})")
    if fam.kind == "tensor-lift":
        N = int(p.get("N", 2))
        lifts = int(p.get("lifts", 1))
        restarts = int(p.get("restarts", 30))
        cfg = FamilyConfig(
            constructor="tensor-lift",
            q=q,
            delta=Fraction(1) - Fraction(1, q),
            lambda_cap=1.0,
            sizes=(lifts,),
            seed=seed + idx,
            N=N,
            restarts=restarts,
        )
        G, code = codes.build_family_instance(cfg, lifts)
        return _Instance(fam.kind, G, spectral.lambda2(G), code, None, f"tensor-lift(N={N},lifts={lifts})")
    raise ValueError(f"unknown sweep family kind {fam.kind!r}")


def regime_map_sweep(
    config: SweepConfig,
    skip: set[tuple[str, str]] | None = None,
    threads: int = 1,
) -> Iterator[RegimePoint]:
    """Classify every grid point, yielding rows in canonical grid order.

    ``skip`` holds (delta, lambda) string keys already present in a resumed
    output. Family instances are built once and reused; greedy packs are
    cached per (family, delta). Each instance depends only on its own derived
    seed, so ``threads`` changes speed, never output.
    """
    q = config.q
    if threads > 1 and len(config.families) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            instances = list(
                pool.map(
                    lambda pair: _build_sweep_instance(q, pair[1], config.seed, pair[0]),
                    enumerate(config.families),
                )
            )
    else:
        instances = [
            _build_sweep_instance(q, fam, config.seed, idx)
            for idx, fam in enumerate(config.families)
        ]
    pack_cache: dict[tuple[int, Fraction], CodeSet] = {}
    lo = 1 - Fraction(1, q - 1)
    hi = 1 - Fraction(1, q)
    for delta in config.delta_grid:
        for lam in config.lambda_grid:
            if skip and (str(delta), str(lam)) in skip:
                continue
            delta = Fraction(delta)
            lam = Fraction(lam)
            if lo <= delta <= hi and 0 < lam < 1:
                cert = unique_regime_certificate(q, delta, lam)
                if cert.certified:
                    yield RegimePoint(
                        delta, lam, q, CERTIFIED,
                        {"kind": "certificate", "lhs": cert.lhs, "rhs": cert.rhs},
                    )
                    continue
            found = None
            for idx, inst in enumerate(instances):
                if inst.lambda2 > float(lam) + 1e-12:
                    continue
                thr = distance_threshold(delta, inst.graph.n)
                if inst.fixed_code is not None:
                    code = inst.fixed_code
                    ok = len(code) >= 2 and (code.min_dist or 0) >= thr
                else:
                    key = (idx, delta)
                    if key not in pack_cache:
                        pack_cache[key] = codes.greedy_pack(
                            inst.graph, inst.sampler, delta,
                            config.target, config.budget, (config.seed, idx),
                        )
                    code = pack_cache[key]
                    ok = len(code) >= 2
                if ok:
                    found = (inst, code)
                    break
            if found is not None:
                inst, code = found
                yield RegimePoint(
                    delta, lam, q, COUNTEREXAMPLE,
                    {
                        "kind": inst.label,
                        "n": inst.graph.n,
                        "lambda2": inst.lambda2,
                        "code_size": len(code),
                        "min_dist": code.min_dist,
                    },
                )
            else:
                yield RegimePoint(delta, lam, q, UNKNOWN, {})


def regime_point_csv(pt: RegimePoint) -> str:
    ev = pt.evidence
    if pt.classification == COUNTEREXAMPLE:
        return ",".join(
            [
                str(pt.q), str(pt.delta), str(pt.lam), pt.classification,
                str(ev.get("kind", "")), str(ev.get("n", "")),
                f"{ev.get('lambda2'):.10g}" if ev.get("lambda2") is not None else "",
                str(ev.get("code_size", "")), str(ev.get("min_dist", "")),
            ]
        )
    kind = ev.get("kind", "") if pt.classification == CERTIFIED else ""
    return ",".join(
        [str(pt.q), str(pt.delta), str(pt.lam), pt.classification, kind, "", "", "", ""]
    )
