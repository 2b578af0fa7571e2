"""Proper q-colorings, the permutation-invariant distance, and every sampler.

A coloring is a per-vertex color in [0, q) bound to a specific graph via the
graph's content hash. Colors are 0-indexed everywhere; the modular gadget
rule "i+1, i+2 mod q" is applied in 0-indexed arithmetic. Properness is not a
type invariant (``is_proper`` checks it); the samplers here guarantee it by
construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

import numpy as np

from .assignment import max_weight_assignment
from .errors import (
    BadPartSize,
    BadTau,
    BindingMismatch,
    NoGadgetMeta,
    NotBipartite,
    TooLarge,
)
from .graphs import RegularGraph, tensor_power

ENUM_CAP = 16         # backtracking enumeration limit on n
BRUTE_Q_CAP = 8       # brute-force over q! permutations up to this q


@dataclass(frozen=True)
class Coloring:
    """A vertex -> color map over [0, q), bound to one graph."""

    q: int
    colors: tuple[int, ...]
    graph_key: str

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("need q >= 2")
        if any(not (0 <= c < self.q) for c in self.colors):
            raise ValueError("color out of range")

    @property
    def n(self) -> int:
        return len(self.colors)

    def as_array(self) -> np.ndarray:
        cached = self.__dict__.get("_arr")
        if cached is None:
            cached = np.array(self.colors, dtype=np.int64)
            object.__setattr__(self, "_arr", cached)
        return cached

    def relabeled(self, sigma: Sequence[int]) -> "Coloring":
        """Apply a color permutation: vertex color c becomes sigma[c]."""
        return Coloring(self.q, tuple(int(sigma[c]) for c in self.colors), self.graph_key)


@dataclass(frozen=True, eq=False)
class AgreementMatrix:
    """q x q counts: counts[a, b] = #{v : X(v) = a, Y(v) = b}. Entries sum to n."""

    q: int
    n: int
    counts: np.ndarray


def make_coloring(G: RegularGraph, q: int, colors: Sequence[int]) -> Coloring:
    if len(colors) != G.n:
        raise BindingMismatch(f"{len(colors)} colors for a graph on {G.n} vertices")
    return Coloring(q, tuple(int(c) for c in colors), G.graph_key)


def _check_bound(G: RegularGraph, X: Coloring) -> None:
    if X.graph_key != G.graph_key or X.n != G.n:
        raise BindingMismatch("coloring is bound to a different graph")


def _check_pair(X: Coloring, Y: Coloring) -> None:
    if X.graph_key != Y.graph_key or X.n != Y.n:
        raise BindingMismatch("colorings are bound to different graphs")
    if X.q != Y.q:
        raise BindingMismatch(f"colorings use different q: {X.q} vs {Y.q}")


def is_proper(G: RegularGraph, X: Coloring) -> tuple[bool, tuple[int, int] | None]:
    """True iff no edge is monochromatic; otherwise also the first violating edge."""
    _check_bound(G, X)
    cols = X.colors
    for u in range(G.n):
        cu = cols[u]
        for v in G.adjacency[u]:
            if v > u and cols[v] == cu:
                return False, (u, v)
    return True, None


def agreement_matrix(X: Coloring, Y: Coloring) -> AgreementMatrix:
    _check_pair(X, Y)
    q = X.q
    flat = np.bincount(X.as_array() * q + Y.as_array(), minlength=q * q)
    return AgreementMatrix(q, X.n, flat.reshape(q, q))


_PERMS: dict[int, np.ndarray] = {}


def _all_perms(q: int) -> np.ndarray:
    """All permutations of range(q) in lexicographic order, as an array."""
    if q not in _PERMS:
        _PERMS[q] = np.array(list(permutations(range(q))), dtype=np.int64)
    return _PERMS[q]


def distance(
    X: Coloring, Y: Coloring, method: str = "auto"
) -> tuple[int, tuple[int, ...]]:
    """Permutation-invariant distance min_sigma |{v : X(v) != sigma(Y(v))}|.

    Returns (distance, sigma) where sigma is the lexicographically smallest
    color permutation (applied to Y) achieving it. ``method`` picks the
    maximization path over the agreement matrix: "brute" enumerates all q!
    permutations, "assignment" solves an exact Hungarian assignment, and
    "auto" uses brute force for q <= 8.
    """
    M = agreement_matrix(X, Y)
    q, n = M.q, M.n
    if method == "auto":
        method = "brute" if q <= BRUTE_Q_CAP else "assignment"
    if method == "brute":
        if q > BRUTE_Q_CAP:
            raise TooLarge(f"brute force over {q}! permutations refused")
        P = _all_perms(q)
        # agreement of sigma is sum_b M[sigma(b), b]
        agreements = M.counts[P, np.arange(q)].sum(axis=1)
        best = int(np.argmax(agreements))
        sigma = tuple(int(c) for c in P[best])
        return n - int(agreements[best]), sigma
    if method == "assignment":
        # Encode the lexicographic tie-break directly in the weights:
        # maximize agreement * BASE - (value of sigma as a base-q numeral).
        base = q**q + 1
        counts = M.counts.tolist()
        weight = [
            [counts[a][b] * base - a * q ** (q - 1 - b) for a in range(q)]
            for b in range(q)
        ]
        _, row_to_col = max_weight_assignment(weight)
        sigma = tuple(row_to_col)
        agreement = sum(counts[sigma[b]][b] for b in range(q))
        return n - agreement, sigma
    raise ValueError(f"unknown method {method!r}")


def sample_gadget_coloring(G: RegularGraph, q: int, seed) -> Coloring:
    """Random proper coloring of a gadget-expanded graph.

    Base vertices get i.i.d. uniform colors. On each gadget over base edge xy:
    equal base colors i give the x-side part (i+1) mod q and the y-side part
    (i+2) mod q; distinct colors i at x and j at y give the x-side part j and
    the y-side part i. Always proper for q >= 3.
    """
    if G.meta is None or G.meta.get("kind") != "gadget":
        raise NoGadgetMeta("graph was not built by gadget_expand (no gadget meta)")
    if q < 3:
        raise ValueError("gadget coloring needs q >= 3")
    rng = np.random.default_rng(seed)
    base_n = G.meta["base_n"]
    colors = np.empty(G.n, dtype=np.int64)
    colors[:base_n] = rng.integers(0, q, size=base_n)
    for x, y, xpart, ypart in G.meta["gadgets"]:
        i = int(colors[x])
        j = int(colors[y])
        if i == j:
            cx, cy = (i + 1) % q, (i + 2) % q
        else:
            cx, cy = j, i
        for a in xpart:
            colors[a] = cx
        for b in ypart:
            colors[b] = cy
    return Coloring(q, tuple(int(c) for c in colors), G.graph_key)


def sample_bipartite_biased(G: RegularGraph, q: int, tau: float, seed) -> Coloring:
    """Biased random proper coloring of a bipartite graph.

    Part-0 vertices take color q-1 with probability tau, else a uniform color
    in {0, ..., floor(q/2)-1}. Part-1 vertices are forced to q-2 when some
    neighbor got q-1, else uniform in {floor(q/2), ..., q-1}. Proper by
    construction: the only color shared between the parts' ranges is q-1, and
    a part-1 vertex keeps it only when no neighbor has it.
    """
    if G.part_labels is None:
        raise NotBipartite("biased sampler needs part labels")
    if not (0.0 <= tau <= 1.0):
        raise BadTau(f"tau={tau} outside [0, 1]")
    if q < 3:
        raise ValueError("biased sampler needs q >= 3")
    rng = np.random.default_rng(seed)
    labels = np.array(G.part_labels)
    part0 = np.flatnonzero(labels == 0)
    part1 = np.flatnonzero(labels == 1)
    low = q // 2
    colors = np.empty(G.n, dtype=np.int64)
    marked = rng.random(len(part0)) < tau
    uniform0 = rng.integers(0, low, size=len(part0))
    colors[part0] = np.where(marked, q - 1, uniform0)
    uniform1 = rng.integers(low, q, size=len(part1))
    for idx, v in enumerate(part1):
        if any(colors[u] == q - 1 for u in G.adjacency[v]):
            colors[v] = q - 2
        else:
            colors[v] = uniform1[idx]
    return Coloring(q, tuple(int(c) for c in colors), G.graph_key)


def layered_bipartite_pair(G: RegularGraph, q: int) -> tuple[Coloring, Coloring]:
    """The two block colorings whose distance is (1 - 1/(q-1)) |V|.

    X: part 0 all color 0, part 1 in equal blocks of colors 1..q-1.
    Y: part 1 all color q-1, part 0 in equal blocks of colors 0..q-2.
    Parts must both have size (q-1) * m.
    """
    if G.part_labels is None:
        raise NotBipartite("layered pair needs part labels")
    if q < 3:
        raise ValueError("layered pair needs q >= 3")
    part0 = [v for v in range(G.n) if G.part_labels[v] == 0]
    part1 = [v for v in range(G.n) if G.part_labels[v] == 1]
    if len(part0) != len(part1) or len(part0) % (q - 1) != 0 or not part0:
        raise BadPartSize(
            f"parts of {len(part0)} and {len(part1)} are not both (q-1)*m for q={q}"
        )
    m = len(part0) // (q - 1)
    x = [0] * G.n
    y = [0] * G.n
    for rank, v in enumerate(part1):
        x[v] = 1 + rank // m
    for v in part1:
        y[v] = q - 1
    for rank, v in enumerate(part0):
        y[v] = rank // m
    return (
        Coloring(q, tuple(x), G.graph_key),
        Coloring(q, tuple(y), G.graph_key),
    )


def coordinate_colorings(
    q: int, N: int, G: RegularGraph | None = None
) -> list[Coloring]:
    """The N coordinate colorings X_i(a_1..a_N) = a_i of the tensor power graph."""
    if G is None:
        G = tensor_power(q, N)
    meta = G.meta or {}
    if meta.get("kind") != "tensor" or meta.get("q") != q or meta.get("N") != N:
        raise BindingMismatch("graph is not tensor_power(q, N)")
    out = []
    for i in range(N):
        w = q ** (N - 1 - i)
        out.append(Coloring(q, tuple((v // w) % q for v in range(G.n)), G.graph_key))
    return out


def lift_coloring(X: Coloring, lifted: RegularGraph) -> Coloring:
    """Pull a coloring through a 2-lift: both copies of v inherit X(v)."""
    meta = lifted.meta or {}
    if meta.get("kind") != "two_lift" or meta.get("base_key") != X.graph_key:
        raise BindingMismatch("graph is not a 2-lift of the coloring's graph")
    return Coloring(X.q, X.colors + X.colors, lifted.graph_key)


def enumerate_proper(G: RegularGraph, q: int, cap: int = ENUM_CAP) -> list[Coloring]:
    """All proper q-colorings as functions (not up to symmetry), lexicographic.

    Backtracking over vertices in id order, pruning on already-colored
    neighbors.
    """
    if G.n > cap:
        raise TooLarge(f"n={G.n} exceeds enumeration cap {cap}")
    lower_nbrs = [tuple(u for u in G.adjacency[v] if u < v) for v in range(G.n)]
    out: list[Coloring] = []
    assigned = [0] * G.n

    def backtrack(v: int) -> None:
        if v == G.n:
            out.append(Coloring(q, tuple(assigned), G.graph_key))
            return
        blocked = {assigned[u] for u in lower_nbrs[v]}
        for c in range(q):
            if c not in blocked:
                assigned[v] = c
                backtrack(v + 1)

    backtrack(0)
    return out
