"""Assignment of base-B modulation frequencies to transitions.

Each encoded transition slot k carries the frequency B**(k-1) * gamma0 with
gamma0 = 2*pi / 2**N and N the smallest exponent such that 2**N covers the
B**k_enc distinguishable frequencies.  Four modes are supported:

``full-h``   every undirected edge encoded, Hermitian sign pairing
``ohpe``     only edges outside a spanning tree encoded (Hermitian)
``full-nh``  every arc (both directions of every edge) encoded independently
``nhpe``     only arcs outside a forward-arc spanning tree encoded

Hermitian modes put +gamma on the lower-triangle element of an encoded edge
(i, j), i < j, and -gamma on its conjugate partner, so the modulated dipole
stays Hermitian.  Non-Hermitian modes give each arc its own slot.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DisconnectedGraph, EvenBase, NoEncodedEdges,
                     SchemeSystemMismatch)
from .graph import directed_graph, non_tree_edges

MODE_FULL_HERMITIAN = "full-h"
MODE_OHPE = "ohpe"
MODE_FULL_NONHERMITIAN = "full-nh"
MODE_NHPE = "nhpe"
HERMITIAN_MODES = (MODE_FULL_HERMITIAN, MODE_OHPE)
ALL_MODES = (MODE_OHPE, MODE_NHPE, MODE_FULL_HERMITIAN, MODE_FULL_NONHERMITIAN)


def compute_gamma0(base, k_enc):
    """Reference frequency and grid exponent for ``k_enc`` encoded slots.

    Returns ``(gamma0, n_exp)`` where ``2**n_exp`` is the smallest power of
    two that is at least ``base**k_enc`` (computed in exact integer
    arithmetic) and ``gamma0 = 2*pi / 2**n_exp``.
    """
    if base < 2 or k_enc < 1:
        raise ValueError("need base >= 2 and at least one encoded slot")
    n_exp = (int(base) ** int(k_enc) - 1).bit_length()
    return 2.0 * math.pi / (1 << n_exp), n_exp


@dataclass(frozen=True)
class EncodingScheme:
    """Slot-to-transition frequency map for one graph.

    ``slots[k]`` is the transition carrying frequency ``base**k * gamma0``:
    an undirected edge (i, j), i < j, in Hermitian modes, or a directed arc
    (u, v) meaning the u -> v transition in non-Hermitian modes.
    """

    mode: str
    base: int
    graph: object                   # HamiltonianGraph
    tree: object                    # SpanningTree or None for full modes
    slots: tuple                    # encoded transitions in slot order
    gamma0: float
    n_exp: int

    @property
    def k_enc(self):
        return len(self.slots)

    @property
    def sample_count(self):
        return 1 << self.n_exp

    @property
    def hermitian(self):
        return self.mode in HERMITIAN_MODES

    @property
    def freq_multiples(self):
        """d x d integer matrix K with gamma[row, col] = K[row, col]*gamma0.

        Entry (j, i) modulates the dipole element mu[j, i], i.e. the
        i -> j transition.
        """
        cached = self.__dict__.get("_kmat_cache")
        if cached is None:
            d = self.graph.vertex_count
            kmat = np.zeros((d, d), dtype=np.int64)
            for k, slot in enumerate(self.slots):
                w = int(self.base) ** k
                if self.hermitian:
                    i, j = slot
                    kmat[j, i] = w
                    kmat[i, j] = -w
                else:
                    u, v = slot
                    kmat[v, u] = w
            kmat.setflags(write=False)
            object.__setattr__(self, "_kmat_cache", kmat)
            cached = kmat
        return cached

    @property
    def edge_slot(self):
        """edge (i, j) -> slot index, for Hermitian modes."""
        return {e: k for k, e in enumerate(self.slots)} if self.hermitian else {}

    @property
    def arc_slot(self):
        """arc (u, v) -> slot index, for non-Hermitian modes."""
        return {} if self.hermitian else {a: k for k, a in enumerate(self.slots)}


def _check_odd_base(base):
    if base < 3 or base % 2 == 0:
        raise EvenBase(
            f"Hermitian encodings need an odd base >= 3, got {base}; only odd "
            "bases have a balanced signed-digit representation")


def _check_tree(graph, tree):
    if tree is None or len(tree.edge_indices) != graph.vertex_count - 1:
        raise DisconnectedGraph("encoding needs a spanning tree of the graph")


def assign_ohpe(graph, tree, base) -> EncodingScheme:
    """Hermitian encoding of only the edges outside the spanning tree."""
    _check_odd_base(base)
    _check_tree(graph, tree)
    outside = non_tree_edges(graph, tree)
    if not outside:
        raise NoEncodedEdges(
            "the transition graph is a tree: nothing to encode and exactly "
            "one pathway class exists per state pair")
    slots = tuple(graph.edges[k] for k in outside)
    gamma0, n_exp = compute_gamma0(base, len(slots))
    return EncodingScheme(MODE_OHPE, int(base), graph, tree, slots, gamma0, n_exp)


def assign_nhpe(graph, tree, base) -> EncodingScheme:
    """Non-Hermitian encoding of arcs outside the forward-arc spanning tree.

    The directed spanning tree keeps only the forward arc of each tree edge,
    so every backward arc plus every non-tree forward arc gets a slot
    (2r - d + 1 of them), in canonical arc order.
    """
    if base < 2:
        raise ValueError("base must be >= 2")
    _check_tree(graph, tree)
    tree_forward = {graph.edges[k] for k in tree.edge_indices}
    slots = tuple(a for a in directed_graph(graph).arcs if a not in tree_forward)
    gamma0, n_exp = compute_gamma0(base, len(slots))
    return EncodingScheme(MODE_NHPE, int(base), graph, tree, slots, gamma0, n_exp)


def assign_full(graph, base, hermitian=True) -> EncodingScheme:
    """Reference encoding of every edge (Hermitian) or every arc."""
    if hermitian:
        _check_odd_base(base)
        slots = tuple(graph.edges)
        mode = MODE_FULL_HERMITIAN
    else:
        if base < 2:
            raise ValueError("base must be >= 2")
        slots = tuple(directed_graph(graph).arcs)
        mode = MODE_FULL_NONHERMITIAN
    if not slots:
        raise NoEncodedEdges("graph has no edges")
    gamma0, n_exp = compute_gamma0(base, len(slots))
    return EncodingScheme(mode, int(base), graph, None, slots, gamma0, n_exp)


def assign_mode(mode, graph, tree, base) -> EncodingScheme:
    """Dispatch on one of the four mode names."""
    if mode == MODE_OHPE:
        return assign_ohpe(graph, tree, base)
    if mode == MODE_NHPE:
        return assign_nhpe(graph, tree, base)
    if mode == MODE_FULL_HERMITIAN:
        return assign_full(graph, base, hermitian=True)
    if mode == MODE_FULL_NONHERMITIAN:
        return assign_full(graph, base, hermitian=False)
    raise ValueError(f"unknown mode {mode!r}; expected one of {ALL_MODES}")


def check_scheme_system(scheme, system):
    if scheme.graph.vertex_count != system.dim or \
            tuple(scheme.graph.edges) != tuple(system.transitions):
        raise SchemeSystemMismatch(
            "encoding scheme was built for a different transition graph")


def modulated_dipoles(system, scheme, s):
    """Dipole matrices with every encoded element times exp(i*gamma*s).

    All dipoles of a multi-control system share the same position-wise
    phase factors.  At s = 0 the result equals the bare dipoles bitwise.
    """
    check_scheme_system(scheme, system)
    phases = np.exp(1j * scheme.gamma0 * scheme.freq_multiples * float(s))
    return [mu * phases for mu in system.dipoles]


def cost_summary(scheme):
    """Sample-count comparison against the matching full encoding.

    ``point_ratio`` compares the power-of-two grids actually used;
    ``ideal_ratio`` is the base**(d-1) factor that both ratios approach
    when the exponents are exact powers.
    """
    graph = scheme.graph
    r = graph.edge_count
    d = graph.vertex_count
    full_slots = r if scheme.hermitian else 2 * r
    _, n_full = compute_gamma0(scheme.base, full_slots)
    return {
        "reduced_points": scheme.sample_count,
        "full_points": 1 << n_full,
        "point_ratio": 2 ** (n_full - scheme.n_exp),
        "ideal_ratio": int(scheme.base) ** (d - 1),
    }
