"""Brute-force pathway amplitudes by direct time-ordered integration.

Exists purely to cross-check decoded class amplitudes on small systems: the
amplitude of a single pathway a -> l1 -> ... -> b is the nested integral of

    v_ji(t) = i * (sum_c mu_c[j, i] * eps_c(t)) * exp(i (E_j - E_i) t)

over the time-ordered simplex.  It is evaluated by forward recursion of the
prefix amplitudes g_k(t) = integral of v_k * g_{k-1} with trapezoidal
accumulation on the field grid (the field is constant inside each step, so
each interval uses its own sample at both endpoints), which converges at
O(dt^2) under grid refinement.
"""

from collections import deque

import numpy as np

from .decoding import Pathway, pathway_frequency
from .errors import EnumerationOverflow, InvalidTransition

ENUMERATION_CAP = 10 ** 6


def enumerate_pathways(graph, a, b, max_order, allow_rabi_flop=True,
                       cap=ENUMERATION_CAP):
    """All pathways from a to b with at most ``max_order`` transitions.

    Breadth-first order (shortest first, lexicographic within a length).
    With ``allow_rabi_flop`` false, immediate back-and-forth steps
    (x -> y -> x) are excluded.  Raises ``EnumerationOverflow`` beyond the
    count cap instead of silently truncating.
    """
    results = []
    visited = 0
    frontier = deque([(a,)])
    while frontier:
        states = frontier.popleft()
        visited += 1
        if visited > cap:
            raise EnumerationOverflow(
                f"more than {cap} pathways up to order {max_order}")
        if states[-1] == b:
            results.append(Pathway(tuple(states)))
        if len(states) - 1 >= max_order:
            continue
        for nxt in graph.neighbors(states[-1]):
            if not allow_rabi_flop and len(states) >= 2 and nxt == states[-2]:
                continue
            frontier.append(states + (nxt,))
    return results


def pathway_amplitude(system, fields, pathway) -> complex:
    """Nested time-ordered integral for one pathway (order 0 gives 1)."""
    states = pathway.states if isinstance(pathway, Pathway) else tuple(pathway)
    n_steps = fields.n_steps
    dt = fields.dt
    nodes = np.arange(n_steps + 1) * dt
    g = np.ones(n_steps + 1, dtype=complex)
    for u, v in zip(states[:-1], states[1:]):
        if all(mu[v, u] == 0 for mu in system.dipoles):
            raise InvalidTransition(f"{u} -> {v} is not an allowed transition")
        coupling = np.zeros(n_steps, dtype=complex)
        for c, mu in enumerate(system.dipoles):
            coupling += mu[v, u] * fields.samples[c]
        omega = system.energies[v] - system.energies[u]
        weight = 1j * np.exp(1j * omega * nodes)
        incr = 0.5 * dt * coupling * (weight[:-1] * g[:-1] + weight[1:] * g[1:])
        g = np.concatenate(([0.0], np.cumsum(incr)))
    return complex(g[-1])


def _check_pathway(graph, states):
    for u, v in zip(states[:-1], states[1:]):
        if graph.edge_index(u, v) is None:
            raise InvalidTransition(f"{u} -> {v} is not an allowed transition")


def class_amplitude_oracle(system, fields, scheme, target_m, a, b, max_order,
                           cap=ENUMERATION_CAP):
    """Sum of pathway amplitudes with the given frequency index.

    Enumerates every pathway up to ``max_order`` (backtracking included),
    keeps those whose exact integer frequency equals ``target_m`` and sums
    their amplitudes.  Returns ``(amplitude, truncated)`` where the flag
    records that the enumeration stopped at ``max_order`` (so higher-order
    members of the class are missing from the sum).
    """
    graph = scheme.graph
    pathways = enumerate_pathways(graph, a, b, max_order, cap=cap)
    total = 0.0 + 0.0j
    for path in pathways:
        _check_pathway(graph, path.states)
        if pathway_frequency(scheme, path) == target_m:
            total += pathway_amplitude(system, fields, path)
    # longer members of the class always exist on a graph with edges
    truncated = graph.edge_count > 0
    return total, truncated
