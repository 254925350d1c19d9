"""Spectrum extraction and interpretation of pathway-class amplitudes.

The modulated system is propagated at the integer grid s = 0 .. 2**N - 1,
where every encoded frequency is an integer multiple of
gamma0 = 2*pi / 2**N, so the samples f_s = <b|U(T; s)|a> satisfy

    f_s = sum_m amp(m) * exp(2j*pi * m * s / 2**N)

exactly and a single FFT recovers the class amplitude amp(m) for every
frequency index m.  Hermitian encodings use signed frequencies, so their
indices are reported in [-2**(N-1), 2**(N-1)); non-Hermitian indices live
in [0, 2**N).  Decomposing an index into base-B digits (balanced digits for
Hermitian encodings) yields the per-slot traversal counts of the class.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .encoding import check_scheme_system
from .errors import (DigitOutOfRange, EvenBase, InvalidTransition,
                     ModeMismatch, OutOfDomain)
from .graph import fundamental_cycle, non_tree_edges, tree_path_chain
from .kernels import (ROUTE_GENERAL, ROUTE_HERMITIAN_MULTI,
                      ROUTE_HERMITIAN_SINGLE, propagate_sgrid)

REPORT_CLAMP = 1e-12    # magnitudes below this serialize as exactly zero


@dataclass(frozen=True)
class Pathway:
    """A sequence of states a -> l1 -> ... -> b; order = transition count."""

    states: tuple

    @property
    def order(self):
        return len(self.states) - 1

    def __str__(self):
        return "->".join(str(s) for s in self.states)


@dataclass(frozen=True)
class Signature:
    """Per-slot (or per-edge) traversal counts of a pathway class."""

    counts: tuple
    hermitian: bool


@dataclass(frozen=True)
class AmplitudeTable:
    """Decoded map from frequency index to complex class amplitude."""

    scheme: object
    a: int
    b: int
    bin_amplitudes: np.ndarray      # FFT-order array of length 2**n_exp

    @property
    def entries(self):
        """dict keyed by frequency index (signed for Hermitian modes)."""
        cached = self.__dict__.get("_entries_cache")
        if cached is None:
            size = len(self.bin_amplitudes)
            cached = {wrap_index(m, self.scheme.n_exp, self.scheme.hermitian):
                      complex(self.bin_amplitudes[m]) for m in range(size)}
            object.__setattr__(self, "_entries_cache", cached)
        return cached

    @property
    def total(self):
        """Sum of all class amplitudes; equals U_ba(T) up to roundoff."""
        return complex(np.sum(self.bin_amplitudes))

    def reconstruct_samples(self):
        """Inverse transform back to the f_s samples."""
        return np.fft.ifft(self.bin_amplitudes) * len(self.bin_amplitudes)


def wrap_index(m, n_exp, hermitian):
    """Reduce an integer frequency index to its reported bin."""
    size = 1 << n_exp
    m = int(m) % size
    if hermitian and m >= size // 2:
        m -= size
    return m


def _route_for(scheme, n_controls):
    if scheme.hermitian:
        return ROUTE_HERMITIAN_SINGLE if n_controls == 1 else ROUTE_HERMITIAN_MULTI
    return ROUTE_GENERAL


def sgrid_propagators(system, fields, scheme, workers=None):
    """Final propagators U(T; s) at every grid point, shape (2**N, d, d)."""
    check_scheme_system(scheme, system)
    s_values = np.arange(scheme.sample_count, dtype=np.int64)
    dipoles = np.stack([np.asarray(mu) for mu in system.dipoles])
    return propagate_sgrid(system.energies, dipoles, scheme.freq_multiples,
                           scheme.n_exp, s_values, fields.samples, fields.dt,
                           _route_for(scheme, len(system.dipoles)),
                           workers=workers)


def extract_spectrum(system, fields, scheme, a, b, workers=None) -> AmplitudeTable:
    """Propagate over the s-grid and Fourier-decode the class amplitudes."""
    stack = sgrid_propagators(system, fields, scheme, workers=workers)
    samples = np.ascontiguousarray(stack[:, b, a])
    amps = np.fft.fft(samples) / len(samples)
    amps.setflags(write=False)
    return AmplitudeTable(scheme=scheme, a=int(a), b=int(b), bin_amplitudes=amps)


def spectrum_from_samples(samples, scheme, a, b) -> AmplitudeTable:
    """Decode a precomputed sample vector f_s (used by tests and tools)."""
    samples = np.asarray(samples, dtype=complex)
    if len(samples) != scheme.sample_count:
        raise ValueError(f"expected {scheme.sample_count} samples")
    amps = np.fft.fft(samples) / len(samples)
    amps.setflags(write=False)
    return AmplitudeTable(scheme=scheme, a=int(a), b=int(b), bin_amplitudes=amps)


def decompose_nonhermitian(m, base, k_enc) -> Signature:
    """Base-B digits of a non-negative frequency index, one per slot."""
    m = int(m)
    if m < 0:
        raise OutOfDomain(f"non-Hermitian frequency index {m} is negative")
    digits = []
    rest = m
    for _ in range(k_enc):
        digits.append(rest % base)
        rest //= base
    if rest != 0:
        raise OutOfDomain(
            f"{m} needs more than {k_enc} base-{base} digits")
    return Signature(counts=tuple(digits), hermitian=False)


def decompose_hermitian(m, base, k_enc) -> Signature:
    """Balanced base-B digits (in [-(B-1)/2, (B-1)/2]) of a signed index."""
    if base % 2 == 0:
        raise EvenBase(f"balanced digits need an odd base, got {base}")
    half = (base + 1) // 2
    rest = base ** k_enc + int(m)
    digits = []
    for _ in range(k_enc):
        digit = rest % base
        if digit >= half:
            digit -= base
        digits.append(digit)
        rest = (rest - digit) // base
    if rest != 1:
        raise OutOfDomain(
            f"{m} is outside the balanced base-{base} domain for {k_enc} slots")
    return Signature(counts=tuple(digits), hermitian=True)


def decompose(scheme, m) -> Signature:
    if scheme.hermitian:
        return decompose_hermitian(m, scheme.base, scheme.k_enc)
    return decompose_nonhermitian(m, scheme.base, scheme.k_enc)


def recompose(signature, base) -> int:
    """Exact inverse of the matching decompose: sum of n_k * B**(k-1)."""
    total = 0
    for k, digit in enumerate(signature.counts):
        if signature.hermitian:
            if abs(2 * digit) > base - 1:
                raise DigitOutOfRange(
                    f"balanced digit {digit} outside +-{(base - 1) // 2}")
        elif not 0 <= digit < base:
            raise DigitOutOfRange(f"digit {digit} outside 0..{base - 1}")
        total += digit * base ** k
    return total


def pathway_frequency(scheme, pathway) -> int:
    """Integer frequency index of a pathway under the scheme.

    Hermitian modes add +-B**(k-1) per signed traversal of an encoded edge;
    non-Hermitian modes add B**(k-1) per traversal of an encoded arc.
    Unencoded (tree) transitions contribute zero.
    """
    graph = scheme.graph
    edge_slot = scheme.edge_slot
    arc_slot = scheme.arc_slot
    total = 0
    states = pathway.states if isinstance(pathway, Pathway) else tuple(pathway)
    for u, v in zip(states[:-1], states[1:]):
        if graph.edge_index(u, v) is None:
            raise InvalidTransition(f"{u} -> {v} is not an allowed transition")
        if scheme.hermitian:
            key = (u, v) if u < v else (v, u)
            slot = edge_slot.get(key)
            if slot is not None:
                total += (1 if u < v else -1) * scheme.base ** slot
        else:
            slot = arc_slot.get((u, v))
            if slot is not None:
                total += scheme.base ** slot
    return total


def expand_signature(ohps, graph, tree, a, b) -> Signature:
    """Full per-edge signature from a reduced (non-tree slots) signature.

    The reduced counts are the coefficients of the fundamental cycles, and
    the tree path from a to b supplies the acyclic part, so the result is
    sum_k counts[k] * cycle_k + tree_path(a, b) and always has boundary
    v_b - v_a.
    """
    if not ohps.hermitian:
        raise ModeMismatch("signature expansion applies to Hermitian classes")
    outside = non_tree_edges(graph, tree)
    if len(ohps.counts) != len(outside):
        raise ModeMismatch(
            f"signature has {len(ohps.counts)} slots, tree leaves "
            f"{len(outside)} non-tree edges")
    chain = tree_path_chain(graph, tree, a, b)
    for count, edge_index in zip(ohps.counts, outside):
        if count:
            chain = chain + count * fundamental_cycle(graph, tree, edge_index)
    return Signature(counts=tuple(int(c) for c in chain), hermitian=True)


def build_translation_map(scheme, a, l_max):
    """Breadth-first map (final state, frequency bin) -> shortest pathway.

    Hermitian schemes skip pathways with an immediate back-and-forth
    (x -> y -> x) since such pairs cancel in the signed counts anyway;
    non-Hermitian schemes enumerate them.  The first pathway found per key
    is kept, so entries are minimal-length with lexicographic tie-break.
    """
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    graph = scheme.graph
    skip_flops = scheme.hermitian
    mapping = {}
    frontier = deque([(Pathway((a,)), 0)])
    mapping[(a, 0)] = Pathway((a,))
    while frontier:
        path, freq = frontier.popleft()
        if path.order >= l_max:
            continue
        last = path.states[-1]
        for nxt in graph.neighbors(last):
            if skip_flops and path.order >= 1 and nxt == path.states[-2]:
                continue
            if scheme.hermitian:
                key = (last, nxt) if last < nxt else (nxt, last)
                slot = scheme.edge_slot.get(key)
                step = 0 if slot is None else \
                    (1 if last < nxt else -1) * scheme.base ** slot
            else:
                slot = scheme.arc_slot.get((last, nxt))
                step = 0 if slot is None else scheme.base ** slot
            new_path = Pathway(path.states + (nxt,))
            new_freq = freq + step
            bin_key = (nxt, wrap_index(new_freq, scheme.n_exp, scheme.hermitian))
            if bin_key not in mapping:
                mapping[bin_key] = new_path
            frontier.append((new_path, new_freq))
    return mapping


def significant(table, epsilon_abs):
    """Entries with magnitude strictly above the threshold, largest first."""
    if epsilon_abs < 0:
        raise ValueError("threshold must be >= 0")
    picked = [(m, amp) for m, amp in table.entries.items()
              if abs(amp) > epsilon_abs]
    picked.sort(key=lambda item: (-abs(item[1]), item[0]))
    return picked


def self_validating(table, epsilon_abs):
    """Whether no significant class sits on the edge of the encoding domain.

    Returns ``(ok, offenders)`` where each offender is ``(m, signature)``
    with signature None when the index has no digit expansion at all.  A
    significant extremal (or inexpressible) class means the base was too
    small: classes outside the domain would alias onto encoded ones.
    """
    scheme = table.scheme
    extremal = (scheme.base - 1) // 2 if scheme.hermitian else scheme.base - 1
    offenders = []
    for m, amp in significant(table, epsilon_abs):
        try:
            sig = decompose(scheme, m)
        except OutOfDomain:
            offenders.append((m, None))
            continue
        counts = [abs(c) for c in sig.counts] if scheme.hermitian \
            else list(sig.counts)
        if max(counts) >= extremal:
            offenders.append((m, sig))
    return not offenders, offenders
