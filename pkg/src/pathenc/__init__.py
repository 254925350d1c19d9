"""Pathway-class amplitude extraction for controlled quantum dynamics.

Builds the transition graph of a driven quantum system, modulates selected
dipole matrix elements with base-B frequencies, propagates the modulated
dynamics over an auxiliary parameter grid, and Fourier-decodes the result
into interfering pathway-class amplitudes, with reduced (spanning-tree
based) Hermitian and non-Hermitian encodings, a brute-force integrator for
verification, and gradient-ascent pulse synthesis.
"""

__version__ = "0.1.0"

from .system import ControlField, Propagator, QuantumSystem, build_system
from .graph import (HamiltonianGraph, SpanningTree, DirectedGraph, boundary,
                    build_graph, directed_graph, fundamental_cycle,
                    incidence_matrix, non_tree_edges, spanning_tree,
                    tree_from_edges, tree_path_chain)
from .encoding import (EncodingScheme, assign_full, assign_mode, assign_nhpe,
                       assign_ohpe, compute_gamma0, cost_summary,
                       modulated_dipoles)
from .propagation import propagate_final, propagate_trajectory, step_propagator
from .decoding import (AmplitudeTable, Pathway, Signature,
                       build_translation_map, decompose, decompose_hermitian,
                       decompose_nonhermitian, expand_signature,
                       extract_spectrum, pathway_frequency, recompose,
                       self_validating, sgrid_propagators, significant,
                       spectrum_from_samples, wrap_index)
from .dyson import (class_amplitude_oracle, enumerate_pathways,
                    pathway_amplitude)
from .grape import SynthesisConfig, SynthesisReport, fidelity, grape_optimize

__all__ = [name for name in dir() if not name.startswith("_")]
