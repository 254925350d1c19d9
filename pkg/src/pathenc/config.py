"""Parsing and validation of JSON analysis configurations.

Schema (all state indices 0-based, units are whatever the system uses with
hbar = 1):

    {
      "system": {"energies": [...],
                 "dipoles": [[[i, j, value], ...], ...]},
      "pulse": {"dt": ..., "samples": [[...], ...]}
               | {"file": "pulse.csv"}
               | {"synthesis": {"start": ..., "target": ..., "duration": ...,
                                "dt": ..., "amplitude_bound": ...,
                                "max_iterations": ..., "target_infidelity": ...,
                                "seed": ...}},
      "encoding": {"mode": "ohpe|nhpe|full-h|full-nh", "base": 7,
                   "epsilon_rel": 0.01, "tree_edges": [[i, j], ...]?},
      "report": {"start": a, "target": b, "l_max": 8, "out_dir": "..."?}
    }

Dipole entries are sparse (i, j, value) triples for the strict upper
triangle (i < j); ``value`` is a real number or an [re, im] pair, and the
conjugate partner at (j, i) is filled in automatically.  The triple sets
the i -> j coupling element mu[j, i].
"""

import json
import os
from dataclasses import dataclass

import numpy as np

from .encoding import ALL_MODES, HERMITIAN_MODES
from .errors import ConfigParseError, PathencError
from .grape import SynthesisConfig
from .system import ControlField, build_system


@dataclass(frozen=True)
class AnalysisConfig:
    system: object
    pulse_field: object             # ControlField or None
    pulse_file: str
    synthesis: object               # SynthesisConfig or None
    mode: str
    base: int
    epsilon_rel: float
    tree_edges: tuple               # explicit (i, j) pairs or ()
    start: int
    target: int
    l_max: int
    out_dir: str


def _need(mapping, key, where):
    if key not in mapping:
        raise ConfigParseError(f"missing field '{where}.{key}'")
    return mapping[key]


def _complex_value(raw, where):
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        return complex(float(raw[0]), float(raw[1]))
    raise ConfigParseError(
        f"'{where}' must be a number or an [re, im] pair, got {raw!r}")


def _parse_system(block):
    energies = _need(block, "energies", "system")
    if not isinstance(energies, list) or len(energies) < 2:
        raise ConfigParseError("'system.energies' must list at least 2 levels")
    d = len(energies)
    dipoles = []
    for ci, entries in enumerate(_need(block, "dipoles", "system")):
        mu = np.zeros((d, d), dtype=complex)
        for ei, entry in enumerate(entries):
            where = f"system.dipoles[{ci}][{ei}]"
            if not isinstance(entry, (list, tuple)) or len(entry) != 3:
                raise ConfigParseError(f"'{where}' must be [i, j, value]")
            i, j, raw = entry
            if not (isinstance(i, int) and isinstance(j, int)):
                raise ConfigParseError(f"'{where}' indices must be integers")
            if not 0 <= i < d or not 0 <= j < d or i == j:
                raise ConfigParseError(
                    f"'{where}' indices must be distinct states below {d}")
            value = _complex_value(raw, where)
            lo, hi = min(i, j), max(i, j)
            if i < j:
                mu[hi, lo] = value
            else:
                mu[hi, lo] = value.conjugate()
            mu[lo, hi] = mu[hi, lo].conjugate()
        dipoles.append(mu)
    try:
        return build_system(energies, dipoles)
    except PathencError as exc:
        raise ConfigParseError(f"invalid system: {exc}") from exc


def _parse_pulse(block, base_dir):
    keys = {"samples", "file", "synthesis"} & set(block)
    if len(keys) != 1:
        raise ConfigParseError(
            "'pulse' needs exactly one of 'samples', 'file', 'synthesis'")
    if "samples" in block:
        dt = float(_need(block, "dt", "pulse"))
        samples = np.atleast_2d(np.asarray(block["samples"], dtype=float))
        try:
            return ControlField(dt, samples), "", None
        except ValueError as exc:
            raise ConfigParseError(f"invalid pulse: {exc}") from exc
    if "file" in block:
        return None, os.path.join(base_dir, block["file"]), None
    syn = block["synthesis"]
    try:
        cfg = SynthesisConfig(
            start=int(_need(syn, "start", "pulse.synthesis")),
            target=int(_need(syn, "target", "pulse.synthesis")),
            duration=float(_need(syn, "duration", "pulse.synthesis")),
            dt=float(_need(syn, "dt", "pulse.synthesis")),
            amplitude_bound=float(_need(syn, "amplitude_bound",
                                        "pulse.synthesis")),
            max_iterations=int(syn.get("max_iterations", 1000)),
            target_infidelity=float(syn.get("target_infidelity", 1e-4)),
            seed=int(syn.get("seed", 0)),
        )
    except ValueError as exc:
        raise ConfigParseError(f"invalid 'pulse.synthesis': {exc}") from exc
    return None, "", cfg


def parse_config(path) -> AnalysisConfig:
    """Load and validate a configuration file, first error wins."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path} is not valid JSON: {exc}") from exc

    system = _parse_system(_need(raw, "system", "config"))
    pulse_field, pulse_file, synthesis = _parse_pulse(
        _need(raw, "pulse", "config"), os.path.dirname(os.path.abspath(path)))

    enc = _need(raw, "encoding", "config")
    mode = _need(enc, "mode", "encoding")
    if mode not in ALL_MODES:
        raise ConfigParseError(
            f"'encoding.mode' must be one of {ALL_MODES}, got {mode!r}")
    base = int(_need(enc, "base", "encoding"))
    if mode in HERMITIAN_MODES and base % 2 == 0:
        raise ConfigParseError(
            f"'encoding.base' must be odd for mode {mode!r} (balanced "
            f"signed digits require an odd base), got {base}")
    epsilon_rel = float(enc.get("epsilon_rel", 0.01))
    if epsilon_rel < 0:
        raise ConfigParseError("'encoding.epsilon_rel' must be >= 0")
    tree_edges = tuple(tuple(int(v) for v in e)
                       for e in enc.get("tree_edges", []))
    if any(len(e) != 2 for e in tree_edges):
        raise ConfigParseError("'encoding.tree_edges' entries must be pairs")

    rep = _need(raw, "report", "config")
    start = int(_need(rep, "start", "report"))
    target = int(_need(rep, "target", "report"))
    if not 0 <= start < system.dim or not 0 <= target < system.dim:
        raise ConfigParseError("'report' states must be valid state indices")
    l_max = int(rep.get("l_max", 6))
    if l_max < 1:
        raise ConfigParseError("'report.l_max' must be >= 1")
    out_dir = rep.get("out_dir", "")

    return AnalysisConfig(
        system=system, pulse_field=pulse_field, pulse_file=pulse_file,
        synthesis=synthesis, mode=mode, base=base, epsilon_rel=epsilon_rel,
        tree_edges=tree_edges, start=start, target=target, l_max=l_max,
        out_dir=out_dir)
