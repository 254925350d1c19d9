"""Serialization of results (CSV/JSON) and SVG plots.

All tabular output is text-diffable: floats are written with ``repr`` so a
reload reproduces the serialized values bitwise, amplitudes with magnitude
below 1e-12 are clamped to exactly zero to suppress transform noise, and
SVG files carry no timestamps.
"""

import csv
import json
import math
import os

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "pathenc"    # reproducible element ids
matplotlib.rcParams["svg.fonttype"] = "none"       # labels as text, diffable

import matplotlib.pyplot as plt

from .decoding import REPORT_CLAMP, decompose, significant
from .errors import MissingResults, OutOfDomain

AMPLITUDES_FILE = "amplitudes.csv"
SUMMARY_FILE = "summary.json"
POPULATIONS_FILE = "populations.csv"
PULSE_FILE = "pulse.csv"


def write_pulse_csv(path, fields):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        n_controls = fields.samples.shape[0]
        writer.writerow(["step", "t"] + [f"eps_{c}" for c in range(n_controls)])
        for n in range(fields.n_steps):
            row = [n, repr(n * fields.dt)]
            row += [repr(float(v)) for v in fields.samples[:, n]]
            writer.writerow(row)


def load_pulse_csv(path):
    from .system import ControlField
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 3:
        raise MissingResults(f"{path} holds fewer than two pulse steps")
    header = rows[0]
    n_controls = len(header) - 2
    samples = [[float(v) for v in row[2:]] for row in rows[1:]]
    t0, t1 = float(rows[1][1]), float(rows[2][1])
    samples = list(map(list, zip(*samples)))
    return ControlField(t1 - t0, samples[:n_controls])


def _clamped(amp):
    return 0.0j if abs(amp) < REPORT_CLAMP else amp


def write_amplitude_csv(path, table, translation=None):
    """All 2**N table rows, sorted by descending magnitude.

    Columns: frequency index, per-slot digits (';'-joined, empty when the
    index has no digit expansion), representative pathway when the
    translation map knows one, amplitude as repr'd re/im, magnitude and
    phase in degrees.
    """
    scheme = table.scheme
    rows = sorted(table.entries.items(), key=lambda kv: (-abs(kv[1]), kv[0]))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "digits", "pathway", "re", "im",
                         "magnitude", "phase_deg"])
        for m, amp in rows:
            amp = _clamped(amp)
            try:
                digits = ";".join(str(c) for c in decompose(scheme, m).counts)
            except OutOfDomain:
                digits = ""
            pathway = ""
            if translation is not None:
                hit = translation.get((table.b, m))
                if hit is not None:
                    pathway = str(hit)
            writer.writerow([m, digits, pathway, repr(amp.real), repr(amp.imag),
                             repr(abs(amp)),
                             repr(math.degrees(math.atan2(amp.imag, amp.real)))])


def load_amplitude_csv(path):
    """Reload (m, amplitude) pairs exactly as serialized."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return {int(row[0]): complex(float(row[3]), float(row[4]))
            for row in rows[1:]}


def write_population_csv(path, populations, dt):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        d = populations.shape[1]
        writer.writerow(["t"] + [f"p_{i}" for i in range(d)])
        for n, row in enumerate(populations):
            writer.writerow([repr(n * dt)] + [repr(float(p)) for p in row])


def write_summary_json(path, summary):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def arrow_plot_svg(path, table, epsilon_abs, title=""):
    """Significant class amplitudes as arrows in the complex plane.

    Each arrow is labeled with its frequency index; the red arrow is the
    sum of all class amplitudes (the bare transfer amplitude).
    """
    entries = significant(table, epsilon_abs)
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    for m, amp in entries:
        ax.annotate("", xy=(amp.real, amp.imag), xytext=(0.0, 0.0),
                    arrowprops=dict(arrowstyle="->", color="C0", lw=1.2))
        ax.annotate(str(m), xy=(amp.real, amp.imag), fontsize=8,
                    xytext=(3, 3), textcoords="offset points")
    total = table.total
    ax.annotate("", xy=(total.real, total.imag), xytext=(0.0, 0.0),
                arrowprops=dict(arrowstyle="->", color="red", lw=1.8))
    reach = max([abs(total)] + [abs(amp) for _, amp in entries]) * 1.15 + 1e-12
    ax.set_xlim(-reach, reach)
    ax.set_ylim(-reach, reach)
    ax.axhline(0.0, color="0.85", lw=0.6, zorder=0)
    ax.axvline(0.0, color="0.85", lw=0.6, zorder=0)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title or f"{len(entries)} significant pathway classes")
    ax.set_aspect("equal")
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def population_plot_svg(path, populations, dt, title=""):
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    times = [n * dt for n in range(populations.shape[0])]
    for i in range(populations.shape[1]):
        ax.plot(times, populations[:, i], label=f"state {i}", lw=1.0)
    ax.set_xlabel("t")
    ax.set_ylabel("population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="center right", fontsize=8)
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def require(path):
    if not os.path.exists(path):
        raise MissingResults(f"expected results file {path}")
    return path
