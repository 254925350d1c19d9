import numpy as np
import pytest

import pathenc as pe
from pathenc import reporting


@pytest.fixture
def small_table(triangle_graph, ladder_tree):
    scheme = pe.assign_ohpe(triangle_graph, ladder_tree, 7)
    j = np.arange(8)
    samples = (0.8 * np.exp(2j * np.pi * 0 * j / 8)
               + 0.15 * np.exp(2j * np.pi * 1 * j / 8)
               + 0.04 * np.exp(2j * np.pi * 7 * j / 8)
               + 1e-14 * np.exp(2j * np.pi * 2 * j / 8))
    return pe.spectrum_from_samples(samples, scheme, 0, 2)


def test_arrow_plot_labels_significant_entries(small_table, tmp_path):
    path = tmp_path / "arrows.svg"
    reporting.arrow_plot_svg(str(path), small_table, 0.01)
    text = path.read_text()
    assert "<svg" in text
    for label in ("0", "1", "-1"):
        assert f">{label}</text>" in text.replace(" ", "")


def test_arrow_plot_with_empty_significant_set(small_table, tmp_path):
    path = tmp_path / "empty.svg"
    reporting.arrow_plot_svg(str(path), small_table, 10.0)
    text = path.read_text()
    assert "<svg" in text
    assert "0 significant" in text


def test_amplitude_csv_clamps_noise(small_table, tmp_path):
    path = tmp_path / "amps.csv"
    reporting.write_amplitude_csv(str(path), small_table)
    amps = reporting.load_amplitude_csv(str(path))
    assert amps[2] == 0.0           # 1e-14 tone clamped to exactly zero
    assert abs(amps[0] - 0.8) < 1e-12
    # clamping is magnitude-based: small components of large entries stay
    assert amps[1] != 0.0


def test_pulse_csv_round_trip(tmp_path):
    fields = pe.ControlField(0.25, [[0.1, -0.2, 0.3], [0.0, 0.5, -0.5]])
    path = tmp_path / "pulse.csv"
    reporting.write_pulse_csv(str(path), fields)
    loaded = reporting.load_pulse_csv(str(path))
    assert loaded.dt == fields.dt
    assert np.array_equal(loaded.samples, fields.samples)


def test_population_csv_shape(tmp_path):
    populations = np.array([[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]])
    path = tmp_path / "pops.csv"
    reporting.write_population_csv(str(path), populations, 0.5)
    rows = path.read_text().splitlines()
    assert rows[0] == "t,p_0,p_1"
    assert len(rows) == 4
    assert rows[3].startswith("1.0,")
