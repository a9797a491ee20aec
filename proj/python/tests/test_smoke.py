import json

import numpy as np
import pytest

import dilres


def test_config_defaults_echo():
    cfg = dilres.config("")
    assert cfg["model"]["kind"] == "toy"
    assert cfg["fock"]["N_ph"] == 1
    assert cfg["scan"]["kappa_end"] == [0.1, 0.0]


def test_config_errors_raise_value_error():
    with pytest.raises(ValueError, match="unknown key"):
        dilres.config("[model]\ncolour = 1\n")


def test_grid_weights_integrate_the_ball():
    g = dilres.grid(3, 2.0, "octahedral", 1.0)
    volume = sum(n["weight"] for n in g["nodes"] if n["lambda"] == 1)
    assert volume == pytest.approx(4 * np.pi * 8 / 3, rel=1e-12)
    assert len(g["nodes"]) == 6 * 3 * 2


def test_decoupled_hamiltonian_matches_numpy():
    h = dilres.hamiltonian("[grid]\nn_radial = 1\n[scan]\ng = 0\ntheta = [0, 0.2]\n")
    assert h.shape[0] == h.shape[1] == 2 * 5
    values, residuals, summary = dilres.eigs(h)
    ref = np.sort_complex(np.linalg.eigvals(h))
    assert np.allclose(np.sort_complex(np.asarray(values)), ref, atol=1e-12)
    assert max(residuals) < 1e-12
    assert summary["dimension"] == 10


def test_undilated_hamiltonian_is_hermitian():
    h = dilres.hamiltonian("[grid]\nn_radial = 1\n[fock]\nN_ph = 2\n")
    assert np.abs(h - h.conj().T).max() < 1e-13


def test_spectrum_csv_header():
    csv = dilres.spectrum_csv(np.diag([0.0, 1.0]).astype(complex))
    assert csv.splitlines()[0] == "index,E_re,E_im,residual,cluster,multiplicity"


def test_fine_structure_suite_passes():
    result = dilres.run_suite("fine_structure")
    assert result["pass"]
    assert all(c["pass"] for c in result["checks"])
    assert "theta" in dilres.suite_names()


def test_run_spectrum_writes_files(tmp_path):
    code = dilres.run("spectrum", "[grid]\nn_radial = 1\n", str(tmp_path))
    assert code == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "spectrum"
    assert (tmp_path / "spectrum.csv").exists()


def test_run_reports_config_errors(tmp_path):
    assert dilres.run("spectrum", "[model]\nkind = \"file\"\npath = \"/nonexistent.json\"\n", str(tmp_path)) == 2
