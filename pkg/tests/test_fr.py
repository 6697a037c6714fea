import json

import numpy as np
import pytest

from cyverlinde import make
from cyverlinde.category import from_dict, to_dict
from cyverlinde.genus import (
    FRData,
    MissingFRData,
    NotMultiplicityFree,
    builtin_fr,
    fr_from_dict,
    load_fr_json,
    validate_fr,
)

WITH_FR = [
    "trivial", "fibonacci", "ising", "semion", "rep_z2", "cyclic(3,1)", "cyclic(3,2)", "cyclic(5,2)",
    "su2(1)", "su2(2)", "su2(3)", "su2(4)", "fibonacci*ising", "semion*semion",
]


@pytest.mark.parametrize("name", WITH_FR)
def test_builtin_tables_are_coherent(name):
    report = validate_fr(builtin_fr(make(name)))
    assert report.passed, report.lines()
    for check in ("pentagon", "hexagon", "hexagon_inverse", "r_twist", "theta_from_r", "s_from_r"):
        assert report[check].max_residual < 1e-9


def test_trivial_passes_vacuously():
    report = validate_fr(builtin_fr(make("trivial")))
    assert report.passed and report.max_residual == 0


def perturbed(fr, key, delta):
    F = dict(fr.F_table)
    F[key] += delta
    return FRData(fr.cat, F, dict(fr.R_table))


def test_fibonacci_f_mutation_fails_pentagon():
    fr = builtin_fr(make("fibonacci"))
    report = validate_fr(perturbed(fr, (1, 1, 1, 1, 1, 1), 0.01))
    assert not report["pentagon"].passed
    assert report["pentagon"].offending


def test_r_mutation_fails_hexagon():
    fr = builtin_fr(make("fibonacci"))
    R = dict(fr.R_table)
    R[(1, 1, 1)] *= -1
    report = validate_fr(FRData(fr.cat, dict(fr.F_table), R))
    assert not report["hexagon"].passed
    assert not report.passed


def test_conjugate_semion_braiding_is_coherent_but_mismatched():
    # flipping the sign gives the anti-semion braiding: coherent, same s, opposite twist
    fr = builtin_fr(make("semion"))
    R = dict(fr.R_table)
    R[(1, 1, 0)] *= -1
    report = validate_fr(FRData(fr.cat, dict(fr.F_table), R))
    assert report["hexagon"].passed and report["hexagon_inverse"].passed
    assert report["r_twist"].passed and report["s_from_r"].passed
    assert not report["theta_from_r"].passed


def test_fibonacci_f_matrix_is_the_golden_matrix():
    fr = builtin_fr(make("fibonacci"))
    _, _, M, Minv = fr.F_matrix(1, 1, 1, 1)
    phi = (1 + 5 ** 0.5) / 2
    assert np.allclose(np.abs(M), [[1 / phi, phi ** -0.5], [phi ** -0.5, 1 / phi]])
    assert np.allclose(M @ Minv, np.eye(2))


def test_missing_entry_is_reported():
    fr = builtin_fr(make("fibonacci"))
    F = dict(fr.F_table)
    del F[(1, 1, 1, 1, 1, 1)]
    report = validate_fr(FRData(fr.cat, F, dict(fr.R_table)))
    assert not report.passed and report.fatal
    with pytest.raises(MissingFRData):
        FRData(fr.cat, F, {}).F(1, 1, 1, 1, 1, 1)


def test_inadmissible_entries_vanish():
    fr = builtin_fr(make("ising"))
    assert fr.F(1, 1, 1, 1, 1, 1) == 0
    assert fr.R(1, 2, 2) == 0


def test_multiplicity_is_rejected():
    doc = to_dict(make("fibonacci"))
    doc["N"][1][1][1] = 2
    with pytest.raises(NotMultiplicityFree):
        FRData(from_dict(doc))


def test_unknown_family_has_no_tables():
    doc = to_dict(make("fibonacci"))
    doc["name"] = "mystery"
    with pytest.raises(MissingFRData):
        builtin_fr(from_dict(doc))


def test_json_roundtrip(tmp_path):
    cat = make("ising")
    fr = builtin_fr(cat)
    path = tmp_path / "ising_fr.json"
    path.write_text(json.dumps(fr.to_dict()))
    again = load_fr_json(cat, path)
    assert again.F_table == fr.F_table and again.R_table == fr.R_table
    assert validate_fr(again).passed


def test_malformed_document():
    from cyverlinde.category import CategoryError

    with pytest.raises(CategoryError):
        fr_from_dict(make("fibonacci"), {"F": [{"i": 0}], "R": []})
