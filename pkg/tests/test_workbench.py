"""Unit tests for generators, the canonical JSON document format and the CLI."""

import json

import numpy as np
import pytest

from detline import (
    ValidationError,
    chiral_direct_sum,
    deserialize_document,
    gen_elementary,
    gen_harmonic,
    gen_random,
    graded_det_finite,
    random_profile,
    refined_torsion,
    serialize_document,
    validate_chirality,
)
from detline.cli import main


class TestGenerators:
    def test_elementary_running_example(self):
        c, g = gen_elementary(1, 0, 2.0)
        assert c.dims.dims == (1, 1)
        np.testing.assert_allclose(c.partial[0], [[2.0]])
        np.testing.assert_allclose(g.gamma[0], [[1.0]])

    def test_elementary_has_mirror_block(self):
        c, g = gen_elementary(3, 0, 1.5)
        assert c.dims.dims == (1, 1, 1, 1)
        c.validate()
        validate_chirality(c, g)

    def test_elementary_rejects_bad_input(self):
        with pytest.raises(ValidationError):
            gen_elementary(2, 0, 1.0)  # even top degree
        with pytest.raises(ValidationError):
            gen_elementary(3, 2, 1.0)  # block degree out of range
        with pytest.raises(ValidationError):
            gen_elementary(3, 0, 0.0)  # not acyclic

    def test_harmonic_summand(self):
        c, g = gen_harmonic(3, 1)
        assert c.dims.dims == (0, 1, 1, 0)
        assert all(np.all(m == 0) for m in c.partial)
        validate_chirality(c, g)

    def test_direct_sum_keeps_validity(self):
        parts = [gen_elementary(3, 0, 2.0), gen_harmonic(3, 0),
                 gen_elementary(3, 1, 1.0 + 1.0j)]
        c, g = chiral_direct_sum(parts)
        c.validate()
        validate_chirality(c, g)

    def test_random_is_deterministic(self):
        a = gen_random(1234, 3)
        b = gen_random(1234, 3)
        assert a[0].dims == b[0].dims
        for m1, m2 in zip(a[0].partial, b[0].partial):
            np.testing.assert_array_equal(m1, m2)
        for m1, m2 in zip(a[1].gamma, b[1].gamma):
            np.testing.assert_array_equal(m1, m2)

    def test_random_profile_controls_acyclicity(self):
        rng = np.random.default_rng(7)
        prof = random_profile(rng, 3, acyclic=True)
        assert prof["harmonic"] == []
        c, g = gen_random(7, 3, prof)
        c.validate()
        validate_chirality(c, g)

    def test_random_unitary_chirality_is_self_adjoint(self):
        c, g = gen_random(8, 3, unitary=True)
        for j in range(4):
            np.testing.assert_allclose(g.gamma[j],
                                       g.gamma[3 - j].conj().T, atol=1e-12)


class TestDocuments:
    def test_round_trip_is_byte_identical(self):
        for seed in (1, 2, 3):
            c, g = gen_random(seed, 3)
            text = serialize_document(c, g, metadata={"seed": seed})
            c2, g2, meta = deserialize_document(text)
            assert meta == {"seed": str(seed)}
            assert serialize_document(c2, g2, metadata=meta) == text

    def test_document_is_plain_json(self):
        c, g = gen_elementary(1, 0, 2.0)
        doc = json.loads(serialize_document(c, g))
        assert doc["d"] == 1
        assert doc["dims"] == [1, 1]
        assert doc["differential"][0][0][0] == [2.0, 0.0]

    def test_chirality_is_optional(self):
        c, _ = gen_elementary(1, 0, 2.0)
        c2, g2, _ = deserialize_document(serialize_document(c))
        assert g2 is None
        assert c2.dims == c.dims

    def test_rejects_malformed_documents(self):
        with pytest.raises(ValidationError):
            deserialize_document("not json")
        with pytest.raises(ValidationError):
            deserialize_document("{}")
        with pytest.raises(ValidationError):
            deserialize_document('{"d":1,"dims":[1,1],"differential":[[[[1]]]]}')

    def test_rejects_non_finite_numbers(self):
        c, g = gen_elementary(1, 0, 2.0)
        broken = type(c)(c.dims, (np.array([[float("nan")]]),))
        with pytest.raises(ValidationError):
            serialize_document(broken, g)


@pytest.fixture
def doc_path(tmp_path):
    c, g = gen_elementary(1, 0, 2.0)
    path = tmp_path / "elementary.json"
    path.write_text(serialize_document(c, g), encoding="utf-8")
    return str(path)


class TestCli:
    def test_torsion_subcommand(self, doc_path, capsys):
        assert main(["torsion", doc_path]) == 0
        out = json.loads(capsys.readouterr().out)
        np.testing.assert_allclose(out["torsion"], [2.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(out["graded_det"], [2.0, 0.0], atol=1e-12)
        assert out["betti"] == [0, 0]

    def test_split_subcommand(self, doc_path, capsys):
        assert main(["split", doc_path, "--lambda", "1.0"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["consistent"]
        assert out["d_small"] == [0, 0]

    def test_split_boundary_exit_code(self, doc_path, capsys):
        # lambda right on the B^2 eigenvalue 4
        assert main(["split", doc_path, "--lambda", "4.0"]) == 3

    def test_malformed_document_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{", encoding="utf-8")
        assert main(["torsion", str(bad)]) == 2

    def test_missing_file_exit_code(self, tmp_path):
        assert main(["torsion", str(tmp_path / "absent.json")]) == 2

    def test_circle_subcommand(self, capsys):
        assert main(["circle", "--a", "0.25"]) == 0
        out = json.loads(capsys.readouterr().out)
        np.testing.assert_allclose(out["rho_an"], [1.0, -1.0], atol=1e-10)
        np.testing.assert_allclose(out["rs_norm_value"], 1.0, atol=1e-10)

    def test_circle_rejects_bad_holonomy(self, capsys):
        assert main(["circle", "--a", "1.5"]) == 2
        assert main(["circle", "--a", "zebra"]) == 2

    def test_selftest_subcommand(self, capsys):
        assert main(["selftest", "--cases", "2", "--seed", "1"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["passed"] is True
        assert all(chk["passed"] for chk in out["checks"])
