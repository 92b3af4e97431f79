"""Tests for JSON documents, MPS export and atomic file writes."""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import pytest

from alopt.data import Instance, Provenance
from alopt.exceptions import DocumentError, ModelFormatError, StorageError
from alopt.model import ConstraintSystem, build_constraints, center_of_gravity
from alopt.storage import (
    instance_digest,
    load_instance,
    load_solution,
    load_system,
    parse_mps,
    read_instance,
    read_json,
    save_instance,
    save_mps,
    save_solution,
    save_system,
    write_instance,
    write_json,
    write_mps,
)
from alopt.storage.files import dump_json, write_text
from alopt.storage.mps import format_number, parse_row_name
from alopt.types import Assignment, Payload, ShearLimit
from tests.helpers import payload_of, small_aircraft


class TestFiles:
    """Tests for atomic local writes."""

    def test_write_leaves_no_temp_file(self, workdir: Path) -> None:
        """Test the temp file is renamed into place."""
        target = write_text(workdir / "nested" / "a.txt", "hello")
        assert target.read_text() == "hello"
        assert not (workdir / "nested" / "a.txt.tmp").exists()

    def test_canonical_json(self) -> None:
        """Test two-space indent and a trailing newline."""
        assert dump_json({"a": [1]}) == '{\n  "a": [\n    1\n  ]\n}\n'

    def test_read_missing_file(self, workdir: Path) -> None:
        """Test a missing file raises StorageError."""
        with pytest.raises(StorageError) as info:
            read_json(workdir / "missing.json")
        assert info.value.operation == "read"

    def test_invalid_json(self, workdir: Path) -> None:
        """Test malformed JSON raises DocumentError at the root path."""
        (workdir / "bad.json").write_text("{not json")
        with pytest.raises(DocumentError) as info:
            read_json(workdir / "bad.json")
        assert info.value.path == "$"


class TestInstanceDocuments:
    """Tests for instance JSON."""

    def test_reference_round_trip(self, reference_instance: Instance, workdir: Path) -> None:
        """Test write, read, write gives identical bytes."""
        first = write_instance(workdir / "a.json", reference_instance)
        loaded = read_instance(first)
        second = write_instance(workdir / "b.json", loaded)
        assert first.read_bytes() == second.read_bytes()
        assert loaded.spec == reference_instance.spec
        assert loaded.payload == reference_instance.payload

    def test_generated_round_trip(self, generated_instance: Instance, workdir: Path) -> None:
        """Test the seed and generator config survive."""
        first = write_instance(workdir / "g.json", generated_instance)
        loaded = read_instance(first)
        assert loaded.provenance.seed == 7
        assert loaded.provenance.config == generated_instance.provenance.config
        assert write_instance(workdir / "g2.json", loaded).read_bytes() == first.read_bytes()

    def test_table_shear_round_trip(self) -> None:
        """Test a table shear curve is kept."""
        spec = small_aircraft(4, shear_limit=ShearLimit(peak=9000, shape="table", left=(3000, 9000), right=(2500, 8000)))
        instance = Instance(spec, payload_of((1, 1, 100)), Provenance("file"))
        assert load_instance(save_instance(instance)).spec == spec

    def test_bad_mass_names_path(self, reference_instance: Instance) -> None:
        """Test a non-integer mass is reported at its JSON path."""
        document = save_instance(reference_instance)
        document["containers"][3]["mass"] = "heavy"
        with pytest.raises(DocumentError) as info:
            load_instance(document)
        assert info.value.path == "containers[3].mass"

    def test_unknown_field(self, reference_instance: Instance) -> None:
        """Test unknown fields are rejected."""
        document = save_instance(reference_instance)
        document["aircraft"]["wingspan"] = 60
        with pytest.raises(DocumentError, match="aircraft.wingspan"):
            load_instance(document)

    def test_missing_field(self, reference_instance: Instance) -> None:
        """Test missing fields are rejected."""
        document = save_instance(reference_instance)
        del document["aircraft"]["max_payload"]
        with pytest.raises(DocumentError, match="aircraft.max_payload"):
            load_instance(document)

    def test_wrong_schema(self, reference_instance: Instance) -> None:
        """Test a document with another schema tag is rejected."""
        document = save_instance(reference_instance)
        document["schema"] = "alopt.instance/0"
        with pytest.raises(DocumentError, match="schema"):
            load_instance(document)

    def test_invalid_value_wrapped(self, reference_instance: Instance) -> None:
        """Test domain validation failures surface as DocumentError."""
        document = save_instance(reference_instance)
        document["containers"][0]["size"] = 4
        with pytest.raises(DocumentError) as info:
            load_instance(document)
        assert info.value.path == "containers[0]"

    def test_digest_tracks_content(self, reference_instance: Instance) -> None:
        """Test the digest changes when a mass changes."""
        document = save_instance(reference_instance)
        document["containers"][0]["mass"] += 1
        assert instance_digest(load_instance(document)) != instance_digest(reference_instance)


class TestSolutionDocuments:
    """Tests for solution JSON."""

    def test_round_trip(self, reference_instance: Instance) -> None:
        """Test placements, mass and derived physics are written and read back."""
        assignment = Assignment.from_placements({1: 3, 21: 10})
        document = save_solution(reference_instance, assignment, status="tau_reached", trace=[(0.5, 3934)])
        assert document["mass"] == 2134 + 1800
        assert document["placements"] == [[1, 3], [21, 10]]
        assert len(document["shear"]) == 20
        assert Fraction(document["cg_exact"]) == center_of_gravity(
            assignment, reference_instance.spec, reference_instance.payload
        )
        loaded = load_solution(json.loads(json.dumps(document)))
        assert loaded.assignment == assignment
        assert loaded.digest == instance_digest(reference_instance)
        assert loaded.status == "tau_reached"

    def test_bad_placement(self, reference_instance: Instance) -> None:
        """Test a malformed placement pair names its path."""
        document = save_solution(reference_instance, Assignment.empty(), status="optimal")
        document["placements"] = [[1]]
        with pytest.raises(DocumentError) as info:
            load_solution(document)
        assert info.value.path == "placements[0]"


class TestSystemDocuments:
    """Tests for the exact JSON form of a constraint system."""

    def test_round_trip(self, reference_system: ConstraintSystem) -> None:
        """Test the exact system survives JSON."""
        document = json.loads(json.dumps(save_system(reference_system)))
        assert load_system(document) == reference_system

    def test_unknown_tag(self, tiny_instance: Instance) -> None:
        """Test an unknown row tag is rejected."""
        document = save_system(build_constraints(tiny_instance.spec, tiny_instance.payload))
        document["rows"][0]["tag"] = "gravity"
        with pytest.raises(DocumentError, match=r"rows\[0\].tag"):
            load_system(document)


class TestMps:
    """Tests for MPS export and import."""

    def test_reference_round_trip(self, reference_system: ConstraintSystem) -> None:
        """Test parse(write(system)) restores the exact system."""
        assert parse_mps(write_mps(reference_system)) == reference_system

    def test_mixed_sizes_round_trip(self) -> None:
        """Test sizes are recovered from the bin rows."""
        payload = payload_of((1, 1, 1200), (2, 2, 700), (3, 3, 4000), (4, 2, 650))
        system = build_constraints(small_aircraft(5), payload)
        restored = parse_mps(write_mps(system))
        assert [c.size for c in restored.variables.containers] == [1, 2, 2, 3]
        assert restored == system

    def test_text_is_stable(self, reference_system: ConstraintSystem, workdir: Path) -> None:
        """Test write, parse, write gives identical text."""
        text = write_mps(reference_system)
        assert write_mps(parse_mps(text)) == text
        path = save_mps(workdir / "ref.mps", reference_system)
        assert path.read_text() == text

    def test_sections_and_markers(self, reference_system: ConstraintSystem) -> None:
        """Test the writer emits binary markers and bounds."""
        lines = write_mps(reference_system, "REF").splitlines()
        assert lines[0] == "NAME          REF"
        assert " N  OBJ" in lines
        assert any("'INTORG'" in line for line in lines)
        assert any("'INTEND'" in line for line in lines)
        assert sum(1 for line in lines if line.startswith(" BV ")) == 600
        assert lines[-1] == "ENDATA"

    def test_empty_payload_refused(self) -> None:
        """Test a system without columns is not exported."""
        system = build_constraints(small_aircraft(4), Payload())
        with pytest.raises(ModelFormatError, match="no binary columns"):
            write_mps(system)

    def test_unknown_row_name(self) -> None:
        """Test unrecognized row names are rejected."""
        with pytest.raises(ModelFormatError):
            parse_row_name("FOO_1")
        assert parse_row_name("SHR_3") == ("shear_right", 3)
        assert parse_row_name("CGWU") == ("cg_window", 1)

    def test_number_format(self) -> None:
        """Test 12 significant digits and no negative zero."""
        assert format_number(Fraction(-1440.45)) == "-1440.45"
        assert format_number(Fraction(0)) == "0"
        assert format_number(Fraction(1, 2)) == "0.5"

    def test_unsupported_section(self) -> None:
        """Test sections other than the written ones are rejected."""
        with pytest.raises(ModelFormatError, match="RANGES"):
            parse_mps("NAME X\nROWS\n N  OBJ\nRANGES\n R1 1\nENDATA\n")


def _document(path: Path) -> Any:
    return json.loads(path.read_text())


def test_write_json_returns_path(workdir: Path) -> None:
    """Test write_json returns the written path."""
    path = write_json(workdir / "x.json", {"k": 1})
    assert _document(path) == {"k": 1}
