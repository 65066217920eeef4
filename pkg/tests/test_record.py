"""Tests for construction record serialization, hashing, and re-verification."""

import json

import pytest

from endperiodic import (
    InvalidInputError,
    VerificationError,
    build_record,
    load_record,
    verify_record,
)
from endperiodic.record import SCHEMA_VERSION

from conftest import RUNNING_ROWS


@pytest.fixture(scope="module")
def running_record(running_matrix):
    record, _ = build_record(running_matrix)
    return record


class TestDeterminism:
    def test_repeated_builds_hash_identically(self, running_matrix):
        first, _ = build_record(running_matrix)
        second, _ = build_record(running_matrix)
        assert first.content_hash() == second.content_hash()

    def test_hash_excludes_timestamp(self, running_record):
        data = json.loads(running_record.to_json())
        mutated = dict(data)
        mutated["created_at"] = "1970-01-01T00:00:00+00:00"
        reloaded = load_record(json.dumps(mutated))
        assert reloaded["content_hash"] == data["content_hash"]
        assert data["created_at"] != mutated["created_at"]

    def test_json_is_sorted_and_stable(self, running_record):
        text = running_record.to_json()
        data = json.loads(text)
        assert list(data) == sorted(data)
        assert json.loads(running_record.to_json()) == data


class TestVerifyRecord:
    def test_fresh_record_verifies(self, running_record):
        data = load_record(running_record.to_json())
        results = verify_record(data)
        assert results and all(ok for _, ok, _ in results)
        names = [name for name, _, _ in results]
        assert "eigendata" in names
        assert "incidence" in names

    def test_mutated_section_fails_with_name(self, running_record):
        data = load_record(running_record.to_json())
        data["sections"]["eigendata"]["lambda"] = "2.0"
        with pytest.raises(VerificationError) as exc:
            verify_record(data)
        assert "eigendata" in str(exc.value)

    def test_mutated_hash_fails(self, running_record):
        data = load_record(running_record.to_json())
        data["content_hash"] = "0" * 64
        with pytest.raises(VerificationError):
            verify_record(data)


class TestLoadRecord:
    def test_version_gate(self, running_record):
        data = json.loads(running_record.to_json())
        data["schema_version"] = "0"
        with pytest.raises(InvalidInputError):
            load_record(json.dumps(data))

    def test_embedded_config_round_trips(self, running_record):
        data = load_record(running_record.to_json())
        assert data["schema_version"] == SCHEMA_VERSION
        assert data["config"]["matrix"] == RUNNING_ROWS
