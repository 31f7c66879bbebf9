import json

import pytest

from fibsift.certificates import (
    SCHEMA_VERSION, SieveCertificate, read_certificates, validate, write_certificates,
)
from fibsift.errors import SchemaError
from fibsift.galois_sieve import three_curve_certificate
from fibsift.kraus import kraus_criterion


@pytest.fixture
def cert_file(tmp_path):
    certs = [kraus_criterion(p, m0) for p in (7, 11, 13) for m0 in (2, -2, -1)]
    certs.append(three_curve_certificate(-1))
    path = tmp_path / "certs.jsonl"
    write_certificates(path, certs)
    return path


def test_roundtrip(cert_file):
    certs = read_certificates(cert_file)
    assert len(certs) == 10
    again = cert_file.with_name("again.jsonl")
    write_certificates(again, certs)
    assert again.read_text() == cert_file.read_text()


def test_integers_are_strings(cert_file):
    rec = json.loads(cert_file.read_text().splitlines()[0])
    assert rec["schema_version"] == SCHEMA_VERSION
    assert isinstance(rec["p"], str)
    assert isinstance(rec["witnesses"][0]["q"], str)


def test_big_integers_survive(tmp_path):
    big = 7 * 10**5000 + 3
    c = SieveCertificate("kraus", 7, None, 2, [{"x": big}], "eliminated")
    path = tmp_path / "big.jsonl"
    write_certificates(path, [c])
    (back,) = read_certificates(path)
    assert back.witnesses[0]["x"] == big


def test_dedup(tmp_path):
    c = kraus_criterion(7, 2)
    path = tmp_path / "d.jsonl"
    assert write_certificates(path, [c, c]) == 1


def test_untampered_validates(cert_file):
    rep = validate(cert_file)
    assert rep.total == 10 and rep.ok and not rep.warnings


def test_single_flip_detected(cert_file):
    lines = cert_file.read_text().splitlines()
    rec = json.loads(lines[4])
    w = rec["witnesses"][0]
    w["a1"] = str(int(w["a1"]) + 1)
    lines[4] = json.dumps(rec, sort_keys=True)
    cert_file.write_text("\n".join(lines) + "\n")
    rep = validate(cert_file)
    assert [i for i, _ in rep.mismatches] == [4]


def test_version_skew_warns(cert_file):
    lines = cert_file.read_text().splitlines()
    rec = json.loads(lines[0])
    rec["code_version"] = "0.0.1"
    lines[0] = json.dumps(rec, sort_keys=True)
    cert_file.write_text("\n".join(lines) + "\n")
    rep = validate(cert_file)
    assert rep.ok
    assert any("0.0.1" in w for w in rep.warnings)


def test_schema_errors(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{not json\n")
    with pytest.raises(SchemaError):
        read_certificates(bad)
    bad.write_text(json.dumps({"kind": "kraus"}) + "\n")
    with pytest.raises(SchemaError):
        read_certificates(bad)


def test_unknown_kind_rejected():
    c = SieveCertificate("mystery", 1, None, None, [], "eliminated")
    with pytest.raises(SchemaError):
        validate([c])
