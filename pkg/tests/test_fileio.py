import json

import numpy as np
import pytest

from uebk import constructors as C
from uebk import fileio
from uebk import lifting as L
from uebk import states as st
from uebk import verifier as V
from uebk.errors import InvalidBasisFile, ParseError


def same_candidate(a, b):
    assert a.dims == b.dims and a.k == b.k and a.n == b.n
    assert a.claimed_special == b.claimed_special
    assert np.array_equal(a.matrix(), b.matrix())


def test_serialize_two_qubit_basis():
    b = C.EXAMPLES["eq6"]()
    obj = json.loads(fileio.serialize(b))
    assert obj["dims"] == [2, 2] and obj["k"] == 2 and len(obj["members"]) == 3
    assert list(obj)[:6] == ["format_version", "dims", "k", "special", "members", "provenance"]


def test_empty_provenance_is_kept():
    b = C.BasisCandidate((2, 2), 1, [st.basis_state((2, 2), (0, 0))])
    obj = json.loads(fileio.serialize(b))
    assert obj["provenance"] == {}


@pytest.mark.parametrize(
    "make",
    [
        lambda: C.EXAMPLES["eq9"](),
        lambda: C.EXAMPLES["umeb23"](),
        lambda: C.construct_bipartite_uebk(4, 5, 3, rng=3),
        lambda: L.lift_uebk(C.EXAMPLES["eq14"](), 3),
        lambda: C.suebk_tripartite(3, 5, 2, 2),
        lambda: L.lift_upb(C.EXAMPLES["pyramid"](), 2),
    ],
)
def test_round_trip_is_exact(make):
    b = make()
    data = fileio.serialize(b)
    back, report = fileio.parse(data)
    assert report is None
    same_candidate(b, back)
    assert fileio.serialize(back) == data
    if b.forms is not None:
        for f, g in zip(b.forms, back.forms):
            assert np.array_equal(f.coefficients, g.coefficients)
            for x, y in zip(f.frames, g.frames):
                assert np.array_equal(x, y)


def test_round_trip_with_report():
    b = C.EXAMPLES["eq14"]()
    report = V.verify(b)
    data = fileio.serialize(b, report)
    back, summary = fileio.parse(data)
    assert summary["unextendibility"] == "Certified" and summary["exit_code"] == 0
    assert fileio.serialize(back, report) == data


def test_parse_rejects_invalid_basis():
    obj = json.loads(fileio.serialize(C.EXAMPLES["eq6"]()))
    obj["k"] = 3
    with pytest.raises(InvalidBasisFile):
        fileio.parse(json.dumps(obj))
    obj["k"] = 2
    obj["members"] = obj["members"] * 2
    with pytest.raises(InvalidBasisFile):
        fileio.parse(json.dumps(obj))


def test_parse_errors_carry_positions():
    data = fileio.serialize(C.EXAMPLES["eq6"]())
    with pytest.raises(ParseError) as exc:
        fileio.parse(data[: len(data) // 2])
    assert isinstance(exc.value.position, int)
    obj = json.loads(data)
    obj["members"][1] = obj["members"][1][:-1]
    with pytest.raises(ParseError) as exc:
        fileio.parse(json.dumps(obj))
    assert exc.value.position == "$.members[1]"
    obj = json.loads(data)
    obj["members"][0][2] = [1.0]
    with pytest.raises(ParseError) as exc:
        fileio.parse(json.dumps(obj))
    assert exc.value.position == "$.members[0][2]"
    for key in ("dims", "k", "members", "format_version"):
        obj = json.loads(data)
        del obj[key]
        with pytest.raises(ParseError):
            fileio.parse(json.dumps(obj))
    with pytest.raises(ParseError):
        fileio.parse(b"[1, 2]")
    with pytest.raises(ParseError):
        fileio.parse(b"\xff\xfe")


def test_files_on_disk(tmp_path):
    b = C.EXAMPLES["tiles"]()
    path = tmp_path / "tiles.json"
    fileio.write_basis(path, b)
    back, _ = fileio.read_basis(path)
    same_candidate(b, back)
    assert back.provenance["known_upb"] == "TILES"
