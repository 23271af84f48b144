import os
from pathlib import Path

import pytest

import seqc

FIXTURES = Path(os.environ.get("SEQC_FIXTURES", Path(__file__).resolve().parents[1] / "fixtures"))


def fixture(name):
    return FIXTURES / name


@pytest.fixture(scope="module")
def generic():
    return seqc.load_dsl(fixture("generic.dsl.xml"))


def test_diamond_simulates(generic):
    program = seqc.load_program(fixture("diamond.xml"), generic)
    assert program.name == "Diamond"
    assert seqc.topological_order(program) == ["A", "B", "C", "D", "E"]
    trace = seqc.simulate(program, generic)
    assert trace["makespan"] == 3
    starts = {e["action"]: e["t"] for e in trace["events"] if e["kind"] == "start"}
    assert starts == {"A": 0, "B": 0, "C": 0, "D": 1, "E": 2}
    assert seqc.simulate(program, generic, {"C": 5})["makespan"] == 6


def test_vacuum_mutex():
    dsl = seqc.load_dsl(fixture("vacuum.dsl.xml"))
    assert dsl.mutex_pairs == [("Discharge", "MoveFwd")]
    report = seqc.validate(seqc.load_program(fixture("vacuum_parallel.xml"), dsl), dsl)
    assert not report["ok"]
    assert [f["code"] for f in report["findings"]] == ["MutexViolation"]
    assert seqc.validate(seqc.load_program(fixture("vacuum_ordered.xml"), dsl), dsl)["ok"]
    with pytest.raises(seqc.SeqcError) as err:
        seqc.simulate(seqc.load_program(fixture("vacuum_parallel.xml"), dsl), dsl)
    assert err.value.code == "InvalidProgram"


def test_errors_carry_code_and_line():
    dsl = seqc.load_dsl(fixture("vacuum.dsl.xml"))
    with pytest.raises(seqc.SeqcError) as err:
        seqc.load_program(fixture("vacuum_unknown_type.xml"), dsl)
    assert err.value.code == "UnknownActionType"
    assert err.value.line == 7


def test_round_trip_and_dot(generic):
    program = seqc.load_program(fixture("diamond.xml"), generic)
    assert seqc.load_program(seqc.save_program(program), generic) == program
    assert seqc.load_dsl(seqc.save_dsl(generic)).name == "Generic"
    dot = seqc.export_dot(seqc.parse_program(fixture("diamond.xml")))
    assert dot.startswith("digraph Diamond {")
    assert dot.count(" -> ") == 5


def test_generate_nxc():
    dsl = seqc.load_dsl(fixture("nxt.dsl.xml"))
    program = seqc.load_program(fixture("braitenberg.xml"), dsl)
    out = seqc.generate(program, dsl, fixture("templates/nxc/generator.xml"))
    assert list(out["files"]) == ["Braitenberg.nxc"]
    assert out["warnings"] == []
    text = out["files"]["Braitenberg.nxc"]
    assert "leftReading = SensorUS(IN_1);" in text
    assert "OnFwd(OUT_C, leftReading);" in text
