import json

import pytest

from gammasite.cli import main
from gammasite.workspace import AxiomError, WorkspaceError, element_of, parse_workspace

Z6 = """\
truncation 3
# the running example
semiring Z6 = zmod(6)
monoid M3 = nil()
algebra A = H(Z6)
algebra S = SM(M3)
algebra Q = quotient(A, {1, 5})
"""

BLOCK = """\
semiring K
  elements 0 1 a
  zero 0
  one 1
  add
    0 1 a
    1 a 0
    a 0 1
  mul
    0 0 0
    0 1 a
    0 a 1
end
algebra HK = H(K)
"""

BAD_DISTRIBUTIVE = """\
semiring K
  elements 0 1 a
  zero 0
  one 1
  add
    0 1 a
    1 1 1
    a 1 a
  mul
    0 0 0
    0 1 a
    0 a 1
end
"""


def run(capsys, tmp_path, text, *argv):
    ws = tmp_path / "w.ws"
    ws.write_text(text)
    code = main(["-w", str(ws), *argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_named_constructors():
    ws = parse_workspace(Z6)
    assert ws.truncation == 3
    assert set(ws.algebras) == {"A", "S", "Q"}
    assert element_of(ws.algebra("Q"), "5") == (1,)


def test_parse_block_semiring():
    ws = parse_workspace(BLOCK)
    K = ws.semirings["K"]
    assert K.size == 3 and K.add[1][1] == 2
    assert len(ws.algebra("HK").level(2)) == 9


def test_axiom_violation_names_cell():
    with pytest.raises(AxiomError) as e:
        parse_workspace(BAD_DISTRIBUTIVE)
    assert e.value.axiom == "distributivity" and len(e.value.cell) == 3 and e.value.line == 1


@pytest.mark.parametrize("text", [
    "algebra A = H(Nope)\n",
    "semiring Z6 = zmod(6)\nalgebra A = H(Z6)\nalgebra Q = quotient(A, {1, 7})\n",
    "semiring K\n elements 0 1\n zero 0\n one 1\n",
    "frobnicate 3\n",
    "truncation zero\n",
])
def test_parse_errors(text):
    with pytest.raises(WorkspaceError) as e:
        parse_workspace(text)
    assert e.value.line is not None


def test_cover_command(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, Z6, "cover", "A", "--target", "1", "--family", "2,3")
    assert code == 0
    rep = json.loads(out)
    assert rep["verdict"] == "COVER" and rep["schema"] == 1
    assert rep["witness"]["partitions"][0]["xi"] == "(4,3)"


def test_output_is_deterministic(capsys, tmp_path):
    _, first, _ = run(capsys, tmp_path, Z6, "spectrum", "A")
    _, second, _ = run(capsys, tmp_path, Z6, "spectrum", "A")
    assert first == second
    rep = json.loads(first)
    assert len(rep["objects"]) == 4
    assert rep["sections_level1"] == {"(0)": 1, "(1)": 6, "(2)": 3, "(3)": 2}
    assert all(rep["eta_injective"].values())


def test_points_and_localize(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, Z6, "points", "A")
    assert code == 0 and len(json.loads(out)["points"]) == 2
    code, out, _ = run(capsys, tmp_path, Z6, "localize", "A", "--set", "1,2,4")
    assert code == 0 and json.loads(out)["level_sizes"] == {"1": 3, "2": 9, "3": 27}


def test_sheaf_check_command(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, Z6, "sheaf-check", "Q", "--level", "1")
    assert code == 0 and json.loads(out)["is_sheaf"]


def test_dot_and_out_files(capsys, tmp_path):
    dot, js = tmp_path / "a.dot", tmp_path / "a.json"
    code, out, _ = run(capsys, tmp_path, Z6, "spectrum", "S", "--dot", str(dot), "--out", str(js))
    assert code == 0 and out == ""
    assert dot.read_text().startswith('digraph "S"')
    assert json.loads(js.read_text())["command"] == "spectrum"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, tmp_path, BAD_DISTRIBUTIVE, "validate", "K")[0] == 1
    assert run(capsys, tmp_path, "algebra A = H(Q7)\n", "points", "A")[0] == 2
    assert run(capsys, tmp_path, Z6, "points", "Missing")[0] == 2
    code, _, err = run(capsys, tmp_path, Z6, "cover", "S", "--target", "1", "--family", "1",
                       "--strategy", "semiring")
    assert code == 1 and "error" in err
    with pytest.raises(SystemExit) as e:
        main(["cover", "A"])
    assert e.value.code == 2


def test_tv_check_command(capsys):
    code = main(["tv-check", "--field", "F3"])
    rep = json.loads(capsys.readouterr().out)
    assert code == 0 and rep["pushout"]["ok"]
    assert rep["sizes"] == {"A_prime": 5, "apex": 2}
    assert rep["not_faithful"][0]["differs_from_identity"]
    assert main(["tv-check", "--field", "Z4"]) == 1
