import io

import pytest

from dlattice import suites
from dlattice.cli import main
from dlattice.graph_core import MultiGraph, whitney_switch

TRIANGLE = "v 3\ne 0 1\ne 1 2\ne 2 0\n"
THETA = "v 2\ne 0 1\ne 0 1\ne 0 1\n"
TREE = "v 3\ne 0 1\ne 1 2\n"
TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)\n"
FIGURE_EIGHT = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def graph_text(g: MultiGraph) -> str:
    return f"v {g.vertex_count}\n" + "".join(f"e {u} {v}\n" for u, v in g.ends)


# --- dinv ---------------------------------------------------------------------------------

def test_dinv_triangle(write):
    code, text = run("dinv", write("t.txt", TRIANGLE))
    assert code == 0
    values = [line.split()[-1] for line in text.splitlines() if not line.startswith("#")]
    assert sorted(values[-3:]) == ["-1/6", "-1/6", "1/2"]


def test_dinv_tree_is_trivial(write):
    code, text = run("--format", "records", "dinv", write("tree.txt", TREE))
    assert code == 0
    assert text.splitlines() == ["kind: dinvariant", "rank: 0", "factors: ", "class[]: 0/1"]


def test_dinv_methods_byte_identical(write):
    path = write("theta.txt", THETA)
    for fmt in ("text", "records"):
        a = run("--format", fmt, "dinv", path, "--method", "cvp")
        b = run("--format", fmt, "dinv", path, "--method", "orientations")
        assert a == b and a[0] == 0
        c = run("--format", fmt, "dinv", path, "--lattice", "cut", "--method", "cvp")
        d = run("--format", fmt, "dinv", path, "--lattice", "cut", "--method", "orientations")
        assert c == d and c[0] == 0


def test_dinv_errors(write, tmp_path, capsys):
    assert run("dinv", write("bad.txt", "v 2\ne 0 7\n"))[0] == 2
    assert "line 2" in capsys.readouterr().err
    assert run("dinv", str(tmp_path / "missing.txt"))[0] == 2
    assert run("dinv", write("split.txt", "v 2\n"))[0] == 2
    many = "v 2\n" + "e 0 1\n" * 25
    assert run("dinv", write("many.txt", many), "--method", "orientations")[0] == 3


# --- compare ------------------------------------------------------------------------------

def test_compare_self_and_distinct(write):
    tri = write("t.txt", TRIANGLE)
    code, text = run("compare", tri, tri)
    lines = text.splitlines()
    assert code == 0 and lines[0] == "EQUIVALENT"
    assert sorted(line.split()[1] for line in lines[1:]) == ["0", "1", "2"]
    code, text = run("compare", tri, write("theta.txt", THETA))
    assert code == 1
    assert text.splitlines() == ["DISTINCT", "failed stage: d-multisets"]


def test_compare_switch_pair(write):
    g = MultiGraph(5, ((0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 1)))
    h = whitney_switch(g, [2, 3, 4], 0, 1)
    code, text = run("--format", "records", "compare", write("g.txt", graph_text(g)),
                     write("h.txt", graph_text(h)))
    lines = text.splitlines()
    assert code == 0 and lines[0] == "verdict: EQUIVALENT"
    assert len([line for line in lines if line.startswith("map: ")]) == 6


# --- mutant -------------------------------------------------------------------------------

def test_mutant_verdicts(write):
    t = write("trefoil.pd", TREFOIL)
    code, text = run("mutant", t, t)
    assert code == 0 and text.splitlines()[0] == "MUTANTS"
    assert "# crossings: 3 3" in text and "# checkerboard:" in text
    code, text = run("mutant", t, write("fig8.pd", FIGURE_EIGHT))
    assert code == 1 and text.splitlines()[0] == "NOT MUTANTS"
    assert "failed stage: disc groups" in text


def test_mutant_two_bridge_input_and_reversal(write):
    code, text = run("--format", "records", "mutant", write("a.tb", "tb k=1 E=2 F=1,3\n"),
                     write("b.tb", "tb k=1 E=2 F=3,1\n"))
    assert code == 0 and "verdict: MUTANTS" in text and "crossings: 6 6" in text


def test_mutant_reduce_flag(write):
    kinked = write("kink.pd", "X(3,8,4,1) X(7,2,8,3) X(1,4,2,5) X(5,7,6,6)\n")
    t = write("trefoil.pd", TREFOIL)
    assert run("mutant", kinked, t)[0] == 2
    assert run("mutant", "--reduce", kinked, t)[0] == 0
    assert run("mutant", write("bad.pd", "X(1,2,3,4)"), t)[0] == 2


# --- selftest -----------------------------------------------------------------------------

def test_selftest_small_scale_passes():
    code, text = run("selftest", "--max-edges", "3")
    assert code == 0
    assert all(line.startswith("PASS ") for line in text.splitlines())
    assert len(text.splitlines()) == 10


def test_selftest_is_independent_of_jobs():
    assert run("--jobs", "2", "selftest", "--max-edges", "3") == run("selftest", "--max-edges", "3")


def test_selftest_rejects_scale():
    assert run("selftest", "--max-edges", "7")[0] == 2


def test_selftest_negative_control(monkeypatch):
    real = suites.find_torsor_iso
    monkeypatch.setattr(suites, "find_torsor_iso", lambda a, b, sign=1, **kw: real(a, b, -sign, **kw))
    code, text = run("selftest", "--max-edges", "3")
    assert code == 1
    assert text.splitlines()[0].startswith("FAIL theorem")
