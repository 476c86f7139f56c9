import json
import subprocess
import sys
from importlib import resources

import pytest

from crntrans.cli import main, parse_assignments
from crntrans.corpus import load_example
from crntrans.errors import ParseError
from crntrans.translation import serialize_translation, translation_from_shifts

DATA = resources.files("crntrans").joinpath("data")


def path(name: str) -> str:
    return str(DATA.joinpath(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def leaves(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from leaves(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from leaves(v)
    else:
        yield obj


@pytest.fixture
def sf_files(tmp_path):
    rates = "\n".join(f"k{i} = {i % 4 + 1}/2" for i in range(1, 15))
    x0 = "XD = 1\nX = 1\nXT = 1\nXp = 1\nY = 3\nXpY = 1\nYp = 1\nXTYp = 1\nXDYp = 1\n"
    return write(tmp_path, "rates.txt", rates), write(tmp_path, "x0.txt", x0)


def test_analyze_futile_cycle(capsys):
    code, out, _ = run(capsys, "analyze", path("futile_cycle.crn"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "crntrans-report/1"
    assert doc["network"]["deficiency"] == 1
    assert [g["kind"] for g in doc["generators"]].count("stoichiometric") == 1
    assert len(doc["generators"]) == 3


def test_global_flags_after_subcommand(capsys):
    code, out, _ = run(capsys, "analyze", "--json", path("lotka_volterra.crn"), "--seed", "4")
    assert code == 0
    assert json.loads(out)["options"]["seed"] == 4


def test_json_is_byte_identical(capsys):
    argv = ["translate", path("shinar_feinberg.crn"), "--show", "2", "--json"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "network38.crn"],
        ["translate", "futile_cycle.crn", "--show", "1"],
        ["tree-constants", "two_cycle.crn"],
    ],
)
def test_text_and_json_carry_the_same_values(capsys, argv):
    argv = [argv[0], path(argv[1]), *argv[2:]]
    _, text, _ = run(capsys, *argv)
    _, js, _ = run(capsys, *argv, "--json")
    doc = json.loads(js)
    doc.pop("schema")
    for v in leaves(doc):
        if isinstance(v, bool) or v is None or v == "":
            continue
        assert str(v) in text, v


def test_translate_search_and_supplied(capsys):
    code, out, _ = run(capsys, "translate", path("futile_cycle.crn"), "--search", "--show", "1", "--json")
    assert code == 0
    best = json.loads(out)["candidates"][0]
    assert best["proper"] and best["strong"] and best["deficiency"] == 0
    code, out, _ = run(capsys, "translate", path("shinar_feinberg.crn"), "--translation", path("sf_translation.txt"),
                       "--json")
    assert code == 0
    tr = json.loads(out)["translation"]
    assert not tr["proper"] and tr["improper_reactions"] == ["R12"]
    assert tr["resolvability"]["strongly_resolvable"]
    assert tr["resolvability"]["adjustment_factors"]["R12"] == "(k2*k4 + k2*k5)/(k1*k3)"


def test_translate_budget_exhausted(capsys):
    code, _, err = run(capsys, "translate", path("futile_cycle.crn"), "--max-candidates", "0")
    assert code == 4 and "no strong" in err


def test_tree_constants_with_rates(capsys, tmp_path):
    rates = write(tmp_path, "r.txt", "k1 = 2\nk2 = 3/2\n")
    code, out, _ = run(capsys, "tree-constants", path("two_cycle.crn"), "--rates", rates, "--json")
    assert code == 0
    rows = json.loads(out)["tree_constants"]
    assert [r["value"] for r in rows] == ["3/2", "2"]


def test_steady_states_symbolic(capsys):
    code, out, _ = run(capsys, "steady-states", path("futile_cycle.crn"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["binomials"]["symbolic"]) == 3
    uniq = doc["sign_conditions"]["uniqueness"]
    assert uniq["hypothesis_holds"] is False and uniq["witness"] == "(0,+,-,+,0,0)"
    assert doc["sign_conditions"]["multistationarity"]["hypothesis_holds"] is False


def test_steady_states_solve_shinar_feinberg(capsys, sf_files):
    rates, x0 = sf_files
    code, out, _ = run(capsys, "steady-states", path("shinar_feinberg.crn"), "--translation", path("sf_translation.txt"),
                       "--rates", rates, "--x0", x0, "--solve", "--anchor", "XD + 2 XT + Y", "--json")
    assert code == 0, out
    doc = json.loads(out)
    assert len(doc["binomials"]["numeric"]) == 7
    state = doc["steady_state"]
    assert state["relative_residual"] < 1e-9
    assert state["complex_balanced_translated"]


def test_sign_cap_is_reported_not_fatal(capsys):
    code, out, _ = run(capsys, "steady-states", path("futile_cycle.crn"), "--sign-dim-cap", "3", "--json")
    assert code == 0
    assert json.loads(out)["sign_conditions"]["note"].startswith("skipped")


def test_verify(capsys, tmp_path):
    rates = write(tmp_path, "r.txt", "k1 = 1\nk2 = 1\n")
    good = write(tmp_path, "x.txt", "A = 1\nB = 1\n")
    bad = write(tmp_path, "y.txt", "A = 2\nB = 1\n")
    code, out, _ = run(capsys, "verify", path("two_cycle.crn"), "--rates", rates, "--state", good, "--json")
    assert code == 0 and json.loads(out)["verification"]["residual_inf"] == 0
    code, out, _ = run(capsys, "verify", path("two_cycle.crn"), "--rates", rates, "--state", bad, "--json")
    assert json.loads(out)["verification"]["residual_inf"] > 0


def test_usage_errors(capsys, sf_files):
    rates, _ = sf_files
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", path("futile_cycle.crn")])
    assert exc.value.code == 1
    code, _, err = run(capsys, "steady-states", path("shinar_feinberg.crn"), "--rates", rates, "--solve")
    assert code == 1 and "--x0" in err
    code, _, _ = run(capsys, "analyze", "/nonexistent/net.crn")
    assert code == 1
    code, _, _ = run(capsys, "steady-states", path("futile_cycle.crn"), "--anchor", "Q")
    assert code == 1


def test_parse_errors(capsys, tmp_path):
    bad = write(tmp_path, "bad.crn", "A -> B ; k1\nA -> ; \n")
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2 and "line 2" in err
    rates = write(tmp_path, "r.txt", "k1 = 1\n")
    code, _, err = run(capsys, "tree-constants", path("two_cycle.crn"), "--rates", rates)
    assert code == 2 and "k2" in err
    broken = write(tmp_path, "t.txt", "shift 1, 2: nonsense\n")
    code, _, _ = run(capsys, "translate", path("futile_cycle.crn"), "--translation", broken)
    assert code == 2


def test_cap_exceeded(capsys, tmp_path):
    chain = "".join(f"A{i} <-> A{i + 1} ; a{i}, b{i}\n" for i in range(12))
    code, _, err = run(capsys, "tree-constants", write(tmp_path, "chain.crn", chain))
    assert code == 3 and "limit" in err


def test_hypothesis_failures(capsys, tmp_path):
    code, _, _ = run(capsys, "tree-constants", path("futile_cycle.crn"))
    assert code == 5
    fc = load_example("futile_cycle")
    t, _ = translation_from_shifts(fc, [(0,) * fc.m] * len(fc.reactions))
    ident = write(tmp_path, "id.txt", serialize_translation(t))
    code, _, err = run(capsys, "steady-states", path("futile_cycle.crn"), "--translation", ident)
    assert code == 5 and "hypothesis" in err


def test_parse_assignments():
    assert parse_assignments("a = 1/2  # half\n\nb = 0.25\n") == {"a": 0.5, "b": 0.25}
    with pytest.raises(ParseError, match="twice"):
        parse_assignments("a = 1\na = 2\n")
    with pytest.raises(ParseError):
        parse_assignments("a = x\n")


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "crntrans.cli", "analyze", path("two_cycle.crn")],
                         capture_output=True, text=True, check=True)
    assert "deficiency: 0" in out.stdout
