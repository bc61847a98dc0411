import json
from importlib.resources import files

import pytest

from torsorlab import cli
from torsorlab.cycles import torsor_class
from torsorlab.errors import IdentityViolation, ValidationError
from torsorlab.models import random_joint_models, scenario_rng
from torsorlab.suite import class_record
from torsorlab.scenario import ParseError, build, dumps, model_to_file, parse, parse_file

DATA = files("torsorlab") / "data"
SHIPPED = sorted(p.name for p in DATA.iterdir() if not p.name.startswith("_"))


def path(name):
    return str(DATA / name)


def test_empty_file():
    with pytest.raises(ParseError, match=r"missing \[group\]"):
        parse("")
    with pytest.raises(ParseError, match=r"missing \[group\]"):
        parse("# only a comment\n")


@pytest.mark.parametrize(
    "text,line",
    [
        ("[group]\nkind = cyclic\norder = 2\n[bogus]\n", 4),
        ("[group]\nkind = cyclic\ncolour = red\n", 3),
        ("[group]\nkind = cyclic\norder = two\n", 3),
        ("[group]\nkind = cyclic\norder = 2\n[gset S]\nsize = 3\nimages.0 = 1 0\n", 6),
        ("[group]\nkind = cyclic\norder = 2\n[module M]\nrank = 2\naction.0 = 1 0\n", 6),
        ("[group]\nkind = cyclic\norder = 2\n[group]\nkind = cyclic\norder = 2\n", 4),
    ],
)
def test_parse_errors_have_positions(text, line):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line == line
    assert err.value.column is not None


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_round_trip(name):
    sf = parse_file(path(name))
    assert parse(dumps(sf)) == sf
    build(sf)


def test_random_models_round_trip():
    for i in range(30):
        (m,) = random_joint_models(scenario_rng(99, i), count=1)
        sf = model_to_file(m)
        assert parse(dumps(sf)) == sf
        rebuilt = build(parse(dumps(sf))).model
        assert [v.coords for v in rebuilt.pointmap] == [v.coords for v in m.pointmap]
        assert class_record(torsor_class(rebuilt)) == class_record(torsor_class(m))


def test_validation_errors_name_invariant():
    text = (
        "[group]\nkind = cyclic\norder = 2\n"
        "[module M]\nrank = 1\naction.0 = 2\n"
    )
    with pytest.raises(ValidationError) as err:
        build(parse(text))
    assert err.value.invariant


def test_relations_and_curve_sections():
    b = build(parse_file(path("quadrics")))
    assert b.relations.is_forced_zero({"P": 1})[0]
    b = build(parse("[curve]\np = 5\nn = 1\na = 1\nb = 0\n"))
    assert b.curve.order == 4


def run(*argv):
    code, report = cli.run(list(argv))
    # the machine-readable report survives a JSON round trip
    assert json.loads(cli.to_json(report)) == report
    return code, report


def test_cli_h1_sign_module():
    code, rep = run("h1", path("sign-module"))
    assert code == 0
    assert rep["results"]["invariant_factors"] == [2]
    assert rep["results"]["cyclic_oracle"] == [2]


def test_cli_class_and_twist():
    code, rep = run("class", path("nontrivial-class"))
    assert code == 0 and rep["results"]["trivial"] is False
    assert rep["results"]["h1"] == [2] and rep["results"]["class"] == [1]
    code, rep = run("twist", path("nontrivial-class"))
    assert code == 0 and rep["results"]["fixed_point"] is None
    code, rep = run("class", path("nontrivial-class"), "--basepoint", "1")
    assert rep["results"]["class"] == [1]


def test_cli_sym_descend_verify_file():
    code, rep = run("sym", path("abel-map"), "--d", "2")
    assert code == 0 and rep["results"]["points"] == 4
    code, rep = run("descend", path("two-components"))
    assert code == 0 and rep["results"]["components"] == 2
    code, rep = run("verify", path("nontrivial-class"))
    assert code == 0 and rep["results"]["passed"] == 1


def test_cli_parity():
    code, rep = run("parity", "--d", "3")
    assert code == 0
    assert rep["results"]["verdict"] == "P forced zero"
    assert [c["target"] for c in rep["results"]["certificates"]] == ["Q", "P"]
    code, rep = run("parity", "--d", "3", "--drop-canonical")
    assert rep["results"]["verdict"] == "P not forced zero"
    assert rep["results"]["order_of_P"] == 5


def test_cli_lang():
    code, rep = run("lang", "--p", "5", "--n", "2", "--a", "1", "--b", "0")
    assert code == 0 and rep["results"]["points"] == 32 and rep["results"]["h1"] == []
    code, rep = run("lang", "--p", "5", "--n", "2", "--sweep")
    assert code == 0 and rep["results"]["all_trivial"]


def test_cli_input_errors(tmp_path):
    bad = tmp_path / "bad"
    bad.write_text("[group]\nkind = cyclic\norder = 2\n[scenario]\npoints = S\n")
    code, rep = run("class", str(bad))
    assert code == 2 and rep["status"] == "error"
    assert rep["failure"]["line"] is not None
    code, rep = run("class", str(tmp_path / "missing"))
    assert code == 2
    code, rep = run("class", path("sign-module"))
    assert code == 2
    code, rep = run("lang", "--p", "4", "--n", "1", "--a", "1", "--b", "1")
    assert code == 2 and rep["failure"]["invariant"] == "prime"
    code, rep = run("lang", "--p", "5", "--n", "1", "--a", "0", "--b", "0")
    assert code == 2 and rep["failure"]["invariant"] == "nonsingular"


def test_cli_failure_record(monkeypatch):
    def boom(seed, index):
        raise IdentityViolation("cocycle condition a(st) = a(s)^t + a(t)", sigma=1, tau=2)

    monkeypatch.setattr(cli, "run_random", boom)
    code, rep = run("verify", "--random", "3", "--seed", "1")
    assert code == 1 and rep["status"] == "fail"
    assert rep["failure"]["identity"].startswith("cocycle condition")
    assert rep["failure"]["details"] == {"sigma": 1, "tau": 2}
    assert rep["failure"]["scenario"] == 0


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "5")
    _, rep = run("verify", "--random", "2")
    assert rep["seed"] == 5
    _, rep = run("verify", "--random", "2", "--seed", "9")
    assert rep["seed"] == 9
    monkeypatch.setenv(cli.SEED_ENV, "five")
    assert cli.main(["verify", "--random", "1"]) == 2


def test_verify_random_deterministic_and_parallel():
    a = cli.to_json(cli.run(["verify", "--random", "12", "--seed", "7", "--details"])[1])
    b = cli.to_json(cli.run(["verify", "--random", "12", "--seed", "7", "--details"])[1])
    c = cli.to_json(cli.run(["verify", "--random", "12", "--seed", "7", "--details", "--jobs", "2"])[1])
    assert a == b
    assert json.loads(a)["results"] == json.loads(c)["results"]
    assert json.loads(a)["results"]["passed"] == 12


def test_main_prints(capsys):
    assert cli.main(["--json", "parity", "--d", "2"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["command"] == "parity"
    assert cli.main(["parity", "--d", "2"]) == 0
    assert "parity: pass" in capsys.readouterr().out
