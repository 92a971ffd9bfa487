import json

import pytest

from unisep import cache as C
from unisep.builders import build
from unisep.cli import check, main, parse_group_file
from unisep.matio import ParseError, format_matrices, format_matrix
from unisep.suites import Options, run_suite


@pytest.fixture
def cache_env(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("UNISEP_CACHE_DIR", str(d))
    return d


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_check_matches_suite_record(tmp_path, capsys):
    b = build("agl2_3")
    mod = _write(tmp_path, "agl.mod", format_matrices(b.module.action))
    rep = check(mod)
    rec = rep.records[0]
    assert rec["irreducible"] and rec["absolutely_irreducible"]
    assert rec["unisingular"] == "true" and rec["order"] == 432
    assert rec["factor_dims"] == [8] and not rec["has_trivial_factor"]
    assert rec["symplectic"]
    suite = run_suite("sp8", Options())
    srec = next(r for r in suite.records if r["id"] == "sp8/agl2_3")
    for key in ("irreducible", "absolutely_irreducible", "unisingular", "order"):
        assert srec[key] == rec[key]
    assert main(["check", "--module", str(mod)]) == 0
    out = capsys.readouterr().out
    assert "irreducible: True" in out and "unisingular: true" in out


def test_check_with_permutation_group_file(tmp_path):
    b = build("agl2_3")
    mod = _write(tmp_path, "agl.mod", format_matrices(b.module.action))
    lines = ["perm 9"] + [" ".join(map(str, g)) for g in b.spec.generators]
    grp = _write(tmp_path, "agl.grp", "\n".join(lines) + "\n")
    rec = check(mod, grp).records[0]
    assert rec["order"] == 432 and rec["unisingular"] == "true"


def test_check_identity_group(tmp_path, capsys):
    mod = _write(tmp_path, "id.mod", "field 2\ndim 4\n1000\n0100\n0010\n0001\n")
    rec = check(mod).records[0]
    assert not rec["irreducible"]
    assert rec["factor_dims"] == [1, 1, 1, 1] and rec["has_trivial_factor"]
    assert main(["check", "--module", str(mod), "--json"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out[out.index("{"):])["factor_dims"] == [1, 1, 1, 1]


def test_check_parse_error_names_line_one(tmp_path, capsys):
    mod = _write(tmp_path, "bad.mod", "fieldd 2\ndim 2\n10\n01\n")
    with pytest.raises(ParseError) as e:
        check(mod)
    assert e.value.line == 1
    assert main(["check", "--module", str(mod)]) == 2
    assert ":1:" in capsys.readouterr().err


def test_group_file_errors():
    with pytest.raises(ParseError) as e:
        parse_group_file("perm 3\n0 1 1\n")
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_group_file("perm x\n")
    assert parse_group_file("perm 3\n1 2 0\n") == [(1, 2, 0)]


def test_suite_command_report_and_exit_codes(tmp_path, cache_env, capsys):
    out = tmp_path / "w.json"
    assert main(["suite", "weights", "--report", str(out), "--quiet"]) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"header", "body"}
    assert doc["body"]["status"] == "pass" and doc["body"]["suite"] == "weights"
    assert "generated" in doc["header"]
    with pytest.raises(SystemExit) as e:
        main(["suite", "nope"])
    assert e.value.code == 2


def test_cache_commands(cache_env, capsys):
    assert main(["cache", "build", "agl2_3"]) == 0
    path = C.cache_path(build("agl2_3").spec)
    assert path.exists()
    assert main(["cache", "verify", "agl2_3"]) == 0
    raw = bytearray(path.read_bytes())
    raw[-5] ^= 0xFF
    path.write_bytes(bytes(raw))
    capsys.readouterr()
    assert main(["cache", "verify", "agl2_3"]) == 1
    assert f"offset {len(raw) - 5}" in capsys.readouterr().err
    assert main(["cache", "clear", "agl2_3"]) == 0
    assert not path.exists()
    assert main(["cache", "verify", "agl2_3"]) == 1
    assert main(["cache", "build", "nonexistent"]) == 2
    assert main(["cache", "build", "sl3_2"]) == 0
    assert main(["cache", "clear", "all"]) == 0
    assert not list(cache_env.glob("*.store"))


def test_module_file_round_trip(tmp_path):
    b = build("sl2_4")
    text = format_matrices(b.module.action)
    assert text.startswith("field 4\ndim 4\n")
    mod = _write(tmp_path, "st4.mod", text)
    rec = check(mod).records[0]
    assert rec["unisingular"] == "false" and rec["witness_order"] == 5
    assert format_matrix(b.module.action[0]).count("\n") == 6
