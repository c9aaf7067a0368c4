"""
Tests for requests, reports and search budgets.
"""
import json

import pytest

from wittlab import __version__
from wittlab.cohomology import H3Class, corestriction
from wittlab.config import ENV_VAR, SearchBudget, get_budget, use_budget
from wittlab.errors import SchemaError
from wittlab.fields import QuadExtension, QuadNumberField, RationalFunctionField, Rationals
from wittlab.schema import (Report, build_request, load_payload, parse_brauer, parse_field,
                            parse_h3, split_list, split_pairs)


def test_budget_defaults():
    """An empty override keeps the defaults."""
    budget = SearchBudget.parse("")
    assert budget.search_bound == 10000
    assert budget.height == 6
    assert budget.candidate_pool == 64


def test_budget_integer_override():
    """A bare integer sets the search bound."""
    assert SearchBudget.parse("500").search_bound == 500


def test_budget_key_value_override():
    """Named entries override one field each."""
    budget = SearchBudget.parse("search_bound=500, height=4")
    assert budget.search_bound == 500
    assert budget.height == 4
    assert budget.max_atoms == 4


@pytest.mark.parametrize("text", ["depth=3", "height", "height=x", "height=-1"])
def test_budget_bad_entries(text):
    """Unknown keys and non-integer values are schema errors."""
    with pytest.raises(SchemaError):
        SearchBudget.parse(text)


def test_budget_from_env(monkeypatch):
    """The environment variable supplies the default budget."""
    monkeypatch.setenv(ENV_VAR, "height=2")
    assert SearchBudget.from_env().height == 2
    monkeypatch.delenv(ENV_VAR)
    assert SearchBudget.from_env() == SearchBudget()


def test_budget_replace_skips_none():
    """CLI options left unset do not override the budget."""
    budget = SearchBudget().replace(seed=7, threads=None)
    assert budget.seed == 7
    assert budget.threads == 1


def test_use_budget_restores_previous():
    """The active budget is scoped to the with block."""
    before = get_budget()
    with use_budget(SearchBudget(height=1)):
        assert get_budget().height == 1
    assert get_budget() == before


def test_parse_field():
    """Field names and descriptors."""
    assert parse_field(None) == Rationals()
    assert parse_field("Q") == Rationals()
    assert parse_field("Q(t)") == RationalFunctionField()
    assert parse_field("Q(sqrt(-1))") == QuadNumberField(-1)
    assert parse_field("Q(sqrt5)") == QuadNumberField(5)


def test_split_list():
    """Comma lists are stripped and empty entries rejected."""
    assert split_list(None) is None
    assert split_list("1, -2,3") == ["1", "-2", "3"]
    with pytest.raises(SchemaError):
        split_list("1,,2")


def test_split_pairs():
    """Symbols are written a:b."""
    assert split_pairs("-1:3,-1:7") == [["-1", "3"], ["-1", "7"]]
    with pytest.raises(SchemaError):
        split_pairs("-1:3:5")
    with pytest.raises(SchemaError):
        split_pairs("2")


def test_load_payload(tmp_path):
    """Request files hold a JSON object."""
    assert load_payload(None) == {}
    good = tmp_path / "good.json"
    good.write_text('{"diag": ["1", "-1"]}', encoding="utf-8")
    assert load_payload(str(good)) == {"diag": ["1", "-1"]}
    bad = tmp_path / "bad.json"
    bad.write_text("{diag", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_payload(str(bad))
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_payload(str(listed))


def test_build_request_pops_field():
    """The field key selects the base field and leaves the payload."""
    request = build_request("qform witt", {"field": "Q(t)", "diag": ["t"]}, SearchBudget())
    assert request.field == RationalFunctionField()
    assert request.payload == {"diag": ["t"]}
    assert request.require("diag") == ["t"]
    with pytest.raises(SchemaError) as exc_info:
        request.require("gens")
    assert exc_info.value.pointer == "/gens"


def test_parse_symbols_checks_arity():
    """Brauer symbols have two slots and degree-3 symbols three."""
    Q = Rationals()
    assert not parse_brauer(Q, [["-1", "-1"]], "/C").is_zero()
    assert not parse_h3(Q, [["-1", "-1", "-1"]], "/e3").is_zero()
    with pytest.raises(SchemaError) as exc_info:
        parse_brauer(Q, [["-1", "-1", "-1"]], "/C")
    assert exc_info.value.pointer == "/C/0"


def test_report_render():
    """Reports carry the version, command, field and budget."""
    report = Report("qform witt", Rationals(), {"index": 1}, SearchBudget())
    line = report.render("jsonl")
    assert "\n" not in line
    data = json.loads(line)
    assert data["wittlab"] == __version__
    assert data["command"] == "qform witt"
    assert data["result"] == {"index": 1}
    assert data["budget"]["search_bound"] == 10000
    assert json.loads(report.render("json")) == data


def test_parse_h3_term_objects():
    """sym and cores terms; cores of (1+s)(-1,-1) over Q(sqrt 2) is (-1,-1,-1)."""
    Q = Rationals()
    data = {"h3": [{"sym": ["-1", "3", "5"]},
                   {"cores": {"K": {"d": 2}, "mu": "1+s", "sym": ["3", "5"]}}]}
    assert parse_h3(Q, data, "/e3").is_zero()
    cores = parse_h3(Q, [{"cores": {"K": {"d": 2}, "mu": "1+s", "sym": ["-1", "-1"]}}], "/e3")
    assert cores == H3Class.symbol(Q, -1, -1, -1)
    assert not cores.is_zero()


def test_parse_h3_round_trip():
    """The output of H3Class.as_dict parses back to the same class."""
    Q = Rationals()
    K = QuadExtension(Q, 2)
    mu = K.field.parse("1+s")
    c = H3Class.symbol(Q, -1, -1, -1) + corestriction(K, mu, K.field.generator, -1)
    data = json.loads(json.dumps(c.as_dict()))
    assert "cores" in data["terms"][1]
    parsed = parse_h3(Q, data, "/e3")
    assert parsed == c
    assert parsed.as_dict()["terms"] == data["terms"]


@pytest.mark.parametrize("entries, pointer", [
    ([{"sym": ["-1", "3"]}], "/e3/0/sym"),
    ([{"cores": {"K": {"d": 2}, "mu": "1"}}], "/e3/0/cores"),
    ([{"cores": {"K": {"d": "x"}, "mu": "1", "sym": ["3", "5"]}}], "/e3/0/cores/K/d"),
    ([{"symbol": ["-1", "3", "5"]}], "/e3/0"),
    ({"other": []}, "/e3"),
])
def test_parse_h3_errors(entries, pointer):
    """Malformed terms point at the offending entry."""
    with pytest.raises(SchemaError) as exc_info:
        parse_h3(Rationals(), entries, "/e3")
    assert exc_info.value.pointer == pointer
