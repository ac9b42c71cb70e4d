"""File format round-trips: presentations, moment tables, operator specs,
representation dumps, and report rendering.

Round-trips are checked at byte level where the format promises it
(canonical JSON with sorted keys) and at value level elsewhere.  Floats
travel as 17-significant-digit decimals, so parsing them back must
reproduce the exact double.
"""

import json
import random
from fractions import Fraction as Rational

from ores.algebra import load_preset, random_element
from ores.errors import ConfigError, StateAxiomError
from ores.files import (
    canonical_json,
    gns_to_dict,
    load_moments,
    load_operator,
    load_presentation,
    moments_from_dict,
    moments_to_dict,
    operator_from_dict,
    operator_to_dict,
    presentation_from_dict,
    presentation_hash,
    presentation_to_dict,
    render_text_report,
    save_gns,
    save_moments,
    save_operator,
    save_presentation,
    str_to_word,
    word_to_str,
    write_json_report,
    write_text_report,
)
from ores.formulas import Formula, QPoly
from ores.gns import gns
from ores.operators import BandedOperator
from ores.scalars import IMAG, Scalar
from ores.states import gaussian_state

import pytest

PRESET_NAMES = ("poly_x", "poly_xy", "heisenberg", "free_xy")


def test_presentation_round_trip_is_byte_stable(tmp_path):
    for name in PRESET_NAMES:
        p = load_preset(name)
        first = tmp_path / ("%s_a.json" % name)
        second = tmp_path / ("%s_b.json" % name)
        save_presentation(p, first)
        q = load_presentation(first)
        save_presentation(q, second)
        assert first.read_bytes() == second.read_bytes()
        assert q.generators == p.generators
        assert q.degree_cap == p.degree_cap
        assert q.name == p.name
        assert presentation_hash(q) == presentation_hash(p)


def test_presentation_round_trip_preserves_rules():
    p = load_preset("heisenberg")
    q = presentation_from_dict(presentation_to_dict(p))
    rng = random.Random(11)
    for _ in range(20):
        el = random_element(p, rng, max_degree=4)
        mirrored = q.normalize_raw({w: c for w, c in el.terms.items()})
        assert tuple(sorted(mirrored.terms.items())) == tuple(
            sorted(el.terms.items()))


def test_presentation_hash_separates_presets():
    hashes = {presentation_hash(load_preset(n)) for n in PRESET_NAMES}
    assert len(hashes) == len(PRESET_NAMES)


def test_malformed_presentation_rejected():
    good = presentation_to_dict(load_preset("poly_x"))
    missing = dict(good)
    del missing["generators"]
    with pytest.raises(ConfigError):
        presentation_from_dict(missing)
    bad_coeff = json.loads(canonical_json(
        presentation_to_dict(load_preset("heisenberg"))))
    bad_coeff["relations"][0]["rhs"][0]["coeff"] = "one"
    with pytest.raises(ConfigError):
        presentation_from_dict(bad_coeff)


def test_moment_table_round_trip(tmp_path):
    p = load_preset("poly_x")
    f = gaussian_state(p, 8)
    first = tmp_path / "moments_a.json"
    second = tmp_path / "moments_b.json"
    save_moments(f, first)
    g = load_moments(first, p)
    save_moments(g, second)
    assert first.read_bytes() == second.read_bytes()
    assert g.degree == f.degree
    assert g.table == f.table


def test_moment_words_are_dot_joined():
    p = load_preset("heisenberg")
    from ores.states import fock_state
    d = moments_to_dict(fock_state(p, 3))
    assert "1" in d["moments"]
    assert d["moments"]["1"] == [1, 1, 0, 1]
    assert "ad.a" in d["moments"]
    assert word_to_str(()) == "1"
    assert str_to_word("1") == ()
    assert str_to_word(word_to_str(("ad", "a", "a"))) == ("ad", "a", "a")


def test_moment_loading_validates_state_axioms():
    p = load_preset("poly_x")
    d = moments_to_dict(gaussian_state(p, 4))
    d["moments"]["1"] = [2, 1, 0, 1]
    with pytest.raises(StateAxiomError):
        moments_from_dict(d, p)
    g = moments_from_dict(d, p, validate=False)
    assert g.table[()] == Scalar(2)
    broken = {"degree": "four", "moments": {}}
    with pytest.raises(ConfigError):
        moments_from_dict(broken, p)


def test_operator_round_trip(tmp_path):
    ops = [
        BandedOperator.annihilation(),
        BandedOperator.creation(),
        BandedOperator.identity(),
        BandedOperator.diagonal(Formula.poly(
            [Scalar(1), Scalar(Rational(3, 2))])),
        BandedOperator.weighted_shift(2, Formula.sqrt(QPoly([2, 1]))),
        BandedOperator.annihilation() + BandedOperator.creation(),
    ]
    for i, op in enumerate(ops):
        path = tmp_path / ("op_%d.json" % i)
        save_operator(op, path)
        back = load_operator(path)
        assert back == op
        again = tmp_path / ("op_%d_b.json" % i)
        save_operator(back, again)
        assert path.read_bytes() == again.read_bytes()


def test_unrepresentable_bands_rejected():
    mixed = Formula.sqrt(QPoly([0, 1])) * Formula.poly([Scalar(2)])
    with pytest.raises(ConfigError):
        operator_to_dict(BandedOperator.weighted_shift(1, mixed))
    radical_sum = Formula.sqrt(QPoly([1, 1])) + Formula.sqrt(QPoly([2, 1]))
    with pytest.raises(ConfigError):
        operator_to_dict(BandedOperator.diagonal(radical_sum))
    with pytest.raises(ConfigError):
        operator_to_dict(BandedOperator.diagonal(Formula.poly([IMAG])))


def test_malformed_operator_file_rejected():
    with pytest.raises(ConfigError):
        operator_from_dict({"bands": [
            {"offset": 0, "kind": "cubic", "coeffs": []}]})
    with pytest.raises(ConfigError):
        operator_from_dict({"bands": [
            {"offset": 1, "kind": "const", "coeffs": [[1, 1]]},
            {"offset": 1, "kind": "const", "coeffs": [[2, 1]]}]})
    with pytest.raises(ConfigError):
        operator_from_dict({"bands": [
            {"offset": 0, "kind": "const", "coeffs": [[1, 1], [2, 1]]}]})
    with pytest.raises(ConfigError):
        operator_from_dict({"rows": []})


def test_representation_dump_structure(tmp_path):
    p = load_preset("poly_x")
    rep = gns(gaussian_state(p, 5))
    d = gns_to_dict(rep)
    meta = d["metadata"]
    assert meta["degree"] == 5
    assert meta["rank"] == rep.gram_rank
    assert meta["ranks"] == list(rep.ranks)
    assert meta["generators"] == ["x"]
    assert meta["presentation_hash"] == presentation_hash(p)
    assert len(d["cyclic"]) == rep.gram_rank
    M = rep.matrix("x")
    block = d["matrices"]["x"]
    assert (block["rows"], block["cols"]) == M.shape
    # 17 significant digits reproduce each double exactly
    k = 0
    for r in range(block["rows"]):
        for c in range(block["cols"]):
            re_s, im_s = block["entries"][k]
            assert float(re_s) == complex(M[r, c]).real
            assert float(im_s) == complex(M[r, c]).imag
            k += 1
    path = tmp_path / "rep.json"
    save_gns(rep, path)
    assert json.loads(path.read_text()) == d


def test_canonical_json_is_key_order_independent():
    a = canonical_json({"b": 1, "a": [2, {"z": 0, "y": False}]})
    b = canonical_json({"a": [2, {"y": False, "z": 0}], "b": 1})
    assert a == b
    assert a.endswith("\n")
    assert json.loads(a) == {"a": [2, {"y": False, "z": 0}], "b": 1}


def test_text_report_rendering(tmp_path):
    report = {
        "scenario": "demo",
        "seed": 7,
        "pass": True,
        "items": [
            {"id": "first", "pass": True, "residual": 1.25e-11, "n": 3},
            {"id": "second", "pass": False, "count": 2},
        ],
    }
    text = render_text_report(report)
    assert text == render_text_report(dict(report))
    lines = text.splitlines()
    assert lines[0] == "scenario: demo"
    assert lines[1] == "seed: 7"
    assert lines[2] == "pass: true"
    assert lines[3] == "items: 2"
    assert "first: pass" in lines[4]
    assert "residual=1.25e-11" in lines[4]
    assert "second: FAIL" in lines[5]
    path = tmp_path / "report.txt"
    write_text_report(report, path, generated="2026-01-01T00:00:00Z")
    body = path.read_text()
    assert body.startswith("# generated: 2026-01-01T00:00:00Z\n")
    assert body[body.index("\n") + 1:] == text
    jpath = tmp_path / "report.json"
    write_json_report(report, jpath)
    assert jpath.read_text() == canonical_json(report)
