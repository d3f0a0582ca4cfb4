from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from reliefmatch.lexicons import (
    ConflictError,
    FormatError,
    NumberWordTable,
    load_cue_lexicon,
    load_default,
    load_lexicons,
    load_resource_lexicon,
    default_paths,
    parse_number,
)
from reliefmatch.model import ResourceClass


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_entry(tmp_path):
    lex = load_resource_lexicon(write(tmp_path, "r.csv", "rice,food\n"))
    assert lex.canonical("rice") == ("rice", ResourceClass.FOOD)


def test_conflicting_class_rejected(tmp_path):
    with pytest.raises(ConflictError):
        load_resource_lexicon(write(tmp_path, "r.csv", "tents,shelter\ntents,food\n"))


def test_alias_collision_rejected(tmp_path):
    with pytest.raises(ConflictError):
        load_resource_lexicon(write(tmp_path, "r.csv", "tents,shelter\nrice,food,tents\n"))


def test_empty_file_warns(tmp_path):
    with pytest.warns(UserWarning):
        lex = load_resource_lexicon(write(tmp_path, "r.csv", "# nothing here\n"))
    assert len(lex) == 0


def test_format_error_carries_line_number(tmp_path):
    with pytest.raises(FormatError) as err:
        load_resource_lexicon(write(tmp_path, "r.csv", "rice,food\noops\n"))
    assert err.value.line_no == 2


def test_unknown_class_rejected(tmp_path):
    with pytest.raises(FormatError):
        load_resource_lexicon(write(tmp_path, "r.csv", "rice,snacks\n"))


def test_alias_resolves_to_phrase(tmp_path):
    lex = load_resource_lexicon(write(tmp_path, "r.csv", "tents,shelter,tent;shelters\n"))
    assert lex.canonical("tent") == ("tents", ResourceClass.SHELTER)
    assert lex.canonical("TENTS") == ("tents", ResourceClass.SHELTER)
    assert lex.canonical("huts") is None


def test_roundtrip_dump_reload(tmp_path):
    original = load_default().resources
    reloaded = load_resource_lexicon(write(tmp_path, "dump.csv", original.dump()))
    assert reloaded.entries == original.entries


def test_cue_sides_disjoint(tmp_path):
    with pytest.raises(ConflictError):
        load_cue_lexicon(write(tmp_path, "c.csv", "need,need\nneed,avail\n"))


def test_default_lexicons_load():
    lex = load_lexicons(default_paths())
    assert len(lex.resources) > 100
    assert lex.cues.need_cues and lex.cues.avail_cues
    assert len(lex.stopwords) == 50
    # every resource the paper-table fixtures rely on is present
    for phrase in [
        "water", "medical supplies", "tents", "tent", "analgesic", "antibiotics",
        "betadiene", "swabs", "dogs", "ndrf team", "rice", "biscuits", "bottled water",
        "blood", "medicine", "latrines", "blankets", "tarpaulins", "electricity",
        "helicopters", "cash",
    ]:
        assert lex.resources.canonical(phrase) is not None, phrase
    assert lex.resources.canonical("shelter") == ("tents", ResourceClass.SHELTER)


def test_head_words_expand_morphology():
    cues = load_default().cues
    assert "donate" in cues.avail_cues
    assert "donating" in cues.head_words
    assert "needing" in cues.head_words


# -- numbers ---------------------------------------------------------------


def test_digit_with_commas():
    assert parse_number(["20,000", "RSS", "personnel"], 0) == (20000, (0, 0))


def test_words_compose_unit_times_scale():
    # oracle: unit x scale composition -> 2 * 100
    assert parse_number(["two", "hundred", "tents"], 1) == (200, (0, 1))


def test_non_numeric_returns_none():
    assert parse_number(["many", "tents"], 0) is None


def test_out_of_bounds_raises():
    with pytest.raises(IndexError):
        parse_number(["one"], 5)


@pytest.mark.parametrize(
    "tokens,at,expected",
    [
        (["two", "hundred", "fifty"], 2, (250, (0, 2))),
        (["one", "hundred", "twenty", "five"], 3, (125, (0, 3))),
        (["two", "thousand"], 1, (2000, (0, 1))),
        (["20", "thousand"], 1, (20000, (0, 1))),
        (["hundred"], 0, (100, (0, 0))),
        (["two", "two"], 1, (2, (1, 1))),  # ill-formed pair shrinks to the last token
        (["3", "tonnes"], 0, (3, (0, 0))),
    ],
)
def test_number_phrases(tokens, at, expected):
    assert parse_number(tokens, at) == expected


@given(st.integers(min_value=0, max_value=10**9))
def test_pure_digits_equal_integer_reading(n):
    grouped = f"{n:,}"
    got = parse_number([grouped], 0)
    assert got == (n, (0, 0))


@given(
    st.lists(st.sampled_from(["two", "hundred", "blue", "7", "thousand", "tents"]), min_size=1, max_size=6),
)
def test_span_always_ends_at_index(tokens):
    table = NumberWordTable()
    at = len(tokens) - 1
    got = parse_number(tokens, at, table)
    if got is not None:
        _value, (start, end) = got
        assert end == at
        assert 0 <= start <= at
