import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilex.corpus import (
    EncodingError,
    ParseError,
    TextHalf,
    TokenizerConfig,
    load_pair_list,
    load_word_list,
    normalize,
    read_text_half,
    tokenize,
)


def spans(tokens):
    return [(t.surface, t.start, t.end) for t in tokens]


def test_tokenize_simple_sentence():
    half = TextHalf("en", "Press SELECT and drag")
    assert spans(tokenize(half)) == [
        ("Press", 0, 5),
        ("SELECT", 6, 12),
        ("and", 13, 16),
        ("drag", 17, 21),
    ]


def test_tokenize_empty_input():
    assert tokenize(TextHalf("en", "")) == []


def test_tokenize_apostrophe_splits_clitics():
    half = TextHalf("fr", "l' espace")
    assert spans(tokenize(half)) == [("l", 0, 1), ("'", 1, 2), ("espace", 3, 9)]


def test_tokenize_attached_apostrophe():
    half = TextHalf("fr", "l'espace")
    assert spans(tokenize(half)) == [("l", 0, 1), ("'", 1, 2), ("espace", 2, 8)]


def test_tokenize_hyphenated_word_stays_single():
    tokens = tokenize(TextHalf("fr", "multi-fenêtrage"))
    assert [t.surface for t in tokens] == ["multi-fenêtrage"]


def test_tokenize_unix_permission_string():
    tokens = tokenize(TextHalf("en", "rw-r--r--"))
    assert [t.surface for t in tokens] == ["rw-r", "--", "r", "--"]


def test_token_center_is_floor_midpoint():
    tokens = tokenize(TextHalf("en", "Press SELECT"))
    assert tokens[0].center == (0 + 5 - 1) // 2 == 2
    assert tokens[1].center == (6 + 12 - 1) // 2 == 8


def test_punctuation_tokens_are_not_content():
    tokens = tokenize(TextHalf("en", "stop ."))
    dot = tokens[1]
    assert not dot.is_word and not dot.is_content


def test_digit_only_token_is_word_but_not_content():
    tokens = tokenize(TextHalf("en", "port 8080"))
    assert tokens[1].is_word and not tokens[1].is_content


def test_stoplist_drops_content_flag():
    config = TokenizerConfig(stoplist=frozenset({"the"}))
    tokens = tokenize(TextHalf("en", "the folder"), config)
    assert [t.is_content for t in tokens] == [False, True]


def test_normalize_case_fold():
    assert normalize("Extensions") == "extensions"


def test_normalize_preserves_diacritics_by_default():
    assert normalize("déplacez") == "déplacez"


def test_normalize_folds_diacritics_when_asked():
    assert normalize("Relâché", fold_diacritics=True) == "relache"


@given(st.text(max_size=60))
def test_normalize_idempotent(surface):
    once = normalize(surface)
    assert normalize(once) == once
    folded = normalize(surface, fold_diacritics=True)
    assert normalize(folded, fold_diacritics=True) == folded


@settings(max_examples=200)
@given(st.text(max_size=200))
def test_tokenize_offsets_reconstruct_content(text):
    half = TextHalf("x", text)
    tokens = tokenize(half)
    prev_end = 0
    for t in tokens:
        assert t.start < t.end
        assert t.start >= prev_end
        assert text[t.start : t.end] == t.surface
        # Gaps between tokens contain only whitespace.
        assert text[prev_end : t.start].strip() == ""
        prev_end = t.end
    assert text[prev_end:].strip() == ""
    assert [t.index for t in tokens] == list(range(len(tokens)))


@given(st.text(max_size=120))
def test_tokenize_deterministic(text):
    half = TextHalf("x", text)
    assert tokenize(half) == tokenize(half)


def test_read_text_half_reports_bad_byte_offset(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"abc\xff\xfe")
    with pytest.raises(EncodingError) as err:
        read_text_half(path, "en")
    assert err.value.byte_offset == 3


def test_load_word_list_basic(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("the\nof\n", encoding="utf-8")
    wl = load_word_list(path, "stoplist")
    assert wl.entries == frozenset({"the", "of"})
    assert "the" in wl


def test_load_word_list_warns_on_duplicates(tmp_path, caplog):
    path = tmp_path / "stop.txt"
    path.write_text("the\nThe\n", encoding="utf-8")
    with caplog.at_level("WARNING"):
        wl = load_word_list(path, "stoplist")
    assert wl.entries == frozenset({"the"})
    assert "duplicate" in caplog.text


def test_load_word_list_rejects_multi_field_line(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("the\ntwo words\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        load_word_list(path, "stoplist")
    assert err.value.line_no == 2


def test_load_word_list_empty_file_is_empty_list(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("", encoding="utf-8")
    assert load_word_list(path, "stoplist").entries == frozenset()


def test_load_pair_list(tmp_path):
    path = tmp_path / "mrd.tsv"
    path.write_text("# comment\ncorbeille\twastebasket\n", encoding="utf-8")
    pl = load_pair_list(path)
    assert ("corbeille", "wastebasket") in pl


def test_load_pair_list_rejects_malformed_line(tmp_path):
    path = tmp_path / "mrd.tsv"
    path.write_text("corbeille\twastebasket\nlonely\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        load_pair_list(path)
    assert err.value.line_no == 2
