import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import data_path
from wisse import SentenceTokens, StopwordList, default_stopwords, load_sts_dataset, strip_stopwords, tokenize
from wisse.exceptions import DatasetFormatError
from wisse.text import ingest_corpus, load_stopwords


class TestTokenize:
    @pytest.mark.parametrize("text, expected", [
        ("The dog barks.", ["the", "dog", "barks"]),
        ("", []),
        ("A girl is close to a boy", ["a", "girl", "is", "close", "to", "a", "boy"]),
        ("snake_case--and,,Ünïcödé 42x", ["snake", "case", "and", "ünïcödé", "42x"]),
    ])
    def test_examples(self, text, expected):
        assert list(tokenize(text).tokens) == expected

    def test_keeps_raw_text(self):
        assert tokenize("Hi!").raw == "Hi!"

    def test_min_token_len_two(self):
        assert tokenize("A girl is close to a boy", min_token_len=2).tokens == ("girl", "is", "close", "to", "boy")

    @given(st.text())
    def test_idempotent_on_joined_output(self, text):
        tokens = tokenize(text).tokens
        assert tokenize(" ".join(tokens)).tokens == tokens

    @given(st.text())
    def test_no_empty_tokens(self, text):
        assert all(tokenize(text).tokens)


class TestStopwords:
    def test_strip(self):
        s = SentenceTokens(("the", "dog", "barks"))
        assert strip_stopwords(s, StopwordList(frozenset({"the", "a", "is"}))).tokens == ("dog", "barks")

    def test_strip_empty(self):
        assert strip_stopwords(SentenceTokens(()), default_stopwords()).tokens == ()

    def test_default_list(self):
        words = default_stopwords()
        assert len(words) == 318
        assert words.source == "built-in"
        assert all(w == w.lower() and w for w in words.words)

    def test_negation_sentence_with_default_list(self):
        s = tokenize("The man jumping is not wearing a shirt.")
        kept = strip_stopwords(s, default_stopwords()).tokens
        assert {"jumping", "wearing", "shirt"} <= set(kept)
        # the bundled list contains "not"; a custom list without it keeps it
        assert ("not" in kept) == ("not" not in default_stopwords())
        custom = StopwordList(default_stopwords().words - {"not"}, "custom")
        assert "not" in strip_stopwords(s, custom).tokens

    def test_uppercase_entries_rejected(self):
        with pytest.raises(ValueError):
            StopwordList(frozenset({"The"}))

    def test_load_file(self, tmp_path):
        p = tmp_path / "sw.txt"
        p.write_text("The\n\nof\n", encoding="utf-8")
        assert load_stopwords(p).words == {"the", "of"}

    @given(st.lists(st.sampled_from(["the", "dog", "a", "barks", "not", "is"])),
           st.sets(st.sampled_from(["the", "a", "is", "not"])))
    def test_strip_idempotent(self, tokens, words):
        sw = StopwordList(frozenset(words))
        once = strip_stopwords(SentenceTokens(tuple(tokens)), sw)
        assert strip_stopwords(once, sw) == once
        assert list(once.tokens) == [t for t in tokens if t not in words]


class TestCorpus:
    def test_counts(self):
        reader = ingest_corpus(io.BytesIO(b"the dog barks\n\nthe cat sleeps\r\n"))
        docs = [d.tokens for d in reader]
        assert docs == [("the", "dog", "barks"), ("the", "cat", "sleeps")]
        assert reader.n_documents == 2 and reader.n_tokens == 6

    def test_lazy(self):
        reader = ingest_corpus(io.BytesIO(b"a\nb\nc\n"))
        it = iter(reader)
        next(it)
        assert reader.n_documents == 1

    def test_invalid_encoding_reports_offset(self):
        with pytest.raises(DatasetFormatError, match="byte offset 6"):
            list(ingest_corpus(io.BytesIO(b"abc\nde\xff\n")))


class TestSTSDataset:
    def test_semeval_boundary_scores(self):
        ds = load_sts_dataset(io.BytesIO(b"a b\tc d\ne f\tg h\n"), io.BytesIO(b"0.0\n5.0\n"))
        assert len(ds) == 2
        assert ds.gold.tolist() == [0.0, 5.0]
        assert ds.pairs[1][0].tokens == ("e", "f")

    def test_sick_fixture(self):
        with open(data_path("sick_small.txt"), "rb") as fh:
            ds = load_sts_dataset(fh, format="sick")
        assert len(ds) == 3
        assert ds.gold.tolist() == [4.5, 3.2, 1.0]
        assert ds.pairs[2][1].tokens == ("a", "woman", "is", "slicing", "an", "onion")

    def test_length_mismatch(self):
        with pytest.raises(DatasetFormatError, match="3 sentence pairs but 2"):
            load_sts_dataset(io.BytesIO(b"a\tb\nc\td\ne\tf\n"), io.BytesIO(b"1\n2\n"))

    def test_score_out_of_range_names_line(self):
        with pytest.raises(DatasetFormatError, match="line 2") as exc:
            load_sts_dataset(io.BytesIO(b"a\tb\nc\td\n"), io.BytesIO(b"1\n5.5\n"))
        assert exc.value.line == 2

    def test_sick_missing_column(self):
        data = b"pair_ID\tsentence_A\tsentence_B\tentailment_judgment\n1\ta\tb\tNEUTRAL\n"
        with pytest.raises(DatasetFormatError, match="relatedness_score"):
            load_sts_dataset(io.BytesIO(data), format="sick")

    def test_preserves_order(self, ten_pairs):
        with open(data_path("ten_pairs.txt"), encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        assert len(ten_pairs) == len(lines)
        assert [" ".join(a.tokens) for a, _ in ten_pairs.pairs] == [ln.split("\t")[0] for ln in lines]
