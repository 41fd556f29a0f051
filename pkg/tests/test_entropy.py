import io
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TOY_CORPUS
from wisse import (CorpusStats, WeightingConfig, corpus_mutual_information, fit_stats, load_stats, save_stats,
                   sentence_entropy, tf_value, tokenize, word_conditional_entropy, word_weight)
from wisse.entropy import term_frequencies
from wisse.exceptions import EmptyCorpusError, StatsFormatError, StatsVersionError

# hand counts over TOY_CORPUS
TOY_DF = {"the": 3, "dog": 2, "barks": 1, "cat": 1, "sleeps": 2, "a": 1, "bird": 1, "sings": 1}
TOY_TF = {"the": 3, "dog": 2, "barks": 1, "cat": 1, "sleeps": 2, "a": 1, "bird": 1, "sings": 1}

corpora = st.lists(st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=6), min_size=1, max_size=12)


def brute_idf(docs, token, variant="plain"):
    n = len(docs)
    df = sum(1 for d in docs if token in d)
    return math.log(n / df) if variant == "plain" else math.log((1 + n) / (1 + df)) + 1


class TestFit:
    def test_toy_corpus(self, toy_stats):
        assert toy_stats.n_sentences == 4
        assert toy_stats.total_tokens == 12
        assert dict(toy_stats.doc_freq) == TOY_DF
        assert toy_stats.idf["the"] == pytest.approx(0.287682, abs=1e-6)
        assert toy_stats.idf["dog"] == pytest.approx(0.693147, abs=1e-6)
        assert toy_stats.idf["barks"] == pytest.approx(1.386294, abs=1e-6)

    def test_ubiquitous_token_zero_idf(self):
        stats = fit_stats([("x", "a"), ("x", "b"), ("x",)])
        assert stats.idf["x"] == 0.0

    def test_single_document(self):
        stats = fit_stats([("a", "b", "a")])
        assert all(v == 0.0 for v in stats.idf.values())

    def test_doc_freq_counts_presence_not_occurrences(self):
        stats = fit_stats([("a", "a", "a"), ("b",)])
        assert stats.doc_freq["a"] == 1
        assert stats.total_tokens == 4

    def test_smoothed_variant(self, toy_docs):
        stats = fit_stats(toy_docs, variant="smoothed")
        assert stats.idf["the"] == pytest.approx(math.log(5 / 4) + 1, abs=1e-15)
        assert all(v > 0 for v in stats.idf.values())

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpusError, match="empty corpus"):
            fit_stats([])

    def test_strip_at_fit(self, toy_docs):
        from wisse import StopwordList

        stats = fit_stats(toy_docs, stopwords=StopwordList(frozenset({"the", "a"})))
        assert "the" not in stats.doc_freq
        assert stats.total_tokens == 8

    @settings(max_examples=50)
    @given(corpora, st.randoms(use_true_random=False))
    def test_order_insensitive(self, docs, rnd):
        shuffled = list(docs)
        rnd.shuffle(shuffled)
        assert fit_stats(docs) == fit_stats(shuffled)

    @settings(max_examples=50)
    @given(corpora, st.sampled_from(["plain", "smoothed"]))
    def test_matches_brute_force_and_is_anti_monotone(self, docs, variant):
        stats = fit_stats(docs, variant)
        for tok in stats.doc_freq:
            assert stats.idf[tok] == pytest.approx(brute_idf(docs, tok, variant), abs=1e-12)
        for t1 in stats.doc_freq:
            for t2 in stats.doc_freq:
                if stats.doc_freq[t1] < stats.doc_freq[t2]:
                    assert stats.idf[t1] > stats.idf[t2]


class TestEntropies:
    def test_sentence_entropy(self, toy_stats):
        assert sentence_entropy(toy_stats) == pytest.approx(1.386294, abs=1e-6)
        assert sentence_entropy(fit_stats([("a",)])) == 0.0
        ten = fit_stats([(f"w{i}",) for i in range(10)])
        assert sentence_entropy(ten) == pytest.approx(2.302585, abs=1e-6)

    def test_word_conditional_entropy(self, toy_stats):
        assert word_conditional_entropy(toy_stats, "barks") == 0.0
        assert word_conditional_entropy(toy_stats, "dog") == pytest.approx(math.log(2), abs=1e-15)
        assert word_conditional_entropy(toy_stats, "unseen") == 0.0
        assert word_conditional_entropy(toy_stats, "unseen", "skip") is None
        ubiquitous = fit_stats([("x",), ("x", "y")])
        assert word_conditional_entropy(ubiquitous, "x") == sentence_entropy(ubiquitous)

    def test_mutual_information_toy(self, toy_docs, toy_stats):
        tf = term_frequencies(toy_docs)
        assert dict(tf) == TOY_TF
        # brute force over the 8 word types
        expected = sum(TOY_TF[w] / 12 * (math.log(1 / TOY_DF[w]) - math.log(1 / 4)) for w in TOY_DF)
        assert corpus_mutual_information(toy_stats, tf) == pytest.approx(expected, abs=1e-12)

    def test_mutual_information_single_document(self):
        docs = [("a", "b", "b")]
        assert corpus_mutual_information(fit_stats(docs), term_frequencies(docs)) == 0.0

    @settings(max_examples=50)
    @given(corpora)
    def test_mutual_information_consistency(self, docs):
        stats = fit_stats(docs)
        tf = term_frequencies(docs)
        mi = corpus_mutual_information(stats, tf)
        recomputed = sum(f / stats.total_tokens * (sentence_entropy(stats) - word_conditional_entropy(stats, w))
                         for w, f in tf.items())
        assert mi >= 0
        assert mi == pytest.approx(recomputed, abs=1e-12)


class TestTF:
    def test_absent_token(self):
        s = tokenize("the dog")
        for mode in ("binary", "frequency", "log"):
            assert tf_value("cat", s, mode, 12) == 0.0

    def test_single_occurrence(self):
        s = tokenize("the dog")
        assert tf_value("dog", s, "frequency", 12) == pytest.approx(1 / 12)
        assert tf_value("dog", s, "binary", 12) == pytest.approx(1 / 12)
        assert tf_value("dog", s, "log", 12) == pytest.approx(0.057762, abs=1e-6)

    def test_repeated_token(self):
        s = tokenize("dog dog dog")
        assert tf_value("dog", s, "binary", 12) == pytest.approx(1 / 12)
        assert tf_value("dog", s, "frequency", 12) == pytest.approx(0.25)

    @given(st.integers(0, 50), st.integers(1, 1000))
    def test_bounds(self, count, total):
        s = ("w",) * count
        values = {m: tf_value("w", s, m, total) for m in ("binary", "frequency", "log")}
        assert all((v == 0.0) == (count == 0) for v in values.values())
        assert all(v <= max(values.values()) for v in values.values())


class TestWordWeight:
    def test_toy_tfidf(self, toy_stats):
        s = tokenize("the dog barks")
        cfg = WeightingConfig()
        assert word_weight("the", s, toy_stats, cfg) == pytest.approx(0.023973, abs=1e-6)
        assert word_weight("dog", s, toy_stats, cfg) == pytest.approx(0.057762, abs=1e-6)
        assert word_weight("barks", s, toy_stats, cfg) == pytest.approx(0.115525, abs=1e-6)

    def test_content_function_ordering(self, toy_stats):
        s = tokenize("the dog barks")
        cfg = WeightingConfig()
        w = {t: word_weight(t, s, toy_stats, cfg) for t in s.tokens}
        assert w["the"] < w["dog"] < w["barks"]

    def test_unweighted(self, toy_stats):
        cfg = WeightingConfig(scheme="unweighted")
        assert word_weight("anything", tokenize("anything"), toy_stats, cfg) == 1.0

    def test_idf_only(self, toy_stats):
        cfg = WeightingConfig(scheme="idf_only")
        assert word_weight("dog", tokenize("dog dog"), toy_stats, cfg) == toy_stats.idf["dog"]

    def test_ubiquitous_zero(self):
        stats = fit_stats([("x", "a"), ("x", "b")])
        assert word_weight("x", ("x", "a"), stats, WeightingConfig()) == 0.0

    def test_oov_policies(self, toy_stats):
        s = tokenize("zebra")
        fallback = word_weight("zebra", s, toy_stats, WeightingConfig(scheme="idf_only"))
        assert fallback == pytest.approx(math.log(4))
        assert word_weight("zebra", s, toy_stats, WeightingConfig(oov_idf_policy="skip")) is None


class TestWeightingNames:
    @pytest.mark.parametrize("name, fields", [
        ("glob-tfidf-bin-st", dict(scheme="tfidf", tf_mode="binary", scope="global", strip_stopwords=True)),
        ("loc-tfidf-log", dict(scheme="tfidf", tf_mode="log", scope="local", strip_stopwords=False)),
        ("loc-tfidf", dict(scheme="tfidf", tf_mode="frequency", scope="local")),
        ("glob-idf", dict(scheme="idf_only", scope="global")),
        ("loc-idf-st", dict(scheme="idf_only", scope="local", strip_stopwords=True)),
        ("unweighted", dict(scheme="unweighted", strip_stopwords=False)),
    ])
    def test_parse_and_round_trip(self, name, fields):
        cfg = WeightingConfig.from_string(name)
        for k, v in fields.items():
            assert getattr(cfg, k) == v
        assert cfg.name == name

    @pytest.mark.parametrize("bad", ["tfidf", "glob-tf", "loc-idf-bin", "loc-tfidf-bin-log", "unweighted-bin", ""])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            WeightingConfig.from_string(bad)


class TestPersistence:
    def test_round_trip(self, toy_stats):
        assert load_stats(io.BytesIO(save_stats(toy_stats))) == toy_stats

    def test_round_trip_smoothed(self, toy_docs):
        stats = fit_stats(toy_docs, "smoothed")
        assert load_stats(save_stats(stats), variant="smoothed") == stats

    def test_layout(self, toy_stats):
        data = save_stats(toy_stats)
        assert data[:10] == b"WISSESTATS"
        assert data[10] == 1
        assert int.from_bytes(data[11:19], "little") == 4
        assert int.from_bytes(data[19:27], "little") == 12
        assert int.from_bytes(data[27:35], "little") == 8

    def test_unicode_tokens(self):
        stats = fit_stats([("ünï", "日本"), ("ünï",)])
        assert load_stats(save_stats(stats)) == stats

    def test_truncated(self, toy_stats):
        data = save_stats(toy_stats)
        for cut in (5, 11, 30, len(data) - 1):
            with pytest.raises(StatsFormatError):
                load_stats(data[:cut])

    def test_unknown_version(self, toy_stats):
        data = bytearray(save_stats(toy_stats))
        data[10] = 9
        with pytest.raises(StatsVersionError):
            load_stats(bytes(data))

    def test_deterministic_bytes(self, toy_docs):
        docs = list(toy_docs)
        random.Random(1).shuffle(docs)
        assert save_stats(fit_stats(docs)) == save_stats(fit_stats(toy_docs))


def test_stats_invariants_rejected():
    with pytest.raises(ValueError):
        CorpusStats(2, {"a": 3}, 5)
    with pytest.raises(ValueError):
        CorpusStats(2, {"a": 0}, 5)


def test_toy_corpus_constant_matches_fixture():
    with open(__file__.replace("test_entropy.py", "data/toy_corpus.txt"), encoding="utf-8") as fh:
        assert fh.read().splitlines() == TOY_CORPUS
