import os
import sys

import pytest

from wisse import EmbeddingTable, fit_stats, load_embeddings, load_sts_dataset, tokenize

DATA = os.path.join(os.path.dirname(__file__), "data")
sys.path.insert(0, os.path.dirname(__file__))

TOY_CORPUS = ["the dog barks", "the cat sleeps", "the dog sleeps", "a bird sings"]

ACCEPTANCE_LINES = []


def data_path(name):
    return os.path.join(DATA, name)


@pytest.fixture
def toy_docs():
    return [tokenize(s) for s in TOY_CORPUS]


@pytest.fixture
def toy_stats(toy_docs):
    return fit_stats(toy_docs)


@pytest.fixture
def toy_table():
    return EmbeddingTable(["the", "dog", "barks"], [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])


@pytest.fixture
def ten_pairs():
    with open(data_path("ten_pairs.txt"), "rb") as a, open(data_path("ten_pairs.gold"), "rb") as g:
        return load_sts_dataset(a, g)


@pytest.fixture
def emb2d():
    return load_embeddings(data_path("emb2d.txt"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
