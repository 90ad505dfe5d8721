import itertools

import pytest

from rtec.expr import label_occurrences, parse_rte

SIGMA = "ab"
GAMMA = "cdexyzw#"


def mk(text, sigma=SIGMA, gamma=GAMMA):
    return label_occurrences(parse_rte(text, sigma, gamma))


def words_upto(n, sigma=SIGMA):
    out = []
    for m in range(n + 1):
        out.extend("".join(t) for t in itertools.product(sigma, repeat=m))
    return out


@pytest.fixture(scope="session")
def short_words():
    return words_upto(5)
