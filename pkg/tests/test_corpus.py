from __future__ import annotations

import pytest

from qutes.pipeline import run_source
from qutes.runtime import RunConfig

EXPECTED = {
    "cyclic_shift.qut": "11\n14\n1001\n",
    "dj.qut": "balanced\n",
    "language_semantics.qut": "30\n-3\n1\n1024\n3.0\n01\nflipped\n3\n1\ntrue\n[1, 2, 3, 4]\n",
    "substring.qut": "2\n-1\n",
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_deterministic_programs(corpus_dir, name):
    path = corpus_dir / name
    for seed in (0, 1, 99):
        result = run_source(path.read_text(), RunConfig(seed=seed), str(path))
        assert result.exit == 0 and result.stdout == EXPECTED[name]


@pytest.mark.parametrize("name", ["bell.qut", "entanglement.qut"])
def test_correlated_pairs(corpus_dir, name):
    path = corpus_dir / name
    outcomes = set()
    for seed in range(30):
        result = run_source(path.read_text(), RunConfig(seed=seed), str(path))
        first, last = result.stdout.splitlines()
        assert result.exit == 0 and first == last
        outcomes.add(first)
    assert outcomes == {"true", "false"}
