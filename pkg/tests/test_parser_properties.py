"""Randomized structural properties of the parser over generated modules."""

import random
import time

import pytest

import svgen
from bugscope.svparse import SourceFile, count_nodes, parse_source

N_CASES = 1000


def _count(text: str):
    return count_nodes([parse_source(SourceFile("gen.sv", text))])


def _dump(node, out):
    out.append((node.kind.value, len(node.children)))
    for child in node.children:
        _dump(child, out)


@pytest.fixture(scope="module")
def generated():
    cases = []
    for seed in range(N_CASES):
        tokens = svgen.generate_tokens(seed)
        cases.append((seed, tokens, svgen.render(tokens)))
    return cases


def test_determinism(generated):
    for seed, _, text in generated:
        first = parse_source(SourceFile("gen.sv", text))
        second = parse_source(SourceFile("gen.sv", text))
        a, b = [], []
        for root in first.members:
            _dump(root, a)
        for root in second.members:
            _dump(root, b)
        assert a == b, f"seed {seed}: differing trees across reparses"
        assert count_nodes([first]) == count_nodes([second]), f"seed {seed}"


def test_comment_invariance(generated):
    for seed, tokens, text in generated:
        base = _count(text)
        rng = random.Random(seed * 31 + 7)
        with_comments = svgen.render_with_comments(tokens, rng)
        assert _count(with_comments) == base, f"seed {seed}: comments changed counts"


def test_whitespace_invariance(generated):
    for seed, tokens, text in generated:
        base = _count(text)
        rng = random.Random(seed * 17 + 3)
        reflowed = svgen.render_with_whitespace(tokens, rng)
        assert _count(reflowed) == base, f"seed {seed}: whitespace changed counts"


def test_concatenation_additivity(generated):
    for i in range(0, N_CASES - 1, 2):
        _, _, s1 = generated[i]
        _, _, s2 = generated[i + 1]
        merged = _count(s1 + "\n" + s2)
        assert merged == _count(s1).merged(_count(s2)), f"pair ({i}, {i + 1})"


def test_runtime_budget(generated):
    start = time.monotonic()
    for _, _, text in generated[:200]:
        _count(text)
    elapsed = time.monotonic() - start
    assert elapsed < 6.0, f"200 parses took {elapsed:.1f}s"
