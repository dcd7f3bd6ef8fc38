import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilex.corpus import TextHalf, tokenize
from bilex.geometry import (
    BitextMap,
    BitextSpace,
    CorrespondencePoint,
    InjectivityError,
    MonotonicMap,
    UndefinedMapError,
    banded_pairs,
    count_cooccurrences,
    interpolate,
    monotonize,
)

P = CorrespondencePoint


def mono(*pairs):
    return MonotonicMap(points=tuple(P(x, y) for x, y in pairs))


# --- independent oracles ---------------------------------------------------


def mer_oracle(points):
    """Minimal non-monotonic set finder via the prefix-max/suffix-min block
    characterization: a boundary exists after position i iff every earlier y
    is below every later y. Blocks of size one survive verbatim; larger
    blocks contribute their rectangle corners."""
    pts = sorted(points, key=lambda p: p.x)
    ys = [p.y for p in pts]
    n = len(pts)
    if n == 0:
        return []
    boundaries = [0]
    for i in range(1, n):
        if max(ys[:i]) < min(ys[i:]):
            boundaries.append(i)
    boundaries.append(n)
    out = []
    for lo, hi in zip(boundaries, boundaries[1:]):
        block = pts[lo:hi]
        if len(block) == 1:
            out.append(block[0])
        else:
            out.append(P(block[0].x, min(p.y for p in block)))
            out.append(P(block[-1].x, max(p.y for p in block)))
    return out


def interp_oracle(points, space, x):
    pts = sorted(points, key=lambda p: p.x)
    segs = [(0.0, 0.0)] + [(float(p.x), float(p.y)) for p in pts] + [
        (float(space.width), float(space.height))
    ]
    for p in pts:
        if x == p.x:
            return float(p.y)
    for (x0, y0), (x1, y1) in zip(segs, segs[1:]):
        if x0 <= x <= x1 and x0 != x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise AssertionError("x outside oracle segments")


def cooccurrence_oracle(tokens_a, tokens_b, mono_map, space, delta, content_only):
    """All-pairs scan defining the band; the fast path must match exactly."""
    a_tokens = [t for t in tokens_a if t.is_content or not content_only]
    b_tokens = [t for t in tokens_b if t.is_content or not content_only]
    joint = {}
    for a in a_tokens:
        ya = interp_oracle(mono_map.points, space, a.center)
        for b in b_tokens:
            if abs(b.center - ya) <= delta:
                key = (a.norm, b.norm)
                joint[key] = joint.get(key, 0) + 1
    return joint


# --- injectivity -----------------------------------------------------------


def test_bitext_map_rejects_shared_x():
    with pytest.raises(InjectivityError):
        BitextMap([P(1, 1), P(1, 2)])


def test_bitext_map_rejects_shared_y():
    with pytest.raises(InjectivityError):
        BitextMap([P(1, 5), P(2, 5)])


def test_bitext_map_add_rejects_conflicts():
    m = BitextMap([P(1, 1)])
    assert not m.add(P(1, 9))
    assert not m.add(P(9, 1))
    assert m.add(P(2, 2))
    assert len(m) == 2


# --- monotonize ------------------------------------------------------------


def test_monotonize_single_inversion_uses_mer_corners():
    m = BitextMap([P(1, 4), P(2, 3), P(5, 6)])
    assert monotonize(m).points == (P(1, 3), P(2, 4), P(5, 6))


def test_monotonize_identity_on_monotonic_input():
    m = BitextMap([P(1, 1), P(2, 2)])
    assert monotonize(m).points == (P(1, 1), P(2, 2))


def test_monotonize_empty_map():
    assert monotonize(BitextMap()).points == ()


def test_monotonize_overlap_closure_pulls_in_neighbors():
    # (3,2) overlaps the MER of the first inversion, so all three collapse.
    m = BitextMap([P(1, 5), P(2, 1), P(3, 2)])
    assert monotonize(m).points == (P(1, 1), P(3, 5))


@st.composite
def injective_point_sets(draw, max_points=12):
    n = draw(st.integers(min_value=0, max_value=max_points))
    xs = draw(
        st.lists(st.integers(0, 400), min_size=n, max_size=n, unique=True)
    )
    ys = draw(
        st.lists(st.integers(0, 400), min_size=n, max_size=n, unique=True)
    )
    return [P(x, y) for x, y in zip(sorted(xs), ys)]


@settings(max_examples=300)
@given(injective_point_sets())
def test_monotonize_matches_oracle_and_is_monotonic(points):
    result = monotonize(BitextMap(points)).points
    assert list(result) == mer_oracle(points)
    for prev, cur in zip(result, result[1:]):
        assert prev.x < cur.x and prev.y < cur.y
    if points:
        assert result[0].x == min(p.x for p in points)
        assert result[-1].x == max(p.x for p in points)


# --- interpolate -----------------------------------------------------------


def test_interpolate_midpoint():
    space = BitextSpace(11, 21)
    assert interpolate(mono((0, 0), (10, 20)), space, 5) == pytest.approx(10.0)


def test_interpolate_extends_through_corners():
    space = BitextSpace(100, 100)
    assert interpolate(mono((10, 10)), space, 55) == pytest.approx(55.0)


def test_interpolate_between_segments():
    space = BitextSpace(20, 20)
    assert interpolate(mono((0, 0), (4, 8), (10, 14)), space, 7) == pytest.approx(11.0)


def test_interpolate_empty_map_is_undefined():
    with pytest.raises(UndefinedMapError):
        interpolate(MonotonicMap(points=()), BitextSpace(10, 10), 1)


@settings(max_examples=200)
@given(injective_point_sets(max_points=8), st.integers(0, 400))
def test_interpolate_monotone_in_x(points, x):
    m = monotonize(BitextMap(points))
    if not m.points:
        return
    space = BitextSpace(500, 500)
    y0 = interpolate(m, space, x)
    y1 = interpolate(m, space, x + 3)
    assert y0 <= y1 + 1e-9


# --- co-occurrence counting ------------------------------------------------


def word_tokens(words, language="x"):
    return tokenize(TextHalf(language, " ".join(words)))


def test_cooccurrence_zero_deviation_counts():
    # One token per half, both centered at 50 on the identity diagonal.
    tokens_a = tokenize(TextHalf("a", " " * 48 + "abcde"))
    tokens_b = tokenize(TextHalf("b", " " * 48 + "vwxyz"))
    assert tokens_a[0].center == tokens_b[0].center == 50
    space = BitextSpace(101, 101)
    m = mono((0, 0), (100, 100))
    counts = count_cooccurrences(tokens_a, tokens_b, m, space, delta=10)
    assert counts.joint == {("abcde", "vwxyz"): 1}
    assert counts.total_pairs == 1


def test_cooccurrence_outside_band_does_not_count():
    tokens_a = tokenize(TextHalf("a", " " * 48 + "abcde"))
    tokens_b = tokenize(TextHalf("b", " " * 68 + "vwxyz"))
    assert tokens_b[0].center == 70
    space = BitextSpace(101, 101)
    m = mono((0, 0), (100, 100))
    counts = count_cooccurrences(tokens_a, tokens_b, m, space, delta=10)
    assert counts.joint == {}
    assert counts.total_pairs == 0


def test_cooccurrence_requires_positive_delta():
    tokens = word_tokens(["one"])
    with pytest.raises(ValueError):
        count_cooccurrences(tokens, tokens, mono((0, 0)), BitextSpace(10, 10), delta=0)


def test_cooccurrence_empty_map_is_undefined():
    tokens = word_tokens(["one"])
    with pytest.raises(UndefinedMapError):
        count_cooccurrences(tokens, tokens, MonotonicMap(points=()), BitextSpace(10, 10), 5)


def random_bitext(rng, n_tokens, vocab=8):
    words = [f"w{rng.randrange(vocab)}" for _ in range(n_tokens)]
    return word_tokens(words)


def random_monotonic_map(rng, space, max_points=6):
    n = rng.randint(1, max_points)
    xs = sorted(rng.sample(range(space.width), min(n, space.width)))
    ys = sorted(rng.sample(range(space.height), min(len(xs), space.height)))
    return MonotonicMap(points=tuple(P(x, y) for x, y in zip(xs, ys)))


def test_cooccurrence_matches_all_pairs_oracle():
    rng = random.Random(1234)
    for trial in range(60):
        tokens_a = random_bitext(rng, rng.randint(1, 30))
        tokens_b = random_bitext(rng, rng.randint(1, 30))
        width = max(t.end for t in tokens_a) + 1
        height = max(t.end for t in tokens_b) + 1
        space = BitextSpace(width, height)
        m = random_monotonic_map(rng, space)
        delta = rng.choice([5, 25, 60])
        content_only = rng.random() < 0.5
        counts = count_cooccurrences(tokens_a, tokens_b, m, space, delta, content_only)
        oracle = cooccurrence_oracle(tokens_a, tokens_b, m, space, delta, content_only)
        assert counts.joint == oracle, f"trial {trial} diverged"
        assert counts.total_pairs == sum(oracle.values())


def test_marginals_count_all_instances_independent_of_delta():
    tokens_a = word_tokens(["alpha", "beta", "alpha"])
    tokens_b = word_tokens(["uno", "dos"])
    space = BitextSpace(20, 10)
    m = mono((0, 0), (19, 9))
    small = count_cooccurrences(tokens_a, tokens_b, m, space, delta=1)
    large = count_cooccurrences(tokens_a, tokens_b, m, space, delta=9)
    assert small.source_marginal == large.source_marginal == {"alpha": 2, "beta": 1}
    assert small.target_marginal == large.target_marginal == {"uno": 1, "dos": 1}


def test_banded_pairs_records_deviation():
    tokens_a = word_tokens(["abc"])
    tokens_b = word_tokens(["xyz"])
    space = BitextSpace(10, 10)
    pairs = banded_pairs(tokens_a, tokens_b, mono((0, 0), (9, 9)), space, delta=5)
    assert len(pairs) == 1
    assert pairs[0].deviation == pytest.approx(0.0)
