import math
import random
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilex.corpus import TextHalf, normalize, pair_list_from_pairs, tokenize
from bilex.geometry import BitextSpace, CorrespondencePoint, interpolate, monotonize
from bilex.mapper import (
    MapperParams,
    MatchHeuristic,
    SearchRect,
    accept_chain,
    generate_candidates,
    lcsr,
    map_bitext,
)
from bilex.synth import SyntheticConfig, generate_synthetic_bitext

P = CorrespondencePoint

COGNATE = MatchHeuristic(kind="cognate-lcsr")
EXACT = MatchHeuristic(kind="exact-match")


# --- LCSR -------------------------------------------------------------------


def lcs_oracle(a, b):
    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == 0 or j == 0:
            return 0
        if a[i - 1] == b[j - 1]:
            return rec(i - 1, j - 1) + 1
        return max(rec(i - 1, j), rec(i, j - 1))

    return rec(len(a), len(b))


def test_lcsr_identical():
    assert lcsr("extensions", "extensions") == 1.0


def test_lcsr_disjoint():
    assert lcsr("abc", "xyz") == 0.0


def test_lcsr_cognate_pair():
    # LCS(activée, activates) = |activ| + |e| = 6, max length 9.
    assert lcsr("activée", "activates") == pytest.approx(6 / 9)


def test_lcsr_empty_raises():
    with pytest.raises(ValueError):
        lcsr("", "abc")


@settings(max_examples=300)
@given(
    st.text(alphabet="abcdef", min_size=1, max_size=12),
    st.text(alphabet="abcdef", min_size=1, max_size=12),
)
def test_lcsr_matches_dp_oracle(a, b):
    assert lcsr(a, b) == pytest.approx(lcs_oracle(a, b) / max(len(a), len(b)))


@given(
    st.text(alphabet="abcdef", min_size=1, max_size=10),
    st.text(alphabet="abcdef", min_size=1, max_size=10),
)
def test_lcsr_symmetric_and_bounded(a, b):
    assert 0.0 <= lcsr(a, b) <= 1.0
    assert lcsr(a, b) == lcsr(b, a)


# --- candidate generation ----------------------------------------------------


def halves(words_a, words_b):
    tokens_a = tokenize(TextHalf("a", " ".join(words_a)))
    tokens_b = tokenize(TextHalf("b", " ".join(words_b)))
    return tokens_a, tokens_b


def full_rect(tokens_a, tokens_b):
    return SearchRect(
        x_lo=-1.0,
        x_hi=float(max(t.end for t in tokens_a)),
        y_lo=-1.0,
        y_hi=float(max(t.end for t in tokens_b)),
    )


def test_exact_match_emits_point():
    tokens_a, tokens_b = halves(["cpio"], ["cpio"])
    rect = full_rect(tokens_a, tokens_b)
    points = generate_candidates(rect, tokens_a, tokens_b, [EXACT], MapperParams())
    assert points == {P(tokens_a[0].center, tokens_b[0].center)}


def test_low_lcsr_pair_is_not_a_candidate():
    tokens_a, tokens_b = halves(["sont"], ["will"])
    rect = full_rect(tokens_a, tokens_b)
    assert generate_candidates(rect, tokens_a, tokens_b, [COGNATE], MapperParams()) == set()


def test_seed_lexicon_matches_normalized_pair():
    seed = MatchHeuristic(
        kind="seed-lexicon", resources=pair_list_from_pairs([("chien", "dog")])
    )
    tokens_a, tokens_b = halves(["Chien"], ["Dog"])
    rect = full_rect(tokens_a, tokens_b)
    points = generate_candidates(rect, tokens_a, tokens_b, [seed], MapperParams())
    assert len(points) == 1


def test_seed_heuristic_requires_pairs():
    with pytest.raises(ValueError):
        MatchHeuristic(kind="seed-lexicon")


def candidate_oracle(rect, tokens_a, tokens_b, heuristics, params):
    """Brute-force filter of all in-rect word-token pairs."""
    seed_pairs = set()
    kinds = set()
    for h in heuristics:
        kinds.add(h.kind)
        if h.resources is not None:
            seed_pairs |= h.resources.pairs
    points = set()
    for a in tokens_a:
        if not a.is_word or not rect.x_lo < a.center <= rect.x_hi:
            continue
        for b in tokens_b:
            if not b.is_word or not rect.y_lo < b.center <= rect.y_hi:
                continue
            match = False
            if "exact-match" in kinds and a.norm == b.norm:
                match = True
            if not match and "seed-lexicon" in kinds and (a.norm, b.norm) in seed_pairs:
                match = True
            if not match and "cognate-lcsr" in kinds:
                fa = normalize(a.norm, fold_diacritics=True)
                fb = normalize(b.norm, fold_diacritics=True)
                la = sum(1 for c in fa if c.isalpha())
                lb = sum(1 for c in fb if c.isalpha())
                if la >= 4 and lb >= 4 and lcsr(fa, fb) >= params.lcsr_threshold:
                    match = True
            if match:
                points.add(P(a.center, b.center))
    return points


def test_candidates_match_exhaustive_oracle():
    rng = random.Random(7)
    params = MapperParams()
    synth = generate_synthetic_bitext(
        SyntheticConfig(lexicon_size=30, segment_count=6, cognate_rate=0.5, seed=5)
    )
    tokens_a = tokenize(synth.half_a)
    tokens_b = tokenize(synth.half_b)
    heuristics = [COGNATE, EXACT]
    for _ in range(10):
        x0 = rng.uniform(0, synth.half_a.length * 0.8)
        y0 = rng.uniform(0, synth.half_b.length * 0.8)
        rect = SearchRect(x0, x0 + 400, y0, y0 + 400)
        got = generate_candidates(rect, tokens_a, tokens_b, heuristics, params)
        assert got == candidate_oracle(rect, tokens_a, tokens_b, heuristics, params)


# --- chain acceptance --------------------------------------------------------


def least_squares_oracle(points):
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    n = len(points)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    intercept = my - slope * mx
    rms = math.sqrt(sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys)) / n)
    return slope, rms


def test_accept_chain_on_diagonal():
    space = BitextSpace(100, 100)
    chain = [P(i * 10, i * 10) for i in range(1, 7)]
    assert accept_chain(chain, space, MapperParams())


def test_reject_chain_with_large_residual():
    space = BitextSpace(1000, 1000)
    params = MapperParams()
    displaced = int(50 * params.max_rms_error)
    chain = [P(i * 100, i * 100) for i in range(1, 6)]
    chain.append(P(600, 600 + displaced))
    assert not accept_chain(chain, space, params)


def test_reject_chain_with_shared_coordinate():
    space = BitextSpace(100, 100)
    chain = [P(10, 10), P(20, 20), P(30, 30), P(40, 40), P(50, 50), P(60, 50)]
    assert not accept_chain(chain, space, MapperParams())


def test_reject_offslope_chain():
    space = BitextSpace(1000, 1000)
    # Perfectly linear but slope 0.5, far from the unit diagonal.
    chain = [P(100 + i * 100, 50 + i * 50) for i in range(6)]
    assert not accept_chain(chain, space, MapperParams(max_slope_deviation=0.33))


def test_chain_decision_matches_least_squares_oracle():
    rng = random.Random(42)
    space = BitextSpace(2000, 2000)
    params = MapperParams()
    for _ in range(200):
        slope = rng.uniform(0.5, 1.5)
        xs = sorted(rng.sample(range(100, 1900), 6))
        pts = []
        used_y = set()
        for x in xs:
            y = int(x * slope + rng.uniform(-15, 15))
            while y in used_y:
                y += 1
            used_y.add(y)
            pts.append(P(x, max(0, y)))
        o_slope, o_rms = least_squares_oracle(pts)
        slope_ok = abs(o_slope - 1.0) <= params.max_slope_deviation
        rms_ok = o_rms <= params.max_rms_error
        # Skip knife-edge cases where float noise could flip the decision.
        if abs(o_rms - params.max_rms_error) < 1e-9:
            continue
        assert accept_chain(pts, space, params) == (slope_ok and rms_ok)


# --- full mapping ------------------------------------------------------------


def test_self_bitext_maps_to_identity():
    words = [f"token{i:03d}" for i in range(200)]
    rng = random.Random(3)
    rng.shuffle(words)
    text = " ".join(words)
    tokens = tokenize(TextHalf("x", text))
    space = BitextSpace(len(text), len(text))
    result = map_bitext(tokens, tokens, space, [EXACT])
    assert len(result.bitext_map) > 0
    m = monotonize(result.bitext_map)
    params = MapperParams()
    for x in range(0, len(text), 97):
        assert abs(interpolate(m, space, x) - x) <= params.max_rms_error


def test_map_bitext_deterministic():
    synth = generate_synthetic_bitext(
        SyntheticConfig(lexicon_size=50, segment_count=20, cognate_rate=0.6, seed=11)
    )
    tokens_a = tokenize(synth.half_a)
    tokens_b = tokenize(synth.half_b)
    space = BitextSpace(synth.half_a.length, synth.half_b.length)
    r1 = map_bitext(tokens_a, tokens_b, space, [COGNATE, EXACT])
    r2 = map_bitext(tokens_a, tokens_b, space, [COGNATE, EXACT])
    assert r1.bitext_map.points() == r2.bitext_map.points()


def test_map_is_injective():
    synth = generate_synthetic_bitext(
        SyntheticConfig(lexicon_size=60, segment_count=30, cognate_rate=0.5, seed=23)
    )
    tokens_a = tokenize(synth.half_a)
    tokens_b = tokenize(synth.half_b)
    space = BitextSpace(synth.half_a.length, synth.half_b.length)
    points = map_bitext(tokens_a, tokens_b, space, [COGNATE, EXACT]).bitext_map.points()
    assert len({p.x for p in points}) == len(points)
    assert len({p.y for p in points}) == len(points)


def test_no_heuristic_match_gives_empty_map_with_note():
    tokens_a, tokens_b = halves(["aaaa"] * 30, ["zzzz"] * 30)
    space = BitextSpace(200, 200)
    result = map_bitext(tokens_a, tokens_b, space, [COGNATE])
    assert len(result.bitext_map) == 0
    assert "no chain" in result.note


def true_map_error(synth, result):
    """Mean |interpolated - true| over ground-truth points."""
    space = BitextSpace(synth.half_a.length, synth.half_b.length)
    m = monotonize(result.bitext_map)
    errors = [abs(interpolate(m, space, t.x) - t.y) for t in synth.true_points]
    return sum(errors) / len(errors)


def test_robust_to_omissions():
    synth = generate_synthetic_bitext(
        SyntheticConfig(
            lexicon_size=80,
            segment_count=60,
            cognate_rate=1.0,
            omission_rate=0.1,
            seed=17,
        )
    )
    tokens_a = tokenize(synth.half_a)
    tokens_b = tokenize(synth.half_b)
    space = BitextSpace(synth.half_a.length, synth.half_b.length)
    result = map_bitext(tokens_a, tokens_b, space, [COGNATE, EXACT])
    assert len(result.bitext_map) > 0
    assert true_map_error(synth, result) <= 30.0


def test_runtime_scales_linearly_on_self_bitexts():
    import time

    def self_map_seconds(n_words):
        rng = random.Random(8)
        words = [f"w{rng.randrange(2000):04d}x" for _ in range(n_words)]
        tokens = tokenize(TextHalf("x", " ".join(words)))
        space = BitextSpace(tokens[-1].end + 1, tokens[-1].end + 1)
        best = float("inf")
        for _ in range(2):
            start = time.perf_counter()
            result = map_bitext(tokens, tokens, space, [EXACT])
            best = min(best, time.perf_counter() - start)
        assert len(result.bitext_map) > 0
        return best

    small = self_map_seconds(6000)
    large = self_map_seconds(12000)
    assert large <= 2.5 * small + 0.05, f"{small:.3f}s -> {large:.3f}s"


def test_added_nonmatching_noise_keeps_accepted_points():
    # Self-bitext, then the same halves with different (mutually non-matching)
    # gibberish appended to each: the diagonal slope and every earlier search
    # rectangle are unchanged, so previously accepted points must survive.
    rng = random.Random(31)
    words = [f"word{i:03d}" for i in range(300)]
    rng.shuffle(words)
    base = " ".join(words)
    noise_a = " ".join("qqqqqvvvvv" for _ in range(40))
    noise_b = " ".join("zzzzzjjjjj" for _ in range(40))
    tokens_a1 = tokenize(TextHalf("a", base))
    space1 = BitextSpace(len(base), len(base))
    before = set(map_bitext(tokens_a1, tokens_a1, space1, [EXACT]).bitext_map.points())

    text_a = base + " " + noise_a
    text_b = base + " " + noise_b
    assert len(text_a) == len(text_b)
    tokens_a2 = tokenize(TextHalf("a", text_a))
    tokens_b2 = tokenize(TextHalf("b", text_b))
    space2 = BitextSpace(len(text_a), len(text_b))
    after = set(map_bitext(tokens_a2, tokens_b2, space2, [EXACT]).bitext_map.points())
    assert before <= after


def test_planted_cognates_align_within_tolerance():
    synth = generate_synthetic_bitext(
        SyntheticConfig(
            lexicon_size=100,
            segment_count=80,
            cognate_rate=0.3,
            omission_rate=0.0,
            permutation_window=1,
            seed=29,
        )
    )
    tokens_a = tokenize(synth.half_a)
    tokens_b = tokenize(synth.half_b)
    space = BitextSpace(synth.half_a.length, synth.half_b.length)
    result = map_bitext(tokens_a, tokens_b, space, [COGNATE, EXACT])
    truth = {t.x: t.y for t in synth.true_points}
    points = result.bitext_map.points()
    assert points
    near = sum(1 for p in points if p.x in truth and abs(p.y - truth[p.x]) <= 20)
    assert near / len(points) >= 0.9
