import csv
import io
import json
import math
import warnings

import numpy as np
import pytest

from conicldpc.codewords import random_codewords
from conicldpc.decoder import (
    CSV_COLUMNS,
    THREADS_ENV,
    ChannelPoint,
    GallagerSpec,
    InvalidDivisibility,
    LengthMismatch,
    SumProductDecoder,
    gallager_code,
    simulate_ber,
    snr_grid,
    sum_product_decode,
)
from conicldpc.gf2 import code_dimension
from conicldpc.incidence import cached_structure

STRONG = 25.0


@pytest.fixture(scope="module")
def c15():
    return cached_structure(1, 5).incidence_matrix()


def test_sigma_formula():
    p = ChannelPoint(3.0, 0.5)
    assert p.sigma == pytest.approx(math.sqrt(1 / (2 * 0.5 * 10**0.3)))
    with pytest.raises(ValueError):
        ChannelPoint(1.0, 1.0)


def test_snr_grid():
    assert snr_grid("1:0.5:5") == [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0]
    assert snr_grid("4:1:4") == [4.0]
    assert snr_grid("2, 3.5") == [2.0, 3.5]
    with pytest.raises(ValueError):
        snr_grid("1:0:2")


def test_all_zero_noiseless_converges_in_one_iteration(c15):
    hard, ok, iters = sum_product_decode(c15, np.full(c15.n_cols, STRONG))
    assert not hard.any() and ok and iters == 1


def test_zero_noise_roundtrip_of_random_codewords(c15, rng):
    words = random_codewords(c15, 100, rng)
    llr = STRONG * (1 - 2 * words.astype(np.float64))
    hard, ok, _ = SumProductDecoder(c15).decode(llr)
    assert ok.all()
    assert np.array_equal(hard, words)


def test_single_strong_flip_is_corrected(c15):
    dec = SumProductDecoder(c15)
    for pos in (0, 37, 124):
        llr = np.full(c15.n_cols, 4.0)
        llr[pos] = -4.0
        hard, ok, _ = dec.decode(llr)
        assert ok and not hard.any()


def test_random_word_far_from_code_fails(c15, rng):
    llr = rng.choice([-1.0, 1.0], size=c15.n_cols) * 0.05
    _, ok, iters = sum_product_decode(c15, llr, max_iter=10)
    assert not ok and iters == 10


@pytest.mark.parametrize("family,q", [(1, 4), (1, 8), (3, 5)])
def test_negating_llrs_flips_decisions_when_all_ones_is_a_codeword(family, q, rng):
    H = cached_structure(family, q).incidence_matrix()
    assert not (H.row_weights() % 2).any()
    llr = rng.normal(2.0, 2.0, size=(40, H.n_cols))
    dec = SumProductDecoder(H)
    a, ok_a, it_a = dec.decode(llr, 20)
    b, ok_b, it_b = dec.decode(-llr, 20)
    assert np.array_equal(a ^ 1, b)
    assert np.array_equal(ok_a, ok_b) and np.array_equal(it_a, it_b)


def test_codeword_flip_symmetry(c15, rng):
    # C(1,5) has odd row weight, so use a codeword instead of all-ones
    c = random_codewords(c15, 1, rng)[0]
    sign = 1 - 2 * c.astype(np.float64)
    llr = rng.normal(2.5, 2.0, size=(30, c15.n_cols))
    dec = SumProductDecoder(c15)
    a, ok_a, _ = dec.decode(llr, 20)
    b, ok_b, _ = dec.decode(llr * sign, 20)
    assert np.array_equal(a ^ c, b)
    assert np.array_equal(ok_a, ok_b)


def test_length_mismatch(c15):
    with pytest.raises(LengthMismatch):
        sum_product_decode(c15, np.ones(7))


def test_simulation_is_reproducible(c15, monkeypatch):
    kw = dict(min_trials=300, max_trials=300, seed=11, max_iter=20, batch=128)
    a = simulate_ber(c15, [1.0, 2.0], **kw)
    b = simulate_ber(c15, [1.0, 2.0], **kw)
    monkeypatch.setenv(THREADS_ENV, "2")
    c = simulate_ber(c15, [1.0, 2.0], **kw)
    assert a.rows() == b.rows() == c.rows()
    assert a.to_csv() == c.to_csv()
    d = simulate_ber(c15, [1.0, 2.0], **{**kw, "seed": 12})
    assert d.rows() != a.rows()


def test_high_snr_has_no_errors(c15):
    res = simulate_ber(c15, [20.0], min_trials=10_000, max_trials=10_000, batch=2000)
    p = res.points[0]
    assert p.trials == 10_000 and p.bit_errors == 0 and p.ber == 0.0


def test_ber_decreases_with_snr(c15):
    res = simulate_ber(c15, [1.0, 2.0, 3.0, 4.0, 5.0], min_trials=2000, max_trials=2000, seed=5)
    bers = [p.ber for p in res.points]
    # one-sided slack of three standard errors between neighbours
    for (lo, hi), p in zip(zip(bers, bers[1:]), res.points):
        se = math.sqrt(max(lo, 1e-12) / (p.trials * p.n))
        assert hi <= lo + 3 * se
    assert bers[0] > bers[-1]


def test_adaptive_stopping(c15):
    res = simulate_ber(c15, [0.0], min_trials=100, max_trials=50_000, target_errors=20, batch=100)
    p = res.points[0]
    assert p.frame_errors >= 20 and p.trials < 50_000


def test_result_serialisation(c15):
    res = simulate_ber(c15, [2.0], min_trials=200, max_trials=200, seed=3)
    rows = list(csv.DictReader(io.StringIO(res.to_csv())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert int(rows[0]["trials"]) == 200
    data = json.loads(res.to_json())
    assert data["n"] == 125 and data["k"] == 44
    assert data["config"]["seed"] == 3
    assert data["points"][0]["bit_errors"] == res.points[0].bit_errors


def test_gallager_parse():
    spec = GallagerSpec.parse("n=576,row=9,col=6,seed=1")
    assert spec == GallagerSpec(576, 9, 6, 1)
    assert spec.as_dict() == {"n": 576, "row_weight": 9, "col_weight": 6, "seed": 1}
    with pytest.raises(ValueError):
        GallagerSpec.parse("n=576,rows=9,col=6")
    with pytest.raises(InvalidDivisibility):
        GallagerSpec(580, 9, 6)


@pytest.mark.parametrize("n,row,col", [(576, 9, 6), (576, 9, 8), (580, 10, 6), (120, 6, 3)])
def test_gallager_regular_without_repeated_columns(n, row, col):
    H = gallager_code(GallagerSpec(n, row, col, seed=7))
    assert H.shape == (n // row * col, n)
    assert set(H.row_weights().tolist()) == {row}
    assert set(H.col_weights().tolist()) == {col}
    T = H.transpose()
    cols = {tuple(T.row(j).tolist()) for j in range(n)}
    assert len(cols) == n


def test_gallager_seeded():
    a = gallager_code(GallagerSpec(120, 6, 3, seed=1))
    assert a == gallager_code(GallagerSpec(120, 6, 3, seed=1))
    assert not a == gallager_code(GallagerSpec(120, 6, 3, seed=2))


def test_tiny_gallager_warns_about_forced_repeats():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        H = gallager_code(GallagerSpec(6, 3, 2))
    assert H.shape == (4, 6)
    assert set(H.row_weights().tolist()) == {3} and set(H.col_weights().tolist()) == {2}
    assert any("duplicate" in str(w.message) for w in caught)


def test_gallager_baseline_dimensions():
    assert code_dimension(gallager_code(GallagerSpec(576, 9, 6, seed=1))) == 197
    assert code_dimension(gallager_code(GallagerSpec(580, 10, 6, seed=1))) == 237
