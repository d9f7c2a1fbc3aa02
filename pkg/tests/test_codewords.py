import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conicldpc.codewords import (
    ClassEqualsBase,
    DegenerateClassPair,
    DimensionTooLarge,
    FlagWord,
    ForbiddenClass,
    is_codeword,
    min_distance_exhaustive,
    min_distance_information_sets,
    min_weight_codeword,
    psi_involution,
    psi_is_identity,
    random_codewords,
)
from conicldpc.ffield import GF
from conicldpc.geometry import Line, Point, conic_family, line_points, line_through
from conicldpc.gf2 import SparseBinaryMatrix, nullspace_basis
from conicldpc.incidence import cached_structure


def _brute_force_distance(dense):
    """Minimum weight over the whole span of a nullspace basis, by plain enumeration."""
    B = nullspace_basis(dense)
    k = B.shape[0]
    if k == 0:
        return 0
    masks = np.arange(1, 1 << k)
    coeffs = (masks[:, None] >> np.arange(k)) & 1
    return int((coeffs @ B.astype(np.int64) % 2).sum(axis=1).min())


def test_is_codeword_examples():
    s = cached_structure(1, 5)
    assert is_codeword(FlagWord(s, ()))
    assert not is_codeword(FlagWord(s, (7,)))
    assert FlagWord(s, (3, 1, 3)).support == (1, 3)
    with pytest.raises(IndexError):
        FlagWord(s, (s.n_points,))


def test_flagword_vector_roundtrip():
    s = cached_structure(2, 5)
    vec = np.zeros(s.n_points, dtype=np.uint8)
    vec[[0, 5, 17]] = 1
    w = FlagWord.from_vector(s, vec)
    assert w.weight == 3
    assert np.array_equal(w.to_vector(), vec)
    assert FlagWord.from_flags(s, w.flags()) == w


@pytest.mark.parametrize("q", [4, 5, 7])
@pytest.mark.parametrize("family", [1, 2, 3])
def test_psi_is_involution_and_choice_free(family, q):
    F = GF(q)
    classes = conic_family(F, family).classes
    for c0, c in itertools.permutations(classes, 2):
        images = set()
        for L0 in (line_through(F, Point(0, 0), c0), line_through(F, Point(1, 2), c0)):
            for P in line_points(F, L0):
                for choice in range(q - 1):
                    images.add(psi_involution(family, F, c0, c, L0=L0, P=P, choice=choice))
        assert len(images) == 1
        image = images.pop()
        assert image != c0
        assert psi_involution(family, F, c0, image) == c


@pytest.mark.parametrize("q", [4, 8, 16])
def test_psi_identity_for_family1_even(q):
    F = GF(q)
    assert all(psi_is_identity(1, F, c0) for c0 in range(q))


@pytest.mark.parametrize("q", [5, 7, 9])
def test_psi_not_identity_otherwise(q):
    F = GF(q)
    for family in (1, 2, 3):
        assert not psi_is_identity(family, F, conic_family(F, family).classes[0])


def test_psi_example_f5():
    F = GF(5)
    once = psi_involution(2, F, 4, 1)
    assert psi_involution(2, F, 4, once) == 1


def test_psi_errors():
    F = GF(5)
    with pytest.raises(ClassEqualsBase):
        psi_involution(1, F, 2, 2)
    with pytest.raises(ForbiddenClass):
        psi_involution(2, F, 0, 1)
    with pytest.raises(ForbiddenClass):
        psi_involution(1, F, 1, 5)


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11])
@pytest.mark.parametrize("family", [1, 2, 3])
def test_min_weight_codeword(family, q):
    w = min_weight_codeword(family, GF(q))
    assert w.weight == 2 * q
    assert is_codeword(w)


def test_min_weight_codeword_examples():
    F5 = GF(5)
    w = min_weight_codeword(1, F5, L0=Line(0, 0))
    assert w.weight == 10 and is_codeword(w)
    assert {f.point for f in w.flags()} == set(line_points(F5, Line(0, 0)))
    F4 = GF(4)
    for L0 in (Line(0, 1), Line(None, 2), Line(3, 3)):
        w = min_weight_codeword(3, F4, L0=L0)
        assert w.weight == 8 and is_codeword(w)
    assert min_weight_codeword(2, GF(7)).weight == 14


def test_min_weight_codeword_rejects_bad_input():
    F5 = GF(5)
    with pytest.raises(ForbiddenClass):
        min_weight_codeword(2, F5, L0=Line(0, 0))
    # find a fixed point of psi for family 2 and ask for it explicitly
    fixed = [c for c in range(2, 5) if psi_involution(2, F5, 1, c) == c]
    assert fixed
    with pytest.raises(DegenerateClassPair):
        min_weight_codeword(2, F5, L0=Line(1, 0), class_L=fixed[0])


@pytest.mark.parametrize("family,q", [(1, 5), (2, 5), (3, 5), (1, 8), (3, 7)])
def test_codewords_have_even_weight(family, q, rng):
    H = cached_structure(family, q).incidence_matrix()
    words = random_codewords(H, 50, rng)
    assert not np.any(words.sum(axis=1) % 2)
    assert not np.any((H.to_scipy() @ words.T.astype(np.int64)) % 2)


code_checks = st.tuples(st.integers(1, 8), st.integers(4, 20)).flatmap(
    lambda s: arrays(np.uint8, s, elements=st.integers(0, 1))
)


@given(code_checks)
def test_exhaustive_distance_matches_brute_force(dense):
    H = SparseBinaryMatrix.from_dense(dense)
    want = _brute_force_distance(dense)
    assert min_distance_exhaustive(H, table_bits=3) == want
    assert min_distance_exhaustive(H) == want
    assert min_distance_information_sets(H, max_weight=20) == want


def test_information_sets_on_larger_random_codes():
    for seed in range(6):
        r = np.random.default_rng(seed)
        dense = (r.random((24, 40)) < 0.15).astype(np.uint8)
        H = SparseBinaryMatrix.from_dense(dense)
        assert min_distance_information_sets(H, max_weight=30) == min_distance_exhaustive(H, max_dim=40)


@pytest.mark.parametrize("family,q,d", [(1, 4, 8), (2, 4, 8), (2, 5, 10)])
def test_exhaustive_distance_examples(family, q, d):
    assert min_distance_exhaustive(cached_structure(family, q).incidence_matrix()) == d


@pytest.mark.parametrize("family,q", [(3, 4), (1, 5), (3, 5)])
def test_information_set_distance(family, q):
    assert min_distance_information_sets(cached_structure(family, q).incidence_matrix()) == 2 * q


def test_dimension_guard():
    with pytest.raises(DimensionTooLarge):
        min_distance_exhaustive(cached_structure(1, 5).incidence_matrix())
