import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from epstein_lab.errors import DomainError, ResourceError
from epstein_lab.qform import (QuadraticForm, RepCountTable, count_classes, discriminant, gauss_sum,
                               reduced_forms, rep_counts, residue, stark_k)

forms = st.tuples(st.integers(1, 12), st.integers(-12, 12), st.integers(1, 12)).filter(
    lambda t: 4 * t[0] * t[2] - t[1] ** 2 >= 1).map(lambda t: QuadraticForm(*t))


def brute_counts(form, N):
    R = math.isqrt(4 * max(form.a, form.c) * N) + 2
    counts = [0] * (N + 1)
    for x, y in product(range(-R, R + 1), repeat=2):
        if (x, y) != (0, 0):
            n = form(x, y)
            if n <= N:
                counts[n] += 1
    return counts


@pytest.mark.parametrize("abc, d", [((1, 0, 1), 4), ((1, 1, 1), 3), ((1, 0, 57), 228)])
def test_discriminant_examples(abc, d):
    assert discriminant(QuadraticForm(*abc)) == d


@pytest.mark.parametrize("abc", [(0, 0, 1), (1, 2, 1), (1, 0, -1), (-1, 0, -1)])
def test_rejects_non_definite(abc):
    with pytest.raises(DomainError):
        QuadraticForm(*abc)


def test_parse_and_str_roundtrip():
    f = QuadraticForm.parse(" 2, -1, 3 ")
    assert f == QuadraticForm(2, -1, 3)
    assert QuadraticForm.parse(str(f)) == f
    with pytest.raises(DomainError):
        QuadraticForm.parse("1,2")
    with pytest.raises(DomainError):
        QuadraticForm.parse("1,x,2")


def test_square_disc_flag():
    assert QuadraticForm(1, 0, 1).square_disc
    assert not QuadraticForm(1, 1, 1).square_disc


def test_rep_counts_examples():
    t = rep_counts(QuadraticForm(1, 0, 1), 5)
    assert list(t.counts[1:]) == [4, 4, 0, 4, 8]
    assert rep_counts(QuadraticForm(1, 1, 1), 1).counts[1] == 6


def test_rep_counts_rejects_bad_sizes():
    with pytest.raises(DomainError):
        rep_counts(QuadraticForm(1, 0, 1), 0)
    with pytest.raises(ResourceError):
        rep_counts(QuadraticForm(1, 0, 1), 100, budget=50)


def test_table_is_read_only():
    t = rep_counts(QuadraticForm(1, 0, 1), 10)
    with pytest.raises(ValueError):
        t.counts[1] = 0


@given(forms, st.integers(1, 60))
def test_rep_counts_match_brute_force(form, N):
    assert list(rep_counts(form, N).counts) == brute_counts(form, N)


@given(forms)
def test_adjoint_has_same_counts(form):
    assert np.array_equal(rep_counts(form, 300).counts, rep_counts(form.adjoint(), 300).counts)


def test_lattice_count_asymptotics():
    for abc in [(1, 0, 1), (1, 1, 1), (1, 0, 57)]:
        f = QuadraticForm(*abc)
        N = 200_000
        total = int(rep_counts(f, N).counts.sum())
        dev = abs(total - residue(f) * N) / math.sqrt(N)
        assert dev < 100


def test_rep_counts_grow_slowly():
    for abc in [(1, 0, 1), (1, 1, 1), (1, 0, 57)]:
        c = rep_counts(QuadraticForm(*abc), 10 ** 6).counts
        n = np.arange(1, c.size)
        assert np.max(c[1:] / n ** 0.2) < 100


def test_csv_roundtrip(tmp_path):
    f = QuadraticForm(1, 1, 1)
    t = rep_counts(f, 50)
    p = tmp_path / "r.csv"
    t.to_csv(p)
    assert p.read_text().splitlines()[0] == "n,r"
    back = RepCountTable.from_csv(f, p)
    assert np.array_equal(back.counts, t.counts)


def brute_gauss(form, k, h):
    return sum(np.exp(2j * np.pi * h * form(x, y) / k) for x in range(k) for y in range(k))


def test_gauss_sum_examples():
    f = QuadraticForm(1, 0, 1)
    assert gauss_sum(f, 1, 1) == pytest.approx(1)
    assert abs(gauss_sum(f, 2, 1)) < 1e-12
    assert abs(gauss_sum(f, 3, 1)) <= 3 + 1e-12


@given(forms, st.integers(1, 25), st.integers(1, 200))
def test_gauss_sum_matches_brute_force(form, k, h):
    if math.gcd(h, k) != 1:
        with pytest.raises(DomainError):
            gauss_sum(form, k, h)
        return
    g = gauss_sum(form, k, h)
    assert abs(g - brute_gauss(form, k, h)) < 1e-9 * k * k
    assert abs(g) <= math.gcd(form.disc, k) * k * (1 + 1e-12)


@pytest.mark.parametrize("d, h", [(4, 1), (3, 1), (23, 3), (20, 2), (56, 4), (71, 7)])
def test_count_classes(d, h):
    assert count_classes(d) == h


def test_count_classes_rejects_bad_discriminant():
    with pytest.raises(DomainError):
        count_classes(5)


@given(st.integers(3, 400).filter(lambda d: d % 4 in (0, 3)))
def test_reduced_forms_are_reduced(d):
    for f in reduced_forms(d):
        assert f.disc == d
        assert abs(f.b) <= f.a <= f.c
        if abs(f.b) == f.a or f.a == f.c:
            assert f.b >= 0


def test_stark_k():
    assert stark_k(QuadraticForm(1, 0, 1)) == 1.0
    assert stark_k(QuadraticForm(1, 0, 57)) == pytest.approx(math.sqrt(228) / 2)
    # k is unchanged when the form is scaled
    assert stark_k(QuadraticForm(2, 0, 2)) == 1.0
