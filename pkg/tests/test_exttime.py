"""Saturating arithmetic on [0, inf] time values."""

import math

import pytest
from hypothesis import given, strategies as st

from lorlen.exttime import INF, close, ext_add, ext_sub, is_valid


def test_inf_is_float_infinity():
    assert INF == math.inf and math.isinf(INF)


def test_is_valid():
    assert is_valid(0.0)
    assert is_valid(2.5)
    assert is_valid(INF)
    assert not is_valid(-1e-300)
    assert not is_valid(float("nan"))


def test_add_finite_and_absorbing():
    assert ext_add(1.5, 2.25) == 3.75
    assert ext_add(1.5, INF) == INF
    assert ext_add(INF, INF) == INF


def test_add_rejects_invalid():
    with pytest.raises(ValueError):
        ext_add(-1.0, 2.0)
    with pytest.raises(ValueError):
        ext_add(float("nan"), 0.0)


def test_sub_defined_cases():
    assert ext_sub(3.0, 1.0) == 2.0
    assert ext_sub(INF, 7.0) == INF
    assert ext_sub(2.0, 2.0) == 0.0


def test_sub_undefined_cases():
    with pytest.raises(ValueError):
        ext_sub(INF, INF)
    with pytest.raises(ValueError):
        ext_sub(1.0, INF)
    with pytest.raises(ValueError):
        ext_sub(1.0, 2.0)


def test_close_semantics():
    assert close(1.0, 1.0 + 1e-12, 1e-9)
    assert not close(1.0, 1.1, 1e-9)
    assert close(INF, INF, 0.0)
    assert not close(INF, 5.0, 1e9)
    # absolute floor: small values compare on an absolute scale
    assert close(1e-15, 0.0, 1e-9)


nonneg = st.floats(min_value=0.0, max_value=1e6, allow_nan=False)


@given(nonneg, nonneg)
def test_add_is_commutative_and_monotone(a, b):
    assert ext_add(a, b) == ext_add(b, a)
    assert ext_add(a, b) >= a


@given(nonneg, nonneg)
def test_sub_inverts_add(a, b):
    # one rounding in the add, one in the subtract
    assert ext_sub(ext_add(a, b), b) == pytest.approx(a, abs=1e-9 * (1.0 + b), rel=1e-9)
