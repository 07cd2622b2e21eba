from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import TYPE_ORDER, conversion_table
from qutes.sema.types import (
    BASE_TYPES,
    BOOL,
    FLOAT,
    INT,
    QUBIT,
    QUINT,
    QUSTRING,
    STRING,
    QutesTypeError,
    array_of,
    can_promote,
    convertible,
    demote,
    from_name,
    numeric_join,
    promote_type,
    requires_measurement,
)

base = st.sampled_from(BASE_TYPES)
element = st.sampled_from([t for t in BASE_TYPES if t.kind.value != "void"])


def cell(src, dst):
    if can_promote(src, dst):
        return "P"
    if requires_measurement(src, dst):
        return "M"
    return "."


def test_table_matches_hand_written_lattice():
    table = conversion_table()
    for a, b in itertools.product(BASE_TYPES, repeat=2):
        assert cell(a, b) == table[(a.kind.value, b.kind.value)], (a, b)
    assert {t.kind.value for t in BASE_TYPES} == set(TYPE_ORDER)


def test_named_promotions():
    assert can_promote(BOOL, INT) and can_promote(INT, FLOAT) and can_promote(BOOL, FLOAT)
    assert can_promote(INT, QUINT) and can_promote(STRING, QUSTRING) and can_promote(BOOL, QUBIT)
    assert not can_promote(QUINT, INT)
    assert requires_measurement(QUINT, INT) and requires_measurement(QUBIT, BOOL)
    assert requires_measurement(QUSTRING, STRING)
    assert not requires_measurement(INT, FLOAT)
    assert not convertible(FLOAT, INT)


def test_promote_type_and_demote():
    assert promote_type(BOOL, QUINT) == QUINT
    with pytest.raises(QutesTypeError):
        promote_type(QUINT, INT)
    assert demote(QUINT) == INT
    with pytest.raises(QutesTypeError):
        demote(INT)


def test_arrays_promote_element_wise():
    assert can_promote(array_of(INT), array_of(FLOAT))
    assert not can_promote(array_of(FLOAT), array_of(INT))
    assert not can_promote(INT, array_of(INT))
    assert not requires_measurement(QUINT, array_of(INT))
    assert str(from_name("int", 2)) == "int[][]"


def test_from_name_rejects_unknown():
    with pytest.raises(QutesTypeError):
        from_name("complex")


def test_numeric_join():
    assert numeric_join(BOOL, BOOL) == INT
    assert numeric_join(INT, FLOAT) == FLOAT
    with pytest.raises(QutesTypeError):
        numeric_join(INT, STRING)


@given(base)
def test_reflexive(t):
    assert can_promote(t, t)


@given(base, base, base)
def test_transitive(a, b, c):
    if can_promote(a, b) and can_promote(b, c):
        assert can_promote(a, c)


@given(base, base)
def test_antisymmetric(a, b):
    if a != b and can_promote(a, b):
        assert not can_promote(b, a)


@given(base, base)
def test_promotion_and_measurement_are_disjoint(a, b):
    assert not (can_promote(a, b) and requires_measurement(a, b))


@given(element, element)
def test_array_lifting(a, b):
    assert can_promote(array_of(a), array_of(b)) == can_promote(a, b)
