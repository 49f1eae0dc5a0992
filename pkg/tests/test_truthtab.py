import random

import pytest

from quadol.truthtab import TruthTable, hamming_distance, majority3

from oracles import (list_cofactor, list_hamming, list_insert,
                     list_negate_input, list_project, list_reexpress,
                     list_support, tt_list)


def test_constant_and_variable():
    assert TruthTable.constant(3, True).bits == 0xFF
    assert TruthTable.constant(3, False).bits == 0
    assert TruthTable.constant(0, True).bits == 1
    # var 1 of 3 is high on minterms 2, 3, 6, 7
    assert TruthTable.variable(3, 1).bits == 0b11001100
    assert TruthTable.variable(2, 0).bits == 0b1010


def test_from_function_matches_evaluate():
    rng = random.Random(7)
    for n in range(7):
        table = TruthTable.random(n, rng)
        rebuilt = TruthTable.from_function(
            n, lambda bits: table.evaluate(
                sum(b << i for i, b in enumerate(bits))))
        assert rebuilt == table


def test_validation():
    with pytest.raises(ValueError):
        TruthTable(7, 0)
    with pytest.raises(ValueError):
        TruthTable(2, 16)
    with pytest.raises(ValueError):
        TruthTable(2, -1)
    with pytest.raises(IndexError):
        TruthTable(3, 0).cofactor(3, True)
    with pytest.raises(IndexError):
        TruthTable(3, 0).negate_input(3)
    with pytest.raises(IndexError):
        TruthTable(3, 0).project((0, 3))
    with pytest.raises(ValueError):
        TruthTable(6, 0).insert_var(0)


def test_cofactor_against_reference():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(1, 6)
        t = TruthTable.random(n, rng)
        for var in range(n):
            for phase in (False, True):
                got = t.cofactor(var, phase)
                assert got.n == n - 1
                assert tt_list(got) == list_cofactor(tt_list(t), n, var, phase)


def test_insert_var_against_reference():
    rng = random.Random(13)
    for _ in range(50):
        n = rng.randint(0, 5)
        t = TruthTable.random(n, rng)
        for var in range(n + 1):
            got = t.insert_var(var)
            assert got.n == n + 1
            assert tt_list(got) == list_insert(tt_list(t), n, var)
            # inserting then cofactoring at the same spot is the identity
            assert got.cofactor(var, True) == t
            assert got.cofactor(var, False) == t


def test_negations_against_reference():
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(1, 6)
        t = TruthTable.random(n, rng)
        neg = t.negate_output()
        assert tt_list(neg) == [1 - b for b in tt_list(t)]
        assert neg.negate_output() == t
        for var in range(n):
            got = t.negate_input(var)
            assert tt_list(got) == list_negate_input(tt_list(t), n, var)
            assert got.negate_input(var) == t


def test_project_and_support_against_reference():
    rng = random.Random(19)
    for _ in range(80):
        n = rng.randint(1, 6)
        t = TruthTable.random(n, rng)
        assert t.support() == frozenset(list_support(tt_list(t), n))
        keep = tuple(sorted(rng.sample(range(n), rng.randint(0, n))))
        got = t.project(keep)
        assert got.n == len(keep)
        assert tt_list(got) == list_project(tt_list(t), n, keep)


def test_project_keeps_function_when_support_allows():
    rng = random.Random(23)
    for _ in range(40):
        t = TruthTable.random(4, rng).insert_var(2)  # var 2 is padding
        keep = (0, 1, 3, 4)
        back = t.project(keep)
        for m in range(32):
            contracted = (m & 0b11) | ((m >> 3) << 2)
            assert back.evaluate(contracted) == t.evaluate(m)


def test_reexpress_against_reference():
    rng = random.Random(29)
    for _ in range(50):
        n = rng.randint(1, 6)
        t = TruthTable.random(n, rng)
        new_n = rng.randint(n, 6)
        placement = rng.sample(range(new_n), n)
        got = t.reexpress(new_n, placement)
        assert tt_list(got) == list_reexpress(tt_list(t), n, new_n, placement)


def test_hamming_and_majority_against_reference():
    rng = random.Random(31)
    for _ in range(60):
        n = rng.randint(0, 6)
        a = TruthTable.random(n, rng)
        b = TruthTable.random(n, rng)
        c = TruthTable.random(n, rng)
        assert hamming_distance(a, b) == list_hamming(tt_list(a), tt_list(b))
        maj = majority3(a, b, c)
        want = [1 if x + y + z >= 2 else 0
                for x, y, z in zip(tt_list(a), tt_list(b), tt_list(c))]
        assert tt_list(maj) == want
    with pytest.raises(ValueError):
        hamming_distance(TruthTable.constant(2, False),
                         TruthTable.constant(3, False))


def test_is_constant():
    assert TruthTable.constant(4, True).is_constant()
    assert not TruthTable.variable(4, 2).is_constant()
