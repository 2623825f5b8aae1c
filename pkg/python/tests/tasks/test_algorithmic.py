import itertools

import numpy as np
import pytest

import libmetaact.tasks as tasks
from libmetaact.metaglobal import ConfigError


def test_mod_add_27(mod_add_27):
    ds = mod_add_27
    assert ds.n_rows == 729
    assert ds.input_dim == 54
    assert ds.class_count == 27
    assert np.all(ds.X.sum(axis=1) == 2.0)


def test_mod_add_2_is_xor():
    ds = tasks.gen_algorithmic(tasks.AlgTaskSpec(expression="a+b", modulus=2))
    assert ds.y.tolist() == [0, 1, 1, 0]
    a, b = tasks.decode_operands(ds.X, 2)
    assert a.tolist() == [0, 0, 1, 1]
    assert b.tolist() == [0, 1, 0, 1]


@pytest.mark.parametrize("expression", list(tasks.EXPRESSIONS))
def test_expressions_exhaustive(expression):
    spec = tasks.AlgTaskSpec(expression=expression, modulus=7)
    ds = tasks.gen_algorithmic(spec)
    assert ds.n_rows == 49
    assert np.unique(ds.X, axis=0).shape[0] == 49
    a, b = tasks.decode_operands(ds.X, 7)
    f = tasks.EXPRESSIONS[expression]
    expected = [f(int(i), int(j)) % 7 for i, j in zip(a, b)]
    assert ds.y.tolist() == expected


def test_group_s4():
    ds = tasks.gen_algorithmic(tasks.AlgTaskSpec(expression="a.b", group="S4"))
    assert ds.n_rows == 576
    assert ds.input_dim == 48
    assert ds.class_count == 24


def test_permutations_lexicographic():
    perms = tasks.permutations(3)
    assert perms[0] == (0, 1, 2)
    assert perms[-1] == (2, 1, 0)
    assert list(perms) == sorted(perms)


@pytest.mark.parametrize("n", [4, 5])
def test_group_axioms(n):
    perms = tasks.permutations(n)
    index = {p: i for i, p in enumerate(perms)}
    identity = tuple(range(n))
    table = tasks.operation_table(tasks.AlgTaskSpec(expression="a.b", group=f"S{n}"))
    e = index[identity]
    assert np.all(table[e, :] == np.arange(len(perms)))
    assert np.all(table[:, e] == np.arange(len(perms)))
    for p in perms:
        assert table[index[p], index[tasks.inverse(p)]] == e
    rng = np.random.default_rng(n)
    for i, j, k in rng.integers(0, len(perms), size=(200, 3)):
        assert table[table[i, j], k] == table[i, table[j, k]]


def test_group_conjugation():
    table = tasks.operation_table(tasks.AlgTaskSpec(expression="a.b.a^-1", group="S4"))
    perms = tasks.permutations(4)
    index = {p: i for i, p in enumerate(perms)}
    for a, b in itertools.islice(itertools.product(perms, perms), 0, 576, 37):
        r = tasks.compose(tasks.compose(a, b), tasks.inverse(a))
        assert table[index[a], index[b]] == index[r]


def test_suite():
    assert len(tasks.ALGORITHMIC_TASKS) == 22
    assert len({t.name for t in tasks.ALGORITHMIC_TASKS}) == 22


def test_unknown_expression():
    with pytest.raises(ConfigError):
        tasks.AlgTaskSpec(expression="a/b", modulus=7)
    with pytest.raises(ConfigError):
        tasks.AlgTaskSpec(expression="a.b", group="S6")


def test_multitask():
    specs = [
        tasks.AlgTaskSpec(expression="a+b", modulus=5),
        tasks.AlgTaskSpec(expression="a*b", modulus=7),
    ]
    ds = tasks.make_multitask_algorithmic(specs, task_id=True)
    assert ds.n_rows == 25 + 49
    assert ds.input_dim == 2 * 7 + 2
    assert ds.class_count == 7
    rows = ds.pools["task:a*b mod 7"]
    assert rows.tolist() == list(range(25, 74))
    assert np.all(ds.X[rows, -1] == 1.0)
    assert np.array_equal(ds.y[rows], tasks.gen_algorithmic(specs[1]).y)
    plain = tasks.make_multitask_algorithmic(specs)
    assert plain.input_dim == 14
