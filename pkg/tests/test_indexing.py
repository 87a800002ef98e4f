import pytest
from hypothesis import given, strategies as st

from entrocone.errors import NoInitialObject, NoMinimalCommonAncestor, NotAPoset, SizeLimit
from entrocone.indexing import (from_arrows, from_json, ideal, lambda_n, lambda_set,
                                minimal_common_ancestor, minimal_fan, terminal_objects,
                                transitive_closure, validate)


def chain():
    return from_arrows(["a", "b", "c"], [("a", "b"), ("b", "c")])


def test_chain_is_valid():
    c = chain()
    assert c.initial == "a"
    assert c.is_ancestor("a", "c")
    assert not c.is_ancestor("c", "a")


def test_two_incomparable_common_ancestors_rejected():
    objs = ["m", "k", "l", "i", "j"]
    arrows = [("m", "k"), ("m", "l"), ("k", "i"), ("k", "j"), ("l", "i"), ("l", "j")]
    with pytest.raises(NoMinimalCommonAncestor) as e:
        from_arrows(objs, arrows)
    assert {e.value.i, e.value.j} == {"i", "j"}


def test_lambda4_by_reverse_inclusion_validates():
    subsets = lambda_n(4).objects
    rel = [[lambda_set(a) >= lambda_set(b) for b in subsets] for a in subsets]
    cat = validate(subsets, rel)
    assert len(cat) == 15 and cat.initial == "1234"


def test_antisymmetry_failure_names_pair():
    with pytest.raises(NotAPoset) as e:
        validate(["x", "y"], [[True, True], [True, True]])
    assert e.value.axiom == "antisymmetry" and (e.value.i, e.value.j) == ("x", "y")


def test_transitivity_failure():
    rel = [[True, True, False], [False, True, True], [False, False, True]]
    with pytest.raises(NotAPoset) as e:
        validate(["a", "b", "c"], rel)
    assert e.value.axiom == "transitivity" and (e.value.i, e.value.j) == ("a", "c")


def test_no_initial_object():
    with pytest.raises(NoInitialObject):
        from_arrows(["a", "b"], [])


@pytest.mark.parametrize("n,size", [(1, 1), (2, 3), (4, 15)])
def test_lambda_sizes(n, size):
    assert len(lambda_n(n)) == size


def test_lambda2_minimal_fan():
    cat = lambda_n(2)
    assert cat.initial == "12"
    f = minimal_fan(cat, "1", "2")
    assert (f.apex, f.left, f.right) == ("12", "1", "2")


@pytest.mark.parametrize("n", [0, 9])
def test_lambda_size_guard(n):
    with pytest.raises(SizeLimit):
        lambda_n(n)


def test_lambda_object_order():
    assert lambda_n(4).objects == ("1", "2", "3", "4", "12", "13", "14", "23", "24", "34",
                                   "123", "124", "134", "234", "1234")


@pytest.mark.parametrize("i,j,want", [("1", "2", "12"), ("13", "3", "13"), ("12", "23", "123")])
def test_mca_lambda4(i, j, want):
    assert minimal_common_ancestor(lambda_n(4), i, j) == want


def test_mca_chain():
    assert minimal_common_ancestor(chain(), "b", "c") == "b"


def test_degenerate_fan():
    f = minimal_fan(lambda_n(4), "13", "13")
    assert (f.apex, f.left, f.right) == ("13", "13", "13")


def test_ideals():
    l4 = lambda_n(4)
    sub = ideal(l4, "234")
    assert len(sub) == 7 and sub.initial == "234"
    assert sorted(sub.objects) == sorted(["2", "3", "4", "23", "24", "34", "234"])
    assert ideal(l4, "1").objects == ("1",)
    l2 = lambda_n(2)
    assert ideal(l2, "12") == l2


def test_terminal_objects():
    assert sorted(terminal_objects(lambda_n(4))) == ["1", "2", "3", "4"]
    assert terminal_objects(chain()) == ["c"]
    assert terminal_objects(from_arrows(["z"], [])) == ["z"]


@pytest.mark.parametrize("n", range(1, 9))
def test_lambda_n_terminals(n):
    assert len(terminal_objects(lambda_n(n))) == n


objects4 = st.sampled_from(lambda_n(4).objects)


@given(objects4, objects4)
def test_mca_properties(i, j):
    cat = lambda_n(4)
    m = minimal_common_ancestor(cat, i, j)
    assert m == minimal_common_ancestor(cat, j, i)
    assert lambda_set(m) == lambda_set(i) | lambda_set(j)
    assert minimal_common_ancestor(cat, i, i) == i
    assert minimal_common_ancestor(cat, i, cat.initial) == cat.initial


@given(objects4)
def test_ideal_idempotent(i):
    cat = lambda_n(4)
    once = ideal(cat, i)
    assert ideal(once, i) == once
    assert ideal(cat, cat.initial) == cat


def test_json_round_trip():
    cat = lambda_n(3)
    assert from_json(cat.to_json()) == cat


def test_dag_input_closed():
    closure = transitive_closure(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert closure[0][2]


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=8))
def test_validation_is_deterministic(pairs):
    objs = [f"o{k}" for k in range(5)]
    arrows = [(objs[a], objs[b]) for a, b in pairs if a != b]

    def outcome():
        try:
            return ("ok", from_arrows(objs, arrows).objects)
        except Exception as e:
            return (type(e).__name__, str(e))
    assert outcome() == outcome()
