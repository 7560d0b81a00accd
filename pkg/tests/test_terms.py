"""Hash-consing, sort checking and construction canonicalization."""
import pytest
from hypothesis import given, strategies as st

import minibmc.terms as T


def bv(v, w=8):
    return T.mk_bv(v, w)


x8 = T.mk_var("x", T.BvSort(8))
y8 = T.mk_var("y", T.BvSort(8))
arr = T.mk_var("a", T.ArraySort(T.BvSort(8), T.BvSort(8), 4))


class TestHashConsing:
    def test_same_store_same_handle(self):
        s1 = T.mk_store(arr, bv(1), bv(0))
        s2 = T.mk_store(arr, bv(1), bv(0))
        assert s1 is s2

    def test_distinct_nodes_distinct_handles(self):
        assert T.mk_add(x8, y8) is not T.mk_add(y8, x8)

    @given(st.recursive(
        st.sampled_from(["x", "y", "c0", "c1"]),
        lambda kids: st.tuples(st.sampled_from(["add", "sub", "and"]),
                               kids, kids),
        max_leaves=12))
    def test_structural_equality_is_identity(self, shape):
        def build(s):
            if s == "x":
                return x8
            if s == "y":
                return y8
            if s == "c0":
                return bv(0)
            if s == "c1":
                return bv(1)
            op, a, b = s
            f = {"add": T.mk_add, "sub": T.mk_sub, "and": T.mk_bvand}[op]
            return f(build(a), build(b))

        assert build(shape) is build(shape)


class TestSortChecking:
    def test_mismatched_add(self):
        with pytest.raises(T.SortError):
            T.mk_add(x8, T.mk_var("w", T.BvSort(16)))

    def test_ill_sorted_select(self):
        with pytest.raises(T.SortError):
            T.mk_select(x8, bv(0))

    def test_store_value_sort(self):
        with pytest.raises(T.SortError):
            T.mk_store(arr, bv(0), T.mk_var("w16", T.BvSort(16)))

    def test_extract_bounds(self):
        assert T.mk_extract(x8, 7, 0) is x8  # full range is the identity
        assert T.mk_extract(x8, 6, 0).sort.width == 7
        with pytest.raises(T.SortError):
            T.mk_extract(x8, 8, 0)
        with pytest.raises(T.SortError):
            T.mk_extract(x8, 2, 3)

    def test_extensions_change_width(self):
        assert T.mk_sign_ext(x8, 24).sort.width == 32
        assert T.mk_zero_ext(x8, 8).sort.width == 16
        assert T.mk_sign_ext(x8, 0) is x8

    def test_relations_need_equal_sorts(self):
        with pytest.raises(T.SortError):
            T.mk_lt(x8, T.mk_int(0))


class TestConstructorCanon:
    def test_ite_constant_guard(self):
        assert T.mk_ite(T.TRUE, x8, y8) is x8
        assert T.mk_ite(T.FALSE, x8, y8) is y8

    def test_ite_same_arms(self):
        g = T.mk_var("g", T.BOOL_S)
        assert T.mk_ite(g, x8, x8) is x8

    def test_not_involution(self):
        g = T.mk_var("g", T.BOOL_S)
        assert T.mk_not(T.mk_not(g)) is g

    def test_eq_identical(self):
        assert T.mk_eq(x8, x8) is T.TRUE

    def test_tuple_select_of_make(self):
        sort = T.TupleSort((("o", T.BvSort(4)), ("i", T.BvSort(8))))
        t = T.mk_tuple(sort, T.mk_bv(2, 4), bv(0))
        assert T.mk_tup_select(t, "o") is T.mk_bv(2, 4)

    def test_bv_constants_canonical_mod_width(self):
        assert T.mk_bv(-1, 8) is T.mk_bv(255, 8)
        assert T.bv_signed_value(T.mk_bv(255, 8)) == -1
