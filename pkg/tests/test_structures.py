import pytest
from hypothesis import given, strategies as st

from topogen.errors import PreconditionError
from topogen.lattice import FiniteLattice
from topogen.structures import (
    ClosureOperator,
    TopogenousOrder,
    closure_from_topogenous,
    discrete_order,
    induced_relation_of_closure,
    interior_from_topogenous,
    is_idempotent,
    is_interpolative,
    nbhd_from_topogenous,
    predicates,
    topogenous_from_closure,
    topogenous_from_interior,
    topogenous_from_nbhd,
    validate_structure,
)
from topogen.instances.topology import closure_order, interior_order


def closure_by_scan(space, mask):
    # independent oracle: smallest closed superset, by scanning all subsets
    best = space.full
    for c in range(1 << space.n):
        if mask & ~c == 0 and space.is_open(space.full & ~c) and bin(c).count("1") < bin(best).count("1"):
            best = c
    return best


def test_discrete_order_is_topogenous(fintop2):
    t = discrete_order(fintop2)
    assert validate_structure(t).ok


def test_bottom_only_relation_is_topogenous(fintop2):
    rel = []
    for lat in fintop2.sub:
        rows = [0] * lat.size
        rows[lat.bottom] = lat.full_mask
        rel.append(tuple(rows))
    t = TopogenousOrder(fintop2, tuple(rel))
    assert validate_structure(t).ok


def test_closure_order_matches_set_level_closures(fintop2):
    t = closure_order(fintop2)
    assert validate_structure(t).ok
    spaces = fintop2.spaces
    for x, s in enumerate(spaces):
        for a in range(1 << s.n):
            for b in range(1 << s.n):
                expected = closure_by_scan(s, a) & ~b == 0
                assert t.holds(x, a, b) == expected


def test_builtin_orders_have_expected_predicates(fintop2):
    for t in (closure_order(fintop2), interior_order(fintop2)):
        p = predicates(t)
        assert p.interpolative
    assert predicates(closure_order(fintop2)).meet_preserving
    assert predicates(interior_order(fintop2)).join_preserving


def test_closure_induced_order_is_meet_preserving(fintop2):
    c = closure_from_topogenous(closure_order(fintop2))
    t = topogenous_from_closure(c)
    assert predicates(t).meet_preserving


def test_interior_induced_order_is_join_preserving(fintop2):
    i = interior_from_topogenous(interior_order(fintop2))
    t = topogenous_from_interior(i)
    assert predicates(t).join_preserving


def test_neighbourhoods_of_dense_point_on_sierpinski(fintop2):
    t = closure_order(fintop2)
    nu = nbhd_from_topogenous(t)
    assert validate_structure(nu).ok
    x = fintop2.category.object_index("sierpinski")
    # the open point is dense, so its only neighbourhood is the whole space
    assert nu.nu[x][0b10] == 1 << 0b11
    # the closed point is its own closure
    assert nu.nu[x][0b01] == fintop2.sub[x].up[0b01]


def test_closure_conversion_matches_topological_closure(fintop2):
    t = closure_order(fintop2)
    c = closure_from_topogenous(t)
    assert validate_structure(c).ok
    for x, s in enumerate(fintop2.spaces):
        for a in range(1 << s.n):
            assert c.cmap[x][a] == closure_by_scan(s, a)


def test_interior_conversion_matches_topological_interior(fintop2):
    t = interior_order(fintop2)
    i = interior_from_topogenous(t)
    assert validate_structure(i).ok
    for x, s in enumerate(fintop2.spaces):
        for a in range(1 << s.n):
            assert i.imap[x][a] == s.interior(a)


def test_non_meet_preserving_conversion_fails_with_witness(fintop2):
    rel = tuple(tuple(0 for _ in range(lat.size)) for lat in fintop2.sub)
    t = TopogenousOrder(fintop2, rel)
    assert validate_structure(t).ok
    with pytest.raises(PreconditionError) as excinfo:
        closure_from_topogenous(t)
    assert excinfo.value.witness is not None
    obj, label, family = excinfo.value.witness
    assert family == ()  # the empty family already fails


def test_non_join_preserving_conversion_fails(fintop2):
    rel = tuple(tuple(0 for _ in range(lat.size)) for lat in fintop2.sub)
    with pytest.raises(PreconditionError):
        interior_from_topogenous(TopogenousOrder(fintop2, rel))


def trivial_fibration(lat):
    from topogen.site import FiniteCategory, SubobjectFibration

    cat = FiniteCategory(("x",), (0,), (0,), ("id_x",), (0,), compose_table={(0, 0): 0})
    ident = tuple(range(lat.size))
    return SubobjectFibration(cat, (lat,), (ident,), (ident,), frozenset({0}), frozenset({0}))


def test_idempotence_examples():
    lat = FiniteLattice.powerset(2)
    fib = trivial_fibration(lat)
    identity = ClosureOperator(fib, (tuple(range(4)),))
    assert is_idempotent(identity)
    # joining a fixed atom everywhere is idempotent
    join_atom = ClosureOperator(fib, (tuple(m | 0b01 for m in range(4)),))
    assert validate_structure(join_atom).ok
    assert is_idempotent(join_atom)
    # adding the lowest missing point is extensive and monotone but not idempotent
    def add_min_missing(m):
        missing = [p for p in range(2) if not m >> p & 1]
        return m | (1 << missing[0]) if missing else m
    creep = ClosureOperator(fib, (tuple(add_min_missing(m) for m in range(4)),))
    assert validate_structure(creep).ok
    assert not is_idempotent(creep)
    with pytest.raises(PreconditionError):
        is_idempotent(TopogenousOrder(fib, ((0, 0, 0, 0),)))


def test_largest_order_converts_to_identity_operators(fintop2):
    t = discrete_order(fintop2)
    c = closure_from_topogenous(t)
    i = interior_from_topogenous(t)
    for x, lat in enumerate(fintop2.sub):
        identity = tuple(range(lat.size))
        assert c.cmap[x] == identity
        assert i.imap[x] == identity
    nu = nbhd_from_topogenous(t)
    for x, lat in enumerate(fintop2.sub):
        assert nu.nu[x] == lat.up


def test_roundtrips_on_builtin_orders(fintop2):
    tc = closure_order(fintop2)
    ti = interior_order(fintop2)
    assert topogenous_from_closure(closure_from_topogenous(tc)) == tc
    assert topogenous_from_interior(interior_from_topogenous(ti)) == ti
    assert topogenous_from_nbhd(nbhd_from_topogenous(tc)) == tc


def _all_orders(fib):
    from topogen.harness.enumeration import EnumerationSpec, enumerate_structures

    return list(enumerate_structures(EnumerationSpec(fib, "topogenous")))


def test_conversions_are_order_compatible(disc2_loop):
    # neighbourhood and interior conversions are monotone in the order;
    # the closure conversion reverses it (larger related sets, smaller meets)
    orders = _all_orders(disc2_loop)
    for t1 in orders:
        for t2 in orders:
            if not t1.issubset(t2):
                continue
            assert nbhd_from_topogenous(t1).pointwise_leq(nbhd_from_topogenous(t2))
            p1, p2 = predicates(t1), predicates(t2)
            if p1.meet_preserving and p2.meet_preserving:
                assert closure_from_topogenous(t2).pointwise_leq(closure_from_topogenous(t1))
            if p1.join_preserving and p2.join_preserving:
                assert interior_from_topogenous(t1).pointwise_leq(interior_from_topogenous(t2))


def test_closure_induced_relation_contains_order(disc2_loop):
    # rows with a meet witness induce a relation containing the original;
    # with all rows inhabited, equality characterizes meet-preservation
    for t in _all_orders(disc2_loop):
        induced = induced_relation_of_closure(t)
        contains = all(
            row & ~irow == 0
            for rows, irows in zip(t.rel, induced)
            for row, irow in zip(rows, irows)
        )
        assert contains
        inhabited = all(row for rows in t.rel for row in rows)
        if inhabited:
            assert (induced == t.rel) == predicates(t).meet_preserving
        else:
            assert not predicates(t).meet_preserving


@given(st.integers(0, 3))
def test_join_fixed_mask_closure_roundtrip(mask):
    lat = FiniteLattice.powerset(2)
    fib = trivial_fibration(lat)
    c = ClosureOperator(fib, (tuple(m | mask for m in range(4)),))
    assert validate_structure(c).ok
    t = topogenous_from_closure(c)
    assert validate_structure(t).ok
    assert closure_from_topogenous(t) == c
    assert is_interpolative(t)


def test_neighbourhood_axioms_vs_topogenous_axioms(disc2_loop):
    # the two validators accept exactly the same relations
    from topogen.harness.enumeration import EnumerationSpec, enumerate_structures

    torders = {t.rel for t in _all_orders(disc2_loop)}
    nbhds = {
        nu.nu
        for nu in enumerate_structures(EnumerationSpec(disc2_loop, "neighbourhood"))
    }
    assert torders == nbhds
