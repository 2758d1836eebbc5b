import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import (
    box_corner_min,
    det_laplace,
    inverse_adjugate,
    leading_minors_negative_definite,
    random_tree,
    tree_matrix,
)
from sfl.exactmath import DomainError, cf_expand
from sfl.plumbing import (
    SeifertData,
    StabilizedDiagram,
    as_star,
    chain_diagram,
    euler_sum,
    fiber_knot_type,
    format_plumbing,
    intersection_data,
    inverse_matrix,
    lens_chain,
    normalize_seifert,
    orientation_reverse,
    parse_plumbing,
    prism_graph,
    prism_lens_chain,
    quadratic_form,
    seifert_to_plumbing,
    solve,
    star_diagram,
    torus_surgery_chain,
    torus_surgery_seifert,
)

F = Fraction


def Y(e0, *r):
    return SeifertData(e0, tuple(F(x) for x in r))


# Seifert data -------------------------------------------------------------------


def test_seifert_sorted_and_printed():
    s = Y(-1, "1/3", "9/31", "2/3")
    assert s.r == (F(2, 3), F(1, 3), F(9, 31))
    assert str(s) == "Y(-1; 2/3, 1/3, 9/31)"
    assert SeifertData.parse("-1; 1/3, 2/3, 9/31") == s == SeifertData.parse("Y(-1; 2/3, 1/3, 9/31)")


@pytest.mark.parametrize("bad", ["-1;1/2,1/2", "-1;1/2,1/2,3/2", "1/2;1/2,1/2,1/2", "nonsense"])
def test_seifert_parse_rejects(bad):
    with pytest.raises(DomainError):
        SeifertData.parse(bad)


@pytest.mark.parametrize("e,slots,expected", [
    (0, ["4/3", "-4/3", "9/31"], Y(-1, "1/3", "2/3", "9/31")),
    (-2, ["2/3", "1/2", "1/3"], Y(-2, "2/3", "1/2", "1/3")),
    (0, ["1/2", "5/2", "1/3"], Y(2, "1/2", "1/2", "1/3")),
    (1, ["1/2", "3", "1/3", "1/5"], Y(4, "1/2", "1/3", "1/5")),
])
def test_normalize_examples(e, slots, expected):
    assert normalize_seifert(e, slots) == expected


def test_normalize_needs_three_fibers():
    with pytest.raises(DomainError, match="not a 3-singular-fiber space"):
        normalize_seifert(0, ["1/2", "2", "1/3"])


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=40)


@given(st.integers(-6, 6), rationals, rationals, rationals)
def test_normalize_idempotent_and_preserves_euler_sum(e, a, b, c):
    if any(x.denominator == 1 for x in (a, b, c)):
        return
    s = normalize_seifert(e, [a, b, c])
    assert normalize_seifert(s.e0, list(s.r)) == s
    assert euler_sum(s) == e + a + b + c


@pytest.mark.parametrize("s,rev", [
    (Y(-2, "2/3", "1/2", "1/3"), Y(-1, "2/3", "1/2", "1/3")),
    (Y(-1, "1/2", "1/3", "1/7"), Y(-2, "6/7", "2/3", "1/2")),
])
def test_orientation_reverse_examples(s, rev):
    assert orientation_reverse(s) == rev


@given(st.integers(-6, 6), st.lists(st.fractions(0, 1, max_denominator=50), min_size=3, max_size=3))
def test_orientation_reverse_involution(e0, rs):
    if any(x in (0, 1) for x in rs):
        return
    s = SeifertData(e0, tuple(rs))
    t = orientation_reverse(s)
    assert orientation_reverse(t) == s
    assert euler_sum(t) == -euler_sum(s)
    assert t.e0 == -e0 - 3


def test_euler_sum_examples():
    assert euler_sum(Y(-1, "1/2", "1/3", "1/7")) == F(-1, 42)
    assert euler_sum(Y(-2, "2/3", "1/2", "1/3")) == F(-1, 2)


# diagrams -------------------------------------------------------------------------


def test_seifert_to_plumbing_examples():
    d = seifert_to_plumbing(Y(-2, "2/3", "1/2", "1/3"))
    assert d.weights[0] == -2 and d.leg_weights() == [[-2, -2], [-2], [-3]]
    d = seifert_to_plumbing(Y(-1, "1/2", "1/3", "1/7"))
    assert d.leg_weights() == [[-2], [-3], [-7]] and "center_uncapped" in d.flags
    d = seifert_to_plumbing(Y(-3, "1/2", "1/2", "1/2"))
    assert d.leg_weights() == [[-2]] * 3 and d.caps == (1, 0, 0, 0)


def test_diagram_validation():
    with pytest.raises(DomainError):
        StabilizedDiagram((-2, -2), (0, 0), ((0, 1), (1, 0)))
    with pytest.raises(DomainError):
        StabilizedDiagram((-2, -2, -2), (0, 0, 0), ((0, 1),))


def test_lens_chain_intersection_data():
    data = intersection_data(lens_chain(4, 1))
    assert data.matrix == ((-4,),) and data.chi == 2 and data.sigma == -1 and data.det == -4
    assert data.to_json()["det"] == "-4"


def test_prism_graph_example():
    d = prism_graph(11, 3)
    assert d.weights == (-2, -4, -3, -2)
    assert intersection_data(d).det == 32 == 4 * intersection_data(lens_chain(8, 3)).det
    assert quadratic_form(d, (0, 2, 1, 0)) == F(-19, 8)


def test_quadratic_form_examples():
    assert quadratic_form(lens_chain(4, 1), (2,)) == -1
    assert quadratic_form(prism_graph(11, 3), (0, 0, 0, 0)) == 0


def test_solve_singular_names_nullity():
    d = chain_diagram([1, 1])  # matrix [[1,1],[1,1]]
    with pytest.raises(DomainError, match="nullity 1"):
        solve(d, [1, 0])


def random_negative_tree(rng, n, lo=-6, hi=-2):
    edges = random_tree(rng, n)
    weights = [rng.randint(lo, hi) for _ in range(n)]
    return weights, edges


def test_tree_data_against_cofactor_oracle():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 7)
        weights, edges = random_negative_tree(rng, n, -4, 1)
        d = StabilizedDiagram(tuple(weights), tuple([0] * n), tuple(edges))
        data = intersection_data(d)
        q = tree_matrix(weights, edges)
        assert data.det == det_laplace(q)
        if data.det:
            assert inverse_matrix(d) == inverse_adjugate(q)


def test_negative_weights_give_negative_definite_trees():
    rng = random.Random(6)
    for _ in range(200):
        n = rng.randint(1, 8)
        weights, edges = random_negative_tree(rng, n)
        q = tree_matrix(weights, edges)
        assert leading_minors_negative_definite(q)
        d = StabilizedDiagram(tuple(weights), tuple(-w - 2 for w in weights), tuple(edges))
        assert intersection_data(d).sigma == -n


def test_inverse_entries_negative_on_definite_trees():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 8)
        weights, edges = random_negative_tree(rng, n)
        d = StabilizedDiagram(tuple(weights), tuple(-w - 2 for w in weights), tuple(edges))
        assert all(x < 0 for row in inverse_matrix(d) for x in row)


def test_box_minimum_at_full_capacity_corner():
    rng = random.Random(8)
    for _ in range(60):
        n = rng.randint(1, 6)
        weights, edges = random_negative_tree(rng, n, -5, -2)
        d = StabilizedDiagram(tuple(weights), tuple(-w - 2 for w in weights), tuple(edges))
        inv = inverse_matrix(d)
        best = box_corner_min(inv, d.caps)
        assert quadratic_form(d, d.caps) == best


def test_prism_lens_identities():
    for p in range(3, 151):
        for q in range(1, p):
            if math.gcd(p, q) != 1:
                continue
            a = cf_expand(F(p, q))
            k = len(a) - 1
            if k < 1:
                continue
            dd, dl = prism_graph(p, q), prism_lens_chain(p, q)
            det_l = intersection_data(dl).det
            assert det_l == (-1) ** (k + 1) * (p - q)
            assert intersection_data(dd).det == 4 * det_l
            inv_d, inv_l = inverse_matrix(dd), inverse_matrix(dl)
            central = [row[1:k + 2] for row in inv_d[1:k + 2]]
            assert central == inv_l
            assert inv_l[0][0] == F(-q, p - q)
            # the determinant satisfies det = 4 B_{k+1} with a three-term recursion
            b_prev, b = 1, -(a[0] - 1)
            for r in range(1, k + 1):
                b_prev, b = b, -(a[r] * b + b_prev)
            assert intersection_data(dd).det == 4 * b


@pytest.mark.parametrize("p,q,r,expected", [
    (2, 3, -1, Y(-1, "1/2", "1/3", "1/7")),
    (2, 5, -1, Y(-1, "1/2", "2/5", "1/11")),
])
def test_torus_surgery_seifert(p, q, r, expected):
    s = torus_surgery_seifert(p, q, r)
    assert s == expected
    assert euler_sum(s) == F(-1, p * q * (p * q - F(r)))


@given(st.integers(1, 6))
def test_torus_surgery_reciprocal_is_brieskorn(n):
    # Sigma(2, 3, 6n+1): the third fiber has order 6n+1 and |H_1| = 1
    s = torus_surgery_seifert(2, 3, F(-1, n))
    assert s == Y(-1, "1/2", "1/3", F(n, 6 * n + 1))
    assert abs(euler_sum(s)) * 2 * 3 * (6 * n + 1) == 1


def test_torus_surgery_chain_examples():
    d = torus_surgery_chain(2, 3, -6)
    assert d.weights == (-6,) and d.caps == (6,)
    # tb = 1 trefoil needs one stabilization for contact framing -1
    d = torus_surgery_chain(2, 3, -1)
    assert d.weights == (-1,) and d.caps == (1,)
    d = torus_surgery_chain(2, 5, F(-1, 2))
    assert d.weights == (-1, -2) and d.caps == (3, 0)
    with pytest.raises(DomainError):
        torus_surgery_chain(2, 4, -1)
    with pytest.raises(DomainError):
        torus_surgery_chain(2, 3, 1)


@given(st.integers(-40, -1), st.integers(1, 40))
def test_torus_chain_topology(num, den):
    r = F(num, den)
    k = len(cf_expand(-r, allow_head_one=True))
    data = intersection_data(torus_surgery_chain(2, 3, r))
    assert data.chi == k + 1 and data.sigma == -k


@pytest.mark.parametrize("x,expected", [("3/4", (3, -2)), ("1/2", (1, 0)), ("2/3", (2, -1))])
def test_fiber_knot_type(x, expected):
    assert fiber_knot_type(x) == expected


def test_plumbing_text_round_trip():
    d = seifert_to_plumbing(Y(-2, "2/3", "1/2", "1/3"))
    text = format_plumbing(d)
    assert text.splitlines()[0] == "center -2"
    assert parse_plumbing(text) == d
    tree = parse_plumbing("vertex a -2\nvertex b -3  # comment\nvertex c -2\nvertex h -2\nedge h a\nedge h b\nedge h c\n")
    assert tree.center == 3 and sorted(len(l) for l in tree.legs) == [1, 1, 1]
    chain = parse_plumbing("vertex x -2\nvertex y -5\nedge x y\n")
    assert chain.center is None and chain.legs == ((0, 1),)
    for bad in ["leg -2", "center x", "vertex a -2\nedge a b", "frobnicate 3", ""]:
        with pytest.raises(DomainError):
            parse_plumbing(bad)


def test_as_star_leaves_general_trees():
    d = StabilizedDiagram((-2,) * 6, (0,) * 6, ((0, 1), (0, 2), (0, 3), (3, 4), (3, 5)))
    assert as_star(d).center is None and as_star(d).legs == ()


def test_star_diagram_caps():
    d = star_diagram(-1, [[-2], [-3]])
    assert d.caps == (0, 0, 1)
