from fractions import Fraction

import pytest

from tkit.exact import (IntMatrix, SHAPE_FAMILIES, build_operators,
                        enumerate_walks, raising_powers, restrict_columns,
                        restrict_rows, shape_string, solve_linear, walk_table,
                        walk_counts_from)
from tkit.graphs import connected_graphs, local_metric, parse_edge_list
from tkit.constructions import complete_graph, example_graph, path_graph


class TestIntMatrix:
    def test_matmul_identity(self):
        m = IntMatrix.from_rows([[1, 2], [3, 4]])
        assert m @ IntMatrix.identity(2) == m
        assert IntMatrix.identity(2) @ m == m

    def test_matmul_known(self):
        a = IntMatrix.from_rows([[1, 2], [3, 4]])
        b = IntMatrix.from_rows([[0, 1], [1, 0]])
        assert a @ b == IntMatrix.from_rows([[2, 1], [4, 3]])

    def test_transpose(self):
        m = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
        assert m.transpose().entries == ((1, 4), (2, 5), (3, 6))

    def test_submatrix_order(self):
        m = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert m.submatrix([2, 0], [1]) == IntMatrix.from_rows([[8], [2]])

    def test_empty_restriction_rejected(self):
        m = IntMatrix.identity(2)
        with pytest.raises(ValueError):
            m.submatrix([], [0])

    def test_decimal_rows_big_ints(self):
        big = 10 ** 30
        m = IntMatrix.from_rows([[big]])
        assert m.to_decimal_rows() == [[str(big)]]

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            IntMatrix.identity(2) @ IntMatrix.identity(3)


class TestSolveLinear:
    def test_unique(self):
        sol = solve_linear([[1, 1], [1, -1]], [3, 1])
        assert sol.consistent
        assert sol.values == (Fraction(2), Fraction(1))

    def test_inconsistent_with_witness(self):
        sol = solve_linear([[1, 0], [1, 0], [0, 1]], [1, 2, 5])
        assert not sol.consistent
        assert sol.bad_row == 1

    def test_underdetermined_free_marked(self):
        sol = solve_linear([[1, 0]], [7])
        assert sol.consistent
        assert sol.values == (Fraction(7), None)
        assert sol.canonical() == (Fraction(7), Fraction(0))
        assert sol.pivots == (0,)

    def test_rational_entries(self):
        sol = solve_linear([[Fraction(1, 2)]], [Fraction(1, 3)])
        assert sol.values == (Fraction(2, 3),)

    def test_zero_rows_consistent(self):
        sol = solve_linear([[0, 0]], [0])
        assert sol.consistent and sol.values == (None, None)


class TestBuildOperators:
    def test_example_dual_one(self, example, example_ops):
        g, x = example
        diag = [example_ops.duals[1][v, v] for v in range(g.n)]
        assert [g.labels[v] for v in range(g.n) if diag[v]] == ["2", "3"]

    def test_defining_identities_exhaustive(self):
        for n in (2, 3, 4):
            for g in connected_graphs(n):
                for x in range(g.n):
                    ops = build_operators(g, x)
                    a, d = ops.adjacency, ops.ecc
                    assert ops.lowering + ops.flat + ops.raising == a
                    assert ops.raising == ops.lowering.transpose()
                    assert ops.flat == ops.flat.transpose()
                    # dual idempotents: disjoint 0/1 diagonals summing to I
                    total = ops.duals[0]
                    for e in ops.duals[1:]:
                        total = total + e
                    assert total == IntMatrix.identity(g.n)
                    for i, ei in enumerate(ops.duals):
                        assert ei @ ei == ei
                        for j in range(i + 1, d + 1):
                            assert (ei @ ops.duals[j]).is_zero()
                    # the level-split parts agree with the projected sums
                    low = IntMatrix.zeros(g.n, g.n)
                    flat = IntMatrix.zeros(g.n, g.n)
                    for i in range(d + 1):
                        if i >= 1:
                            low = low + ops.duals[i - 1] @ a @ ops.duals[i]
                        flat = flat + ops.duals[i] @ a @ ops.duals[i]
                    assert low == ops.lowering
                    assert flat == ops.flat

    def test_k2_parts(self):
        g = parse_edge_list("a b")
        ops = build_operators(g, 0)
        assert ops.lowering.entries == ((0, 1), (0, 0))
        assert ops.raising.entries == ((0, 0), (1, 0))
        assert ops.flat.is_zero()


class TestWalkTables:
    def test_r0_is_identity(self, example_ops):
        assert walk_table(example_ops, "r", 0).counts == IntMatrix.identity(6)

    def test_example_entries(self, example, example_ops):
        g, x = example
        table = walk_table(example_ops, "rl", 1).counts
        i1, i2, i3 = g.index_of("1"), g.index_of("2"), g.index_of("3")
        assert table[i1, i1] == 2  # 1-2-1 and 1-3-1
        assert table[i3, i2] == 1  # 2-5-3

    def test_two_raises_from_level_one_vanish(self, example, example_ops):
        g, _ = example
        table = walk_table(example_ops, "r", 2).counts
        y = g.index_of("2")
        assert all(table[z, y] == 0 for z in range(g.n))

    def test_bad_family(self, example_ops):
        with pytest.raises(ValueError):
            walk_table(example_ops, "ff", 1)

    def test_oracle_equivalence_exhaustive(self):
        for n in (2, 3, 4):
            for g in connected_graphs(n):
                for x in range(g.n):
                    ops = build_operators(g, x)
                    metric = ops.metric
                    for family in SHAPE_FAMILIES:
                        for m in range(metric.ecc + 2):
                            table = walk_table(ops, family, m).counts
                            shape = shape_string(family, m)
                            for y in range(g.n):
                                byend = walk_counts_from(g, x, shape, y, metric)
                                for z in range(g.n):
                                    assert table[z, y] == byend.get(z, 0)

    def test_restricted_block_positivity(self):
        # the one-step-down block over (level i) x (level 1) has all
        # positive entries, and the pure-raising block is positive exactly
        # where the two vertices sit at distance i-1
        for n in (3, 4, 5):
            count = 0
            for g in connected_graphs(n):
                count += 1
                if count > 40:
                    break
                for x in range(g.n):
                    if g.degree(x) < 1:
                        continue
                    ops = build_operators(g, x)
                    powers = raising_powers(ops, ops.ecc)
                    sph1 = list(ops.metric.sphere(1))
                    dist = {y: local_metric(g, y).dist for y in sph1}
                    for i in range(ops.ecc + 1):
                        sphi = list(ops.metric.sphere(i))
                        down = (powers[i] @ ops.lowering).submatrix(sphi, sph1)
                        assert all(e > 0 for row in down.entries for e in row)
                        if i == 0:
                            continue
                        up = powers[i - 1].submatrix(sphi, sph1)
                        assert not up.is_zero()
                        for r, z in enumerate(sphi):
                            for c, y in enumerate(sph1):
                                assert (up[r, c] > 0) == (dist[y][z] == i - 1)


class TestEnumerateWalks:
    def test_empty_shape(self, example):
        g, x = example
        assert enumerate_walks(g, x, "", 1, 1) == 1
        assert enumerate_walks(g, x, "", 1, 2) == 0

    def test_hand_counted(self, example):
        g, x = example
        assert enumerate_walks(g, x, "rl", g.index_of("2"), g.index_of("3")) == 1

    def test_ecc_bound(self, example):
        g, x = example
        assert enumerate_walks(g, x, "rr", g.index_of("2"), g.index_of("4")) == 0

    def test_bad_letter(self, example):
        g, x = example
        with pytest.raises(ValueError):
            enumerate_walks(g, x, "rq", 0, 0)


class TestRestrictHelpers:
    def test_identity_block(self, example, example_ops):
        g, _ = example
        sph1 = list(example_ops.metric.sphere(1))
        block = walk_table(example_ops, "r", 0).counts.submatrix(sph1, sph1)
        assert block == IntMatrix.identity(2)

    def test_row_column_functions(self):
        m = IntMatrix.from_rows([[1, 2], [3, 4]])
        assert restrict_rows(m, [1]).entries == ((3, 4),)
        assert restrict_columns(m, [0]).entries == ((1,), (3,))


def test_walk_counts_grow_without_overflow():
    # dense graph, long walks: counts exceed 64-bit range and must stay exact
    g = complete_graph(9)
    ops = build_operators(g, 0)
    flat_power = ops.flat
    for _ in range(25):
        flat_power = flat_power @ ops.flat
    assert max(max(row) for row in flat_power.entries) > 2 ** 64
