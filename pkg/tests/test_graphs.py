from fractions import Fraction

import pytest

from tkit.graphs import (Graph, GraphError, connected_graphs, distance_partition,
                         local_metric, make_graph, parse_edge_list, parse_graph6,
                         structure_report, to_graph6)
from tkit.constructions import cycle_graph, path_graph, star_graph

EXAMPLE_EDGES = "1 2\n1 3\n2 3\n2 4\n2 5\n3 5\n3 6"


def labels_of(g, vs):
    return sorted(g.labels[v] for v in vs)


class TestParseEdgeList:
    def test_example_graph(self):
        g = parse_edge_list(EXAMPLE_EDGES)
        assert g.n == 6
        assert g.edge_count == 7
        assert [g.degree(g.index_of(str(i))) for i in range(1, 7)] == [2, 4, 4, 1, 2, 1]

    def test_single_edge_with_names(self):
        g = parse_edge_list("a b")
        assert g.n == 2 and g.edge_count == 1
        assert set(g.labels) == {"a", "b"}

    def test_duplicates_collapse(self):
        g = parse_edge_list("1 2\n2 1\n1 2")
        assert g.n == 2 and g.edge_count == 1

    def test_comments_and_blanks(self):
        g = parse_edge_list("# header\n1 2   # trailing\n\n2 3\n")
        assert g.n == 3 and g.edge_count == 2

    def test_loop_rejected_with_line(self):
        with pytest.raises(GraphError, match="line 2"):
            parse_edge_list("1 2\n3 3")

    def test_bad_token_count_rejected(self):
        with pytest.raises(GraphError, match="line 1"):
            parse_edge_list("1 2 3")

    def test_numeric_ordering(self):
        g = parse_edge_list("10 2\n2 1")
        assert g.labels == ("1", "2", "10")


class TestMakeGraph:
    def test_loop_rejected(self):
        with pytest.raises(GraphError):
            make_graph(2, [(0, 0)])

    def test_out_of_range(self):
        with pytest.raises(GraphError):
            make_graph(2, [(0, 5)])

    def test_duplicate_labels(self):
        with pytest.raises(GraphError):
            make_graph(2, [(0, 1)], labels=["a", "a"])


class TestGraph6:
    def test_k3_by_hand(self):
        # size byte 3+63='B'; bits 111 padded to 111000 -> 56+63=119='w'
        g = parse_graph6("Bw")
        assert g.n == 3 and g.edge_count == 3

    def test_p3_by_hand(self):
        g = parse_graph6("Bg")
        assert g.n == 3 and g.edge_count == 2
        assert sorted(g.degree(v) for v in range(3)) == [1, 1, 2]

    def test_roundtrip_exhaustive_small(self):
        for n in (2, 3, 4):
            for g in connected_graphs(n):
                s = to_graph6(g)
                assert to_graph6(parse_graph6(s)) == s
                h = parse_graph6(s)
                assert sorted(h.edges()) == sorted(g.edges())

    def test_header_prefix_stripped(self):
        assert parse_graph6(">>graph6<<Bw").edge_count == 3

    def test_large_n_extension_roundtrip(self):
        g = path_graph(70)
        s = to_graph6(g)
        assert s.startswith("~")
        back = parse_graph6(s)
        assert back.n == 70 and sorted(back.edges()) == sorted(g.edges())

    def test_truncated_rejected(self):
        with pytest.raises(GraphError, match="offset"):
            parse_graph6("E?")

    def test_bad_byte_rejected(self):
        with pytest.raises(GraphError, match="offset"):
            parse_graph6(b"B\x1f")

    def test_nonzero_padding_rejected(self):
        # P3 body byte with a trailing padding bit set
        with pytest.raises(GraphError, match="padding"):
            parse_graph6(bytes([63 + 3, 63 + 0b101001]))


class TestLocalMetric:
    def test_example(self):
        g = parse_edge_list(EXAMPLE_EDGES)
        m = local_metric(g, g.index_of("1"))
        assert m.ecc == 2
        assert labels_of(g, m.sphere(0)) == ["1"]
        assert labels_of(g, m.sphere(1)) == ["2", "3"]
        assert labels_of(g, m.sphere(2)) == ["4", "5", "6"]

    def test_k2(self):
        g = parse_edge_list("a b")
        assert local_metric(g, 0).ecc == 1

    def test_path_center(self):
        g = path_graph(3)
        m = local_metric(g, 1)
        assert m.dist == (1, 0, 1)

    def test_disconnected_rejected(self):
        g = make_graph(3, [(0, 1)])
        with pytest.raises(GraphError, match="disconnected"):
            local_metric(g, 0)

    def test_bad_vertex(self):
        g = parse_edge_list("a b")
        with pytest.raises(GraphError):
            local_metric(g, 9)


class TestDistancePartition:
    def test_example_edge_cells(self):
        g = parse_edge_list(EXAMPLE_EDGES)
        part = distance_partition(g, g.index_of("1"), g.index_of("2"))
        assert labels_of(g, part.cell(1, 0)) == ["2"]
        assert labels_of(g, part.cell(1, 1)) == ["3"]
        assert labels_of(g, part.cell(2, 1)) == ["4", "5"]
        assert labels_of(g, part.cell(2, 2)) == ["6"]
        assert part.cell(0, 1) == (g.index_of("1"),)

    def test_k2(self):
        g = parse_edge_list("a b")
        part = distance_partition(g, 0, 1)
        assert part.cell(0, 1) == (0,)
        assert part.cell(1, 0) == (1,)
        assert part.cell(1, 1) == ()

    def test_not_adjacent_rejected(self):
        g = path_graph(3)
        with pytest.raises(GraphError, match="not adjacent"):
            distance_partition(g, 0, 2)

    def test_cells_partition_vertices(self):
        for n in (3, 4, 5):
            for g in connected_graphs(n):
                for x, y in g.edges():
                    part = distance_partition(g, x, y)
                    seen = [v for vs in part.cells.values() for v in vs]
                    assert sorted(seen) == list(range(g.n))
                    assert all(abs(i - j) <= 1 for (i, j) in part.cells)
                break  # one edge per graph keeps this sweep quick

    def test_bipartite_mid_cells_empty(self):
        for g in (cycle_graph(6), path_graph(5), star_graph(4)):
            for x, y in g.edges():
                part = distance_partition(g, x, y)
                assert all(i != j for (i, j) in part.cells if part.cells[(i, j)])


class TestStructureReport:
    def test_example_thresholds_zero(self):
        g = parse_edge_list(EXAMPLE_EDGES)
        rep = structure_report(g, g.index_of("1"))
        assert not rep.vacuous
        assert [rec.threshold for rec in rep.per_neighbor] == [0, 0]
        assert rep.threshold_constant is True

    def test_star_center_threshold_is_ecc(self):
        g = star_graph(3)
        rep = structure_report(g, 0)
        assert rep.is_tree
        assert all(rec.threshold == rep.ecc == 1 for rec in rep.per_neighbor)

    def test_cycle6_threshold(self):
        rep = structure_report(cycle_graph(6), 0)
        assert [rec.threshold for rec in rep.per_neighbor] == [2, 2]

    def test_leaf_base_vacuous(self):
        rep = structure_report(path_graph(3), 0)
        assert rep.vacuous


class TestConnectedGraphs:
    def test_counts(self):
        # labeled connected graph counts
        assert sum(1 for _ in connected_graphs(2)) == 1
        assert sum(1 for _ in connected_graphs(3)) == 4
        assert sum(1 for _ in connected_graphs(4)) == 38

    def test_all_connected(self):
        assert all(g.is_connected() for g in connected_graphs(4))
