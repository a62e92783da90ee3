"""Tests for the election, X3C and graph text formats."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multiwinner.election import Election, check_label
from multiwinner.election_io import (
    load_election,
    parse_election,
    parse_graph,
    parse_x3c,
    read_election,
    serialize_election,
    serialize_graph,
    serialize_x3c,
    write_election,
)
from multiwinner.errors import InvalidInputError, ParseError
from tests.conftest import elections


def writable(label: str) -> bool:
    try:
        check_label(label)
    except InvalidInputError:
        return False
    return True


SMALL = """\
# comment
3 2 1

a
b
c
a,b,c
c, b, a
"""


class TestLoadElection:
    """Test election file parsing."""

    def test_small(self):
        """Verify comments, blank lines and spaces after commas are accepted."""
        election, k = load_election(SMALL)
        assert k == 1
        assert election.candidates == ("a", "b", "c")
        assert election.votes == ((0, 1, 2), (2, 1, 0))

    def test_example_file(self, data_dir):
        election, k = read_election(data_dir / "example1.elec")
        assert (election.m, election.n, k) == (8, 8, 2)
        assert election.votes[0] == (0, 5, 2, 6, 7, 4, 1, 3)

    def test_empty(self):
        with pytest.raises(ParseError):
            load_election("# nothing\n\n")

    def test_bad_header(self):
        with pytest.raises(ParseError) as excinfo:
            load_election("3 x 1\n")
        assert excinfo.value.line == 1

    def test_k_out_of_range(self):
        with pytest.raises(ParseError, match="committee size"):
            load_election("2 1 3\na\nb\na,b\n")

    def test_unknown_label_reports_line(self):
        """Verify the offending line number is carried."""
        with pytest.raises(ParseError) as excinfo:
            load_election("2 1 1\na\nb\na,z\n")
        assert excinfo.value.line == 4
        assert "line 4" in str(excinfo.value)

    def test_not_a_permutation(self):
        with pytest.raises(ParseError, match="permutation"):
            load_election("2 1 1\na\nb\na,a\n")

    def test_duplicate_label(self):
        with pytest.raises(ParseError, match="duplicate"):
            load_election("2 1 1\na\na\na,a\n")

    def test_short_file(self):
        with pytest.raises(ParseError, match="ends early"):
            load_election("2 2 1\na\nb\na,b\n")

    def test_trailing_content(self):
        with pytest.raises(ParseError, match="after the last vote"):
            load_election("2 1 1\na\nb\na,b\nb,a\n")

    def test_label_with_comma(self):
        with pytest.raises(ParseError):
            load_election("2 1 1\na,x\nb\na,b\n")


class TestSerializeElection:
    def test_header_and_votes(self):
        text = serialize_election(parse_election(SMALL), 1)
        assert text.splitlines() == ["3 2 1", "a", "b", "c", "a,b,c", "c,b,a"]

    @given(elections())
    def test_reparses(self, election):
        assert load_election(serialize_election(election, 1)) == (election, 1)

    @given(st.lists(st.text(min_size=1, max_size=4).filter(writable), min_size=1, max_size=5, unique=True))
    def test_reparses_any_accepted_labels(self, labels):
        """Verify every label an election accepts survives the file format."""
        m = len(labels)
        election = Election(tuple(labels), (tuple(range(m)), tuple(reversed(range(m)))))
        assert load_election(serialize_election(election, 1)) == (election, 1)

    def test_write_and_read(self, tmp_path, example_election):
        path = tmp_path / "e.elec"
        write_election(path, example_election, 2)
        assert read_election(path) == (example_election, 2)


class TestX3cFormat:
    """Test X3C instance files."""

    def test_bundled(self, data_dir):
        instance = parse_x3c((data_dir / "x3c-yes.x3c").read_text())
        assert instance.universe_size == 6
        assert frozenset({1, 2, 3}) in instance.sets

    def test_element_out_of_range(self):
        with pytest.raises(ParseError) as excinfo:
            parse_x3c("3\n1 2 4\n")
        assert excinfo.value.line == 2

    def test_repeated_element(self):
        with pytest.raises(ParseError, match="repeats"):
            parse_x3c("3\n1 1 2\n")

    def test_universe_not_multiple_of_three(self):
        with pytest.raises(ParseError):
            parse_x3c("4\n1 2 3\n")

    def test_serialize(self):
        assert serialize_x3c(parse_x3c("6\n3 1 2\n")) == "6\n1 2 3\n"


class TestGraphFormat:
    """Test graph files."""

    def test_bundled(self, data_dir):
        graph = parse_graph((data_dir / "square.graph").read_text())
        assert graph.vertex_count == 4
        assert graph.regular_degree() == 2

    def test_vertex_out_of_range(self):
        with pytest.raises(ParseError):
            parse_graph("2\n0 2\n")

    def test_self_loop(self):
        with pytest.raises(ParseError, match="self-loop"):
            parse_graph("2\n1 1\n")

    def test_serialize_normalizes_edges(self):
        assert serialize_graph(parse_graph("3\n1 0\n")) == "3\n0 1\n"
