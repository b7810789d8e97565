import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plateau_lab.field import field
from plateau_lab.fileio import (
    ParseError,
    file_digest,
    format_set_file,
    format_truth_table,
    parse_set_file,
    parse_truth_table,
    read_set_file,
    read_truth_table,
    write_truth_table,
)
from plateau_lab.functions import VectorialFunction, power_map, random_function, trace_power
from plateau_lab.groups import AbelianGroup


@given(st.sampled_from([(3, 2), (3, 3), (2, 3), (5, 1)]), st.integers(0, 2**32 - 1))
def test_truth_table_round_trip(pn, seed):
    f = random_function(field(*pn), np.random.default_rng(seed))
    assert parse_truth_table(format_truth_table(f)) == f


def test_vectorial_round_trip(tmp_path):
    F = power_map(field(3, 2), 5)
    path = tmp_path / "x5.txt"
    write_truth_table(F, path)
    back = read_truth_table(path)
    assert isinstance(back, VectorialFunction) and back == F
    assert len(file_digest(path)) == 64


def test_comments_and_blank_lines():
    text = "# ternary\n3 1\n0 1   # modulus x\n\n0\n1 # one\n1\n"
    f = parse_truth_table(text)
    assert f.values.tolist() == [0, 1, 1]


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("3 1\n0 1\n0\n1\n5\n", 5, "outside"),
        ("3 1\n0 1\n0\n1\n", None, "expected 3 values"),
        ("3 1\n0 1\n0\n1\n2\n0\n", 6, "expected 3 values"),
        ("3 2\n2 0 1\n" + "0\n" * 9, 2, ""),
        ("3 2\n1 0 7\n" + "0\n" * 9, 2, "modulus coefficients"),
        ("3\n", 1, "header"),
        ("3 1\n0 1\nx\n0\n0\n", 3, "expected integers"),
        ("", None, "empty"),
    ],
)
def test_parse_errors_name_the_line(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_truth_table(text, "t.txt")
    assert err.value.line == line
    assert fragment in str(err.value)
    if line is not None:
        assert f"t.txt:{line}:" in str(err.value)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        read_truth_table(tmp_path / "nope.txt")


def test_set_file_formats(tmp_path):
    G = AbelianGroup.of_field(field(3, 2))
    text = format_set_file(G, [4, 0, 7])
    sf = parse_set_file(text)
    assert sf.group == G and sf.members.tolist() == [0, 4, 7]
    bare = parse_set_file("27\n0\n1\n5\n")
    assert bare.group == AbelianGroup.elementary(3, 3)
    prod = AbelianGroup.product(field(3, 2), field(3, 1))
    assert parse_set_file(format_set_file(prod, [1, 2, 26])).group == prod
    path = tmp_path / "s.txt"
    path.write_text(text)
    assert read_set_file(path).members.tolist() == [0, 4, 7]


@pytest.mark.parametrize(
    "text,fragment",
    [("9\n0\n0\n", "duplicate"), ("9\n9\n", "outside"), ("12\n0\n", "prime power")],
)
def test_set_file_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_set_file(text, "s.txt")
    assert fragment in str(err.value)


def test_trace_power_file_is_p_ary():
    f = trace_power(field(3, 3), 5)
    text = format_truth_table(f)
    assert text.splitlines()[:2] == ["3 3", "1 2 0 1"]
