from fractions import Fraction
import itertools

import numpy as np
import pytest

from domain.errors import BitstreamUnderflow, CodeTableError
from domain.bitstream import BitReader
from domain.hvlcl_code import (
    TABLE_BITS, assign_codes, code_length_of, decode_labels, decode_next_label,
    deserialize_table, encode_labels, identity_table, serialize_table,
)
from domain.models import CODEWORDS, TAG_COUNT, CodeTable, LabelHistogram

# Label distribution of the 512x512 Lena test image
LENA_COUNTS = (9818, 9742, 15247, 33246, 44509, 53359, 41758, 24353, 29089)
LENA_CODES = {5: "00", 4: "01", 6: "100", 3: "101", 8: "1100", 7: "1101", 2: "1110", 0: "11110", 1: "11111"}


def _bits(text: str):
    return [int(ch) for ch in text]


def test_codewords_are_complete_prefix_code():
    assert sum(Fraction(1, 2 ** len(word)) for word in CODEWORDS) == 1
    for a, b in itertools.permutations(CODEWORDS, 2):
        assert not b.startswith(a)


def test_lena_assignment():
    table = assign_codes(LabelHistogram(LENA_COUNTS, ref_count=1023))
    assert {tag: table.codeword(tag) for tag in range(TAG_COUNT)} == LENA_CODES


def test_uniform_histogram_gives_identity():
    assert assign_codes(LabelHistogram((5,) * TAG_COUNT, ref_count=0)) == identity_table()
    assert assign_codes(LabelHistogram((9, 8, 7, 6, 5, 4, 3, 2, 1), ref_count=0)) == identity_table()


def test_more_frequent_tags_never_get_longer_codes(rng):
    for _ in range(200):
        counts = tuple(int(v) for v in rng.integers(0, 6, size=TAG_COUNT))
        table = assign_codes(LabelHistogram(counts, ref_count=0))
        for a in range(TAG_COUNT):
            for b in range(TAG_COUNT):
                if counts[a] > counts[b]:
                    assert table.code_length(a) <= table.code_length(b)


def test_serialize_identity():
    expected = "".join(format(index, "04b") for index in range(TAG_COUNT))
    assert "".join(map(str, serialize_table(identity_table()))) == expected


def test_serialize_lena_table():
    bits = serialize_table(assign_codes(LabelHistogram(LENA_COUNTS, ref_count=0)))
    assert bits.size == TABLE_BITS
    assert bits[20:24].tolist() == [0, 0, 0, 0]
    assert deserialize_table(bits).codeword(5) == "00"


def test_deserialize_rejects_non_bijection():
    with pytest.raises(CodeTableError):
        deserialize_table([0] * TABLE_BITS)
    with pytest.raises(CodeTableError):
        CodeTable((0, 1, 2, 3, 4, 5, 6, 7, 9))


def test_encode_labels():
    table = assign_codes(LabelHistogram(LENA_COUNTS, ref_count=0))
    assert encode_labels([5, 5, 4], table).tolist() == _bits("000001")
    assert encode_labels([], table).size == 0
    assert code_length_of([5, 5, 4, 0], table) == 11


def test_decode_labels_inverts_encode(rng):
    for _ in range(200):
        table = CodeTable(tuple(rng.permutation(TAG_COUNT).tolist()))
        tags = rng.integers(0, TAG_COUNT, size=int(rng.integers(0, 50))).tolist()
        bits = encode_labels(tags, table)
        assert decode_labels(bits, len(tags), table) == tags


def test_decode_next_label_consumes_one_codeword():
    table = assign_codes(LabelHistogram(LENA_COUNTS, ref_count=0))
    reader = BitReader(_bits("1110"))
    assert decode_next_label(reader, table) == 2
    assert reader.position == 4

    reader = BitReader(_bits("00101"))
    assert decode_next_label(reader, table) == 5
    assert reader.position == 2


def test_decode_underflow_inside_codeword():
    with pytest.raises(BitstreamUnderflow):
        decode_next_label(BitReader(_bits("1")), identity_table())
    with pytest.raises(BitstreamUnderflow):
        decode_labels(np.array(_bits("0011"), dtype=np.uint8), 3, identity_table())
