import numpy as np
import pytest

from imagegen import rough_image
from domain.bitstream import (
    BitReader, BitWriter, bits_to_bytes, bytes_to_bits, pack_reference_values, read_header,
    reference_cells, unpack_reference_values, write_header,
)
from domain.errors import BitstreamUnderflow, HeaderError, KeyFormatError
from domain.hvlcl_code import assign_codes, identity_table, serialize_table
from domain.models import HEADER_BITS, AuxHeader, GrayImage, KeySpec, LabelHistogram
from domain.prediction import build_label_map, histogram


def _text(bits) -> str:
    return "".join(str(int(bit)) for bit in bits)


def test_header_layout():
    bits = write_header(AuxHeader(ref_rows=1, ref_cols=1, table=identity_table(), aux_len=0))
    assert bits.size == HEADER_BITS
    assert _text(bits) == "00000001" + "00000001" + _text(serialize_table(identity_table())) + "0" * 32


def test_header_round_trip():
    table = assign_codes(LabelHistogram((1, 2, 3, 4, 5, 6, 7, 8, 9), ref_count=0))
    header = AuxHeader(ref_rows=3, ref_cols=200, table=table, aux_len=3121508)
    assert read_header(write_header(header)) == header


def test_zero_region_field_is_rejected():
    bits = write_header(AuxHeader(ref_rows=0, ref_cols=1, table=identity_table(), aux_len=0))
    with pytest.raises(HeaderError):
        read_header(bits)


def test_region_must_fit_image():
    bits = write_header(AuxHeader(ref_rows=4, ref_cols=1, table=identity_table(), aux_len=0))
    with pytest.raises(HeaderError):
        read_header(bits, rows=4, cols=10)


def test_corrupt_table_is_a_header_error():
    bits = write_header(AuxHeader(ref_rows=1, ref_cols=1, table=identity_table(), aux_len=0))
    bits[16:52] = 0
    with pytest.raises(HeaderError):
        read_header(bits)


def test_truncated_header():
    bits = write_header(AuxHeader(ref_rows=1, ref_cols=1, table=identity_table(), aux_len=7))
    with pytest.raises(BitstreamUnderflow):
        read_header(bits[:80])


def test_reader_and_writer():
    writer = BitWriter()
    writer.write(5, 3)
    writer.write_bits([0, 1])
    writer.write(300, 16)
    assert len(writer) == 21
    reader = BitReader(writer.getvalue())
    assert reader.read(3) == 5
    assert reader.read_bits(2).tolist() == [0, 1]
    assert reader.read(16) == 300
    assert reader.remaining == 0
    with pytest.raises(BitstreamUnderflow):
        reader.read_bit()


def test_reader_follows_growing_list():
    bits = [1]
    reader = BitReader(bits)
    assert reader.read_bit() == 1
    bits.extend([0, 1])
    assert reader.read_bits(2).tolist() == [0, 1]


def test_reader_respects_declared_length():
    reader = BitReader([1, 1, 1, 1], start=1, length=2)
    assert reader.read_bit() == 1
    with pytest.raises(BitstreamUnderflow):
        reader.read_bits(2)


def test_bytes_and_bits():
    assert bytes_to_bits(b"\x80\x01").tolist() == [1] + [0] * 14 + [1]
    assert bits_to_bytes([1, 0, 1]) == b"\xa0"


def test_pack_reference_values():
    img = GrayImage.from_rows([[10, 20], [30, 40]])
    expected = format(10, "08b") + format(20, "08b") + format(30, "08b")
    assert _text(pack_reference_values(img, 1, 1)) == expected


def test_pack_order_walks_column_strip_by_column():
    ii, jj = reference_cells(3, 4, 1, 2)
    assert list(zip(ii.tolist(), jj.tolist())) == [
        (0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (1, 1), (2, 1),
    ]
    ii, jj = reference_cells(3, 4, 1, 2, raster=True)
    assert list(zip(ii.tolist(), jj.tolist()))[4:] == [(1, 0), (1, 1), (2, 0), (2, 1)]


@pytest.mark.parametrize("r, c", [(1, 1), (2, 3), (5, 1)])
def test_unpack_inverts_pack(rng, r, c):
    img = rough_image(rng, 12, 10)
    bits = pack_reference_values(img, r, c)
    assert bits.size == 8 * histogram(build_label_map(img, r, c)).ref_count
    grid = unpack_reference_values(bits, 12, 10, r, c)
    assert np.array_equal(grid[:r, :], img.pixels[:r, :])
    assert np.array_equal(grid[:, :c], img.pixels[:, :c])
    assert not grid[r:, c:].any()


def test_unpack_needs_every_reference_bit():
    with pytest.raises(BitstreamUnderflow):
        unpack_reference_values(np.zeros(23, dtype=np.uint8), 2, 2, 1, 1)


@pytest.mark.parametrize("text", ["abc", "zz", "0g"])
def test_bad_hex_keys(text):
    with pytest.raises(KeyFormatError):
        KeySpec.from_hex(text)
