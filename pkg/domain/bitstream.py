"""
MSB-first bit reader/writer and the auxiliary header codec
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from domain.errors import BitstreamUnderflow, CodeTableError, HeaderError
from domain.hvlcl_code import TABLE_BITS, deserialize_table, serialize_table
from domain.models import HEADER_BITS, AuxHeader, GrayImage


def int_to_bits(value: int, width: int) -> np.ndarray:
    if value < 0 or value >> width:
        raise ValueError(f"{value} does not fit in {width} bits")
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((np.int64(value) >> shifts) & 1).astype(np.uint8)


def bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value


def bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bits_to_bytes(bits: Sequence[int]) -> bytes:
    """Pack bits MSB first; a trailing partial byte is zero padded"""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


class BitWriter:
    """Accumulates bits MSB first"""

    def __init__(self):
        self._bits: List[int] = []

    def __len__(self) -> int:
        return len(self._bits)

    def write(self, value: int, width: int):
        self._bits.extend(int_to_bits(value, width).tolist())

    def write_bits(self, bits: Sequence[int]):
        self._bits.extend(int(bit) for bit in bits)

    def getvalue(self) -> np.ndarray:
        return np.array(self._bits, dtype=np.uint8)


class BitReader:
    """Reads bits from a sequence without passing its declared length.

    When `length` is omitted the current length of `bits` is used on every
    read, so a list that grows while it is being read stays usable.
    """

    def __init__(self, bits: Sequence[int], start: int = 0, length: Optional[int] = None):
        self._bits = bits
        self._length = length
        self.position = start

    @property
    def length(self) -> int:
        return len(self._bits) if self._length is None else self._length

    @property
    def remaining(self) -> int:
        return self.length - self.position

    def read_bit(self) -> int:
        if self.position >= self.length:
            raise BitstreamUnderflow(f"Read past end of bitstream at bit {self.position}")
        bit = self._bits[self.position]
        self.position += 1
        return int(bit)

    def read_bits(self, count: int) -> np.ndarray:
        if count > self.remaining:
            raise BitstreamUnderflow(
                f"Need {count} bits at position {self.position}, only {self.remaining} available"
            )
        chunk = np.asarray(self._bits[self.position:self.position + count], dtype=np.uint8)
        self.position += count
        return chunk

    def read(self, width: int) -> int:
        return bits_to_int(self.read_bits(width))


def write_header(header: AuxHeader) -> np.ndarray:
    """r(8) c(8) table(36) aux_len(32), big-endian"""
    writer = BitWriter()
    writer.write(header.ref_rows, 8)
    writer.write(header.ref_cols, 8)
    writer.write_bits(serialize_table(header.table))
    writer.write(header.aux_len, 32)
    return writer.getvalue()


def read_header(bits: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> AuxHeader:
    """Parse the first 84 bits; validates r/c against the image when its shape is given"""
    reader = BitReader(bits)
    if reader.remaining < HEADER_BITS:
        raise BitstreamUnderflow(f"Header needs {HEADER_BITS} bits, only {reader.remaining} available")
    ref_rows = reader.read(8)
    ref_cols = reader.read(8)
    if ref_rows == 0 or ref_cols == 0:
        raise HeaderError(f"Reference region fields must be nonzero, got r={ref_rows} c={ref_cols}")
    if rows is not None and ref_rows >= rows or cols is not None and ref_cols >= cols:
        raise HeaderError(f"Reference region {ref_rows}x{ref_cols} does not fit a {rows}x{cols} image")
    try:
        table = deserialize_table(reader.read_bits(TABLE_BITS))
    except CodeTableError as e:
        raise HeaderError(str(e)) from e
    aux_len = reader.read(32)
    return AuxHeader(ref_rows=ref_rows, ref_cols=ref_cols, table=table, aux_len=aux_len)


def reference_cells(rows: int, cols: int, ref_rows: int, ref_cols: int,
                    raster: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Row and column indices of the reference region.

    Both orders start with the full rows 0..r-1. The column strip below them
    is walked column by column (packing order) or row by row (raster order).
    """
    top_i, top_j = np.meshgrid(np.arange(ref_rows), np.arange(cols), indexing="ij")
    if raster:
        side_i, side_j = np.meshgrid(np.arange(ref_rows, rows), np.arange(ref_cols), indexing="ij")
    else:
        side_j, side_i = np.meshgrid(np.arange(ref_cols), np.arange(ref_rows, rows), indexing="ij")
    return (np.concatenate([top_i.ravel(), side_i.ravel()]),
            np.concatenate([top_j.ravel(), side_j.ravel()]))


def pack_reference_values(img: GrayImage, ref_rows: int, ref_cols: int) -> np.ndarray:
    """8 bits per reference pixel: full rows first, then the column strip top to bottom"""
    ii, jj = reference_cells(img.rows, img.cols, ref_rows, ref_cols)
    return np.unpackbits(img.pixels[ii, jj])


def unpack_reference_values(bits: Sequence[int], rows: int, cols: int,
                            ref_rows: int, ref_cols: int) -> np.ndarray:
    """Inverse of pack_reference_values: a rows×cols grid with only reference cells filled"""
    ii, jj = reference_cells(rows, cols, ref_rows, ref_cols)
    if len(bits) < 8 * len(ii):
        raise BitstreamUnderflow(f"Need {8 * len(ii)} reference bits, got {len(bits)}")
    values = np.packbits(np.asarray(bits, dtype=np.uint8)[:8 * len(ii)])
    grid = np.zeros((rows, cols), dtype=np.uint8)
    grid[ii, jj] = values
    return grid
