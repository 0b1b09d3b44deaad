"""
Fixed nine-word prefix code assigned to tags by frequency rank
"""
from typing import List, Sequence

import numpy as np

from domain.errors import BitstreamUnderflow, CodeTableError
from domain.models import CODEWORDS, TAG_COUNT, CodeTable, LabelHistogram

TABLE_FIELD_BITS = 4
TABLE_BITS = TAG_COUNT * TABLE_FIELD_BITS
_MAX_CODE_LENGTH = max(len(word) for word in CODEWORDS)


def assign_codes(hist: LabelHistogram) -> CodeTable:
    """Most frequent tag gets "00"; equal counts favor the smaller tag"""
    ranked = sorted(range(TAG_COUNT), key=lambda tag: (-hist.counts[tag], tag))
    assignment = [0] * TAG_COUNT
    for index, tag in enumerate(ranked):
        assignment[tag] = index
    return CodeTable(tuple(assignment))


def identity_table() -> CodeTable:
    return CodeTable(tuple(range(TAG_COUNT)))


def serialize_table(table: CodeTable) -> np.ndarray:
    """36 bits: the 4-bit codeword index of tags 0..8, MSB first"""
    shifts = np.arange(TABLE_FIELD_BITS - 1, -1, -1)
    indices = np.array(table.assignment, dtype=np.int64)
    return ((indices[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def deserialize_table(bits: Sequence[int]) -> CodeTable:
    fields = np.asarray(bits, dtype=np.int64)
    if fields.size != TABLE_BITS:
        raise CodeTableError(f"Code table needs {TABLE_BITS} bits, got {fields.size}")
    weights = 1 << np.arange(TABLE_FIELD_BITS - 1, -1, -1)
    indices = fields.reshape(TAG_COUNT, TABLE_FIELD_BITS) @ weights
    return CodeTable(tuple(int(index) for index in indices))


def _padded_codewords(table: CodeTable):
    padded = np.zeros((TAG_COUNT, _MAX_CODE_LENGTH), dtype=np.uint8)
    for tag in range(TAG_COUNT):
        word = table.codeword(tag)
        padded[tag, :len(word)] = [int(ch) for ch in word]
    return padded, table.code_lengths()


def encode_labels(tags: Sequence[int], table: CodeTable) -> np.ndarray:
    """Concatenate the codewords of a tag sequence"""
    tags = np.asarray(tags, dtype=np.int64)
    if tags.size == 0:
        return np.zeros(0, dtype=np.uint8)
    padded, lengths = _padded_codewords(table)
    mask = np.arange(_MAX_CODE_LENGTH) < lengths[tags][:, None]
    return padded[tags][mask]


def code_length_of(tags: Sequence[int], table: CodeTable) -> int:
    tags = np.asarray(tags, dtype=np.int64)
    return int(table.code_lengths()[tags].sum())


def decode_next_label(reader, table: CodeTable) -> int:
    """Consume exactly one codeword from a bit reader and return its tag.

    Raises BitstreamUnderflow when the reader ends inside a codeword.
    """
    word = ""
    while len(word) < _MAX_CODE_LENGTH:
        word += "1" if reader.read_bit() else "0"
        tag = table.tag_for(word)
        if tag is not None:
            return tag
    # unreachable for a complete code
    raise BitstreamUnderflow(f"No codeword matches {word}")


def decode_labels(bits: Sequence[int], count: int, table: CodeTable) -> List[int]:
    from domain.bitstream import BitReader

    reader = BitReader(bits)
    return [decode_next_label(reader, table) for _ in range(count)]
