from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Optional, Tuple

import numpy as np

from domain.errors import CodeTableError, ImageFormatError, KeyFormatError

if TYPE_CHECKING:
    from models.reports import CapacityReport

# Tag value stored in a LabelMap for reference pixels
REFERENCE = -1
TAG_COUNT = 9

# Fixed prefix code, shortest first; only the tag -> index assignment adapts
CODEWORDS: Tuple[str, ...] = ("00", "01", "100", "101", "1100", "1101", "1110", "11110", "11111")

# r(8) + c(8) + code table(36) + aux length(32)
HEADER_BITS = 84
# What the method's original accounting reserves (32-bit rule + 20-bit length)
LEGACY_HEADER_BITS = 52
PAYLOAD_LENGTH_BITS = 32


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Domain model for an m×n 8-bit grayscale image"""
    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2:
            raise ImageFormatError(f"Expected a 2-D pixel grid, got {pixels.ndim} dimensions")
        if pixels.shape[0] < 2 or pixels.shape[1] < 2:
            raise ImageFormatError(f"Image must be at least 2x2, got {pixels.shape[0]}x{pixels.shape[1]}")
        if pixels.dtype != np.uint8:
            if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
                raise ImageFormatError("Pixel values must lie in [0, 255]")
            pixels = pixels.astype(np.uint8)
        else:
            pixels = pixels.copy()
        pixels.flags.writeable = False
        object.__setattr__(self, "pixels", pixels)

    @classmethod
    def from_rows(cls, rows) -> "GrayImage":
        return cls(np.array(rows, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __hash__(self):
        return hash((self.pixels.shape, self.pixels.tobytes()))


@dataclass(frozen=True, eq=False)
class LabelMap:
    """Per-pixel tags; REFERENCE marks the first ref_rows rows and ref_cols columns"""
    tags: np.ndarray
    ref_rows: int
    ref_cols: int

    @property
    def rows(self) -> int:
        return self.tags.shape[0]

    @property
    def cols(self) -> int:
        return self.tags.shape[1]

    def non_reference_tags(self) -> np.ndarray:
        """Tags of non-reference pixels in raster order"""
        return self.tags[self.ref_rows:, self.ref_cols:].ravel()

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelMap):
            return NotImplemented
        return (self.ref_rows, self.ref_cols) == (other.ref_rows, other.ref_cols) and \
            bool(np.array_equal(self.tags, other.tags))

    def __hash__(self):
        return hash((self.ref_rows, self.ref_cols, self.tags.tobytes()))


@dataclass(frozen=True)
class LabelHistogram:
    """Pixel counts per tag plus the reference pixel count"""
    counts: Tuple[int, ...]
    ref_count: int

    @property
    def total(self) -> int:
        return sum(self.counts) + self.ref_count


@dataclass(frozen=True)
class CodeTable:
    """Assignment of the fixed codewords to tags (the HVLCL rule)"""
    assignment: Tuple[int, ...]  # assignment[tag] = codeword index
    _decode: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        assignment = tuple(int(index) for index in self.assignment)
        if sorted(assignment) != list(range(TAG_COUNT)):
            raise CodeTableError(f"Code table is not a bijection on 0..8: {list(assignment)}")
        object.__setattr__(self, "assignment", assignment)
        object.__setattr__(self, "_decode", {CODEWORDS[index]: tag for tag, index in enumerate(assignment)})

    def codeword(self, tag: int) -> str:
        return CODEWORDS[self.assignment[tag]]

    def code_length(self, tag: int) -> int:
        return len(self.codeword(tag))

    def tag_for(self, codeword: str) -> Optional[int]:
        return self._decode.get(codeword)

    def code_lengths(self) -> np.ndarray:
        return np.array([self.code_length(tag) for tag in range(TAG_COUNT)], dtype=np.int64)


@dataclass(frozen=True)
class AuxHeader:
    """Container header preceding the auxiliary stream"""
    ref_rows: int
    ref_cols: int
    table: CodeTable
    aux_len: int


@dataclass(frozen=True)
class KeySpec:
    """Byte-string key from which a keystream is derived"""
    key: bytes = b""

    @classmethod
    def from_hex(cls, text: str) -> "KeySpec":
        cleaned = text.strip()
        if len(cleaned) % 2:
            raise KeyFormatError(f"Hex key must have even length, got {len(cleaned)} characters")
        try:
            return cls(bytes.fromhex(cleaned))
        except ValueError as e:
            raise KeyFormatError(f"Invalid hex key: {e}") from e

    def to_hex(self) -> str:
        return self.key.hex()


@dataclass(frozen=True)
class StorageLayout:
    """Reference region and label coding chosen for one image"""
    label_map: LabelMap
    histogram: LabelHistogram
    table: CodeTable
    code_bits: int
    capacity_bits: int  # sum of per-pixel capacities over non-reference pixels
    attempts: int = 1

    @property
    def ref_rows(self) -> int:
        return self.label_map.ref_rows

    @property
    def ref_cols(self) -> int:
        return self.label_map.ref_cols

    @property
    def reference_bits(self) -> int:
        return 8 * self.histogram.ref_count

    @property
    def aux_len(self) -> int:
        return self.code_bits + self.reference_bits

    @property
    def net_payload_bits(self) -> int:
        return self.capacity_bits - self.code_bits - HEADER_BITS


@dataclass(frozen=True)
class OwnerOutput:
    """Marked encrypted image plus its capacity accounting"""
    image: GrayImage
    layout: StorageLayout
    capacity_report: "CapacityReport"


@dataclass
class DecodedStream:
    """Result of streaming the label map out of a marked encrypted image"""
    header: AuxHeader
    label_map: LabelMap
    stream: np.ndarray  # full storage stream, one bit per element
    code_bits: int

    @property
    def payload_start(self) -> int:
        return HEADER_BITS + self.header.aux_len

    @property
    def free_bits(self) -> int:
        return len(self.stream) - self.payload_start

    def reference_bits(self) -> np.ndarray:
        start = HEADER_BITS + self.code_bits
        return self.stream[start:self.payload_start]
