"""
MED prediction and t-MSB labeling
"""
import numpy as np

from domain.errors import HvlclError
from domain.models import REFERENCE, TAG_COUNT, GrayImage, LabelHistogram, LabelMap

# _BIT_LENGTH[v] = number of significant bits in v, for v in 0..255
_BIT_LENGTH = np.array([value.bit_length() for value in range(256)], dtype=np.int8)


def med_predict(top_left: int, top: int, left: int) -> int:
    """Median edge detector prediction from the three causal neighbors"""
    low, high = min(top, left), max(top, left)
    if top_left <= low:
        return high
    if top_left >= high:
        return low
    return top + left - top_left


def label_of(x: int, px: int) -> int:
    """Length of the common MSB prefix of two 8-bit values"""
    return 8 - (x ^ px).bit_length()


def label_grid(img: GrayImage) -> np.ndarray:
    """Tags for every pixel with a complete causal context, REFERENCE elsewhere.

    Row 0 and column 0 never have a top-left neighbor, so they are always
    marked; a larger reference region only masks more of this grid.
    """
    x = img.pixels.astype(np.int16)
    top_left = x[:-1, :-1]
    top = x[:-1, 1:]
    left = x[1:, :-1]
    low = np.minimum(top, left)
    high = np.maximum(top, left)
    prediction = np.where(top_left <= low, high,
                          np.where(top_left >= high, low, top + left - top_left))

    tags = np.full(x.shape, REFERENCE, dtype=np.int8)
    tags[1:, 1:] = 8 - _BIT_LENGTH[x[1:, 1:] ^ prediction]
    return tags


def mask_reference(grid: np.ndarray, ref_rows: int, ref_cols: int) -> LabelMap:
    tags = grid.copy()
    tags[:ref_rows, :] = REFERENCE
    tags[:, :ref_cols] = REFERENCE
    return LabelMap(tags=tags, ref_rows=ref_rows, ref_cols=ref_cols)


def build_label_map(img: GrayImage, ref_rows: int = 1, ref_cols: int = 1) -> LabelMap:
    """Label every non-reference pixel against its MED prediction"""
    if ref_rows < 1 or ref_cols < 1:
        raise HvlclError(f"Reference region needs at least one row and column, got r={ref_rows} c={ref_cols}")
    if ref_rows >= img.rows or ref_cols >= img.cols:
        raise HvlclError(
            f"Reference region {ref_rows}x{ref_cols} covers the whole {img.rows}x{img.cols} image"
        )
    return mask_reference(label_grid(img), ref_rows, ref_cols)


def histogram(label_map: LabelMap) -> LabelHistogram:
    counts = np.bincount(label_map.non_reference_tags(), minlength=TAG_COUNT)
    m, n = label_map.rows, label_map.cols
    r, c = label_map.ref_rows, label_map.ref_cols
    return LabelHistogram(
        counts=tuple(int(count) for count in counts),
        ref_count=r * n + c * m - r * c,
    )
