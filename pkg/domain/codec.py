"""
Owner encode, hider embed, receiver extract and receiver recover.

Storage stream layout of a marked image: the 8 bits of every reference
pixel (raster order over the reference region) followed by the top
capacity_of(t) bits of every non-reference pixel (raster order). The owner
writes header ++ aux into its prefix; the payload segment follows directly.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from domain.bitstream import (
    BitReader, bits_to_int, int_to_bits, pack_reference_values, read_header,
    reference_cells, unpack_reference_values, write_header,
)
from domain.cipher import xor_bits, xor_image
from domain.errors import (
    BitstreamUnderflow, BootstrapCapacityError, BootstrapStarvation,
    CapacityExceededError, ExtractionError, HeaderError, HvlclError,
)
from domain.hvlcl_code import assign_codes, decode_next_label, encode_labels
from domain.metrics import embedding_rate
from domain.models import (
    CODEWORDS, HEADER_BITS, LEGACY_HEADER_BITS, PAYLOAD_LENGTH_BITS, TAG_COUNT,
    AuxHeader, CodeTable, DecodedStream, GrayImage, KeySpec, LabelHistogram,
    LabelMap, OwnerOutput, StorageLayout,
)
from domain.prediction import histogram, label_grid, mask_reference, med_predict
from models.reports import CapacityReport, EmbedReport, TagRow

logger = logging.getLogger(__name__)

# CAPACITY[t] = bits a pixel with tag t carries
CAPACITY = np.array([min(tag + 1, 8) for tag in range(TAG_COUNT)], dtype=np.int64)


def capacity_of(t: int) -> int:
    return min(t + 1, 8)


def substitute_msbs(xe: int, t: int, bits: Sequence[int]) -> int:
    """Replace the top capacity_of(t) bits of an encrypted pixel"""
    bits = [int(bit) for bit in bits]
    if len(bits) != capacity_of(t):
        raise HvlclError(f"Tag {t} carries {capacity_of(t)} bits, got {len(bits)}")
    if t >= 7:
        return bits_to_int(bits)
    low = 7 - t
    return xe % (1 << low) + sum(bit << (7 - s) for s, bit in enumerate(bits))


def recover_bit(px: int, t: int) -> int:
    """Negation of bit t+1 (from the MSB) of the prediction"""
    return 1 - ((px >> (7 - t)) & 1)


# --- layout ----------------------------------------------------------------

def _layout_for(label_map: LabelMap, attempts: int = 1) -> StorageLayout:
    hist = histogram(label_map)
    table = assign_codes(hist)
    counts = np.array(hist.counts, dtype=np.int64)
    return StorageLayout(
        label_map=label_map,
        histogram=hist,
        table=table,
        code_bits=int(counts @ table.code_lengths()),
        capacity_bits=int(counts @ CAPACITY),
        attempts=attempts,
    )


def bootstraps(layout: StorageLayout) -> bool:
    """Replay the decoder's bit budget: every codeword must be fully harvested
    before it is read, and the storage stream must hold the aux stream plus
    the payload length prefix."""
    if layout.net_payload_bits < PAYLOAD_LENGTH_BITS or layout.reference_bits < HEADER_BITS:
        return False
    tags = layout.label_map.non_reference_tags()
    needed = HEADER_BITS + np.cumsum(layout.table.code_lengths()[tags])
    harvested = layout.reference_bits + np.cumsum(CAPACITY[tags]) - CAPACITY[tags]
    return bool(np.all(needed <= harvested))


def _grow(ref_rows: int, ref_cols: int, rows: int, cols: int, max_lines: int,
          rows_first: bool) -> Optional[Tuple[int, int]]:
    can_rows = ref_rows + 1 < rows and ref_rows < max_lines
    can_cols = ref_cols + 1 < cols and ref_cols < max_lines
    if can_rows and (rows_first or not can_cols):
        return ref_rows + 1, ref_cols
    if can_cols:
        return ref_rows, ref_cols + 1
    return None


def plan_layout(img: GrayImage, ref_rows: int = 1, ref_cols: int = 1,
                max_lines: int = 255) -> StorageLayout:
    """Smallest reference region, grown rows then columns alternately, that bootstraps"""
    if not (1 <= ref_rows < img.rows and 1 <= ref_cols < img.cols):
        raise HvlclError(f"Initial reference region {ref_rows}x{ref_cols} does not fit {img.rows}x{img.cols}")
    grid = label_grid(img)
    rows_first = True
    attempts = 1
    while True:
        layout = _layout_for(mask_reference(grid, ref_rows, ref_cols), attempts)
        if bootstraps(layout):
            return layout
        logger.debug(f"Reference region {ref_rows}x{ref_cols} cannot bootstrap, growing")
        grown = _grow(ref_rows, ref_cols, img.rows, img.cols, max_lines, rows_first)
        if grown is None:
            raise BootstrapCapacityError()
        if grown[0] != ref_rows:
            rows_first = False
        elif grown[1] != ref_cols:
            rows_first = True
        ref_rows, ref_cols = grown
        attempts += 1


def capacity_report(hist: LabelHistogram, table: CodeTable, rows: int, cols: int,
                    ref_rows: int = 1, ref_cols: int = 1) -> CapacityReport:
    tag_rows = []
    for tag in range(TAG_COUNT):
        count = hist.counts[tag]
        cap = capacity_of(tag)
        code_length = table.code_length(tag)
        tag_rows.append(TagRow(
            tag=tag,
            count=count,
            codeword=CODEWORDS[table.assignment[tag]],
            capacity_per_pixel=cap,
            code_length=code_length,
            payload_per_pixel=cap - code_length,
            capacity_bits=count * cap,
            code_bits=count * code_length,
        ))
    total = sum(row.capacity_bits for row in tag_rows)
    code_bits = sum(row.code_bits for row in tag_rows)
    net = total - code_bits - HEADER_BITS
    return CapacityReport(
        rows=rows,
        cols=cols,
        ref_rows=ref_rows,
        ref_cols=ref_cols,
        reference_count=hist.ref_count,
        tags=tag_rows,
        total_capacity_bits=total,
        code_bits=code_bits,
        reference_bits=8 * hist.ref_count,
        header_bits=HEADER_BITS,
        legacy_header_bits=LEGACY_HEADER_BITS,
        net_payload_bits=net,
        embedding_rate=embedding_rate(max(net, 0), rows, cols),
    )


def layout_report(layout: StorageLayout) -> CapacityReport:
    label_map = layout.label_map
    return capacity_report(layout.histogram, layout.table, label_map.rows, label_map.cols,
                           layout.ref_rows, layout.ref_cols)


# --- storage stream ----------------------------------------------------------

def _storage_geometry(label_map: LabelMap):
    ii, jj = reference_cells(label_map.rows, label_map.cols, label_map.ref_rows,
                             label_map.ref_cols, raster=True)
    caps = CAPACITY[label_map.non_reference_tags()]
    mask = np.arange(8) < caps[:, None]
    return ii, jj, mask


def harvest_stream(pixels: np.ndarray, label_map: LabelMap) -> np.ndarray:
    """Read the whole storage stream out of a pixel grid"""
    ii, jj, mask = _storage_geometry(label_map)
    r, c = label_map.ref_rows, label_map.ref_cols
    body = np.unpackbits(pixels[r:, c:].reshape(-1, 1), axis=1)
    return np.concatenate([np.unpackbits(pixels[ii, jj]), body[mask]])


def scatter_stream(pixels: np.ndarray, label_map: LabelMap, stream: np.ndarray) -> np.ndarray:
    """Write a full storage stream back; the array form of substitute_msbs"""
    ii, jj, mask = _storage_geometry(label_map)
    r, c = label_map.ref_rows, label_map.ref_cols
    reference_bits = 8 * len(ii)
    out = pixels.copy()
    out[ii, jj] = np.packbits(stream[:reference_bits])
    body = np.unpackbits(out[r:, c:].reshape(-1, 1), axis=1)
    body[mask] = stream[reference_bits:]
    out[r:, c:] = np.packbits(body, axis=1).reshape(out[r:, c:].shape)
    return out


def write_storage(pixels: np.ndarray, label_map: LabelMap, bits: np.ndarray, start: int) -> np.ndarray:
    """Overwrite stream positions [start, start+len(bits)); every other bit is kept"""
    stream = harvest_stream(pixels, label_map)
    stop = start + len(bits)
    if stop > len(stream):
        raise CapacityExceededError(max(len(stream) - start, 0))
    stream[start:stop] = bits
    return scatter_stream(pixels, label_map, stream)


# --- pipeline ----------------------------------------------------------------

def owner_encode(img: GrayImage, ke: KeySpec, layout: Optional[StorageLayout] = None,
                 ref_rows: int = 1, ref_cols: int = 1, max_lines: int = 255) -> OwnerOutput:
    """Label, encrypt, and embed header + label codes + reference values"""
    if layout is None:
        layout = plan_layout(img, ref_rows, ref_cols, max_lines)
    label_map = layout.label_map
    header = AuxHeader(ref_rows=layout.ref_rows, ref_cols=layout.ref_cols,
                       table=layout.table, aux_len=layout.aux_len)
    prefix = np.concatenate([
        write_header(header),
        encode_labels(label_map.non_reference_tags(), layout.table),
        pack_reference_values(img, layout.ref_rows, layout.ref_cols),
    ])

    encrypted = xor_image(img, ke)
    marked = write_storage(encrypted.pixels, label_map, prefix, 0)
    report = layout_report(layout)
    logger.info(
        f"Owner encode {img.rows}x{img.cols}: region {layout.ref_rows}x{layout.ref_cols}, "
        f"aux {len(prefix)} bits, net payload {report.net_payload_bits} bits"
    )
    return OwnerOutput(image=GrayImage(marked), layout=layout, capacity_report=report)


def _region_fields(pixels: np.ndarray) -> Tuple[int, int]:
    rows, cols = pixels.shape
    ref_rows, ref_cols = int(pixels[0, 0]), int(pixels[0, 1])
    if ref_rows == 0 or ref_cols == 0 or ref_rows >= rows or ref_cols >= cols:
        raise HeaderError(f"Invalid reference region r={ref_rows} c={ref_cols} for a {rows}x{cols} image")
    return ref_rows, ref_cols


def hider_decode_labels(img_e: GrayImage) -> DecodedStream:
    """Stream the label map out of a marked encrypted image.

    Tags are decoded from a FIFO primed with the reference-region bits; each
    pixel's top capacity_of(t) bits are appended once its tag is known.
    """
    pixels = img_e.pixels
    ref_rows, ref_cols = _region_fields(pixels)
    ii, jj = reference_cells(img_e.rows, img_e.cols, ref_rows, ref_cols, raster=True)
    stream = np.unpackbits(pixels[ii, jj]).tolist()
    try:
        header = read_header(stream, img_e.rows, img_e.cols)
    except BitstreamUnderflow as e:
        raise BootstrapStarvation(f"Reference region too small for the header: {e}") from e

    table = header.table
    caps = CAPACITY.tolist()
    body = np.unpackbits(pixels[ref_rows:, ref_cols:].reshape(-1, 1), axis=1).tolist()
    reader = BitReader(stream, start=HEADER_BITS)
    tags = []
    for k, pixel_bits in enumerate(body):
        try:
            tag = decode_next_label(reader, table)
        except BitstreamUnderflow as e:
            raise BootstrapStarvation(f"Label decoder starved at non-reference pixel {k}") from e
        tags.append(tag)
        stream.extend(pixel_bits[:caps[tag]])

    code_bits = reader.position - HEADER_BITS
    reference_bits = 8 * len(ii)
    if header.aux_len != code_bits + reference_bits:
        raise HeaderError(
            f"Aux length {header.aux_len} disagrees with {code_bits} code bits + {reference_bits} reference bits"
        )
    if HEADER_BITS + header.aux_len > len(stream):
        raise HeaderError(f"Aux stream of {header.aux_len} bits exceeds storage of {len(stream)} bits")

    grid = np.full(pixels.shape, -1, dtype=np.int8)
    grid[ref_rows:, ref_cols:] = np.array(tags, dtype=np.int8).reshape(pixels[ref_rows:, ref_cols:].shape)
    label_map = LabelMap(tags=grid, ref_rows=ref_rows, ref_cols=ref_cols)
    return DecodedStream(header=header, label_map=label_map,
                         stream=np.array(stream, dtype=np.uint8), code_bits=code_bits)


def hider_capacity(img_e: GrayImage) -> int:
    """Payload bits the marked image can still take (length prefix excluded)"""
    return max(hider_decode_labels(img_e).free_bits - PAYLOAD_LENGTH_BITS, 0)


def hider_embed(img_e: GrayImage, payload: Sequence[int], kw: KeySpec) -> Tuple[GrayImage, EmbedReport]:
    """Embed a length-prefixed, kw-ciphered payload right after the aux stream"""
    payload = np.asarray(payload, dtype=np.uint8)
    decoded = hider_decode_labels(img_e)
    capacity = decoded.free_bits - PAYLOAD_LENGTH_BITS
    if payload.size > capacity:
        raise CapacityExceededError(max(capacity, 0))

    segment = xor_bits(np.concatenate([int_to_bits(payload.size, PAYLOAD_LENGTH_BITS), payload]), kw)
    stream = decoded.stream.copy()
    stream[decoded.payload_start:decoded.payload_start + segment.size] = segment
    marked = scatter_stream(img_e.pixels, decoded.label_map, stream)

    report = EmbedReport(
        payload_bits=int(payload.size),
        capacity_bits=capacity,
        pixels=img_e.size,
        embedding_rate=embedding_rate(int(payload.size), img_e.rows, img_e.cols),
    )
    logger.info(f"Embedded {report.payload_bits} of {capacity} payload bits")
    return GrayImage(marked), report


def receiver_extract(img_ew: GrayImage, kw: KeySpec) -> np.ndarray:
    """Recover the payload bits with the data hiding key alone"""
    decoded = hider_decode_labels(img_ew)
    reader = BitReader(decoded.stream, start=decoded.payload_start)
    if reader.remaining < PAYLOAD_LENGTH_BITS:
        raise ExtractionError()
    length = bits_to_int(xor_bits(reader.read_bits(PAYLOAD_LENGTH_BITS), kw))
    if length > reader.remaining:
        raise ExtractionError()
    start = decoded.payload_start
    segment = xor_bits(decoded.stream[start:start + PAYLOAD_LENGTH_BITS + length], kw)
    logger.info(f"Extracted {length} payload bits")
    return segment[PAYLOAD_LENGTH_BITS:]


def receiver_recover(img_ew: GrayImage, ke: KeySpec) -> GrayImage:
    """Rebuild the original image with the encryption key alone"""
    decoded = hider_decode_labels(img_ew)
    label_map = decoded.label_map
    r, c = label_map.ref_rows, label_map.ref_cols

    decrypted = xor_image(img_ew, ke).pixels.copy()
    ii, jj = reference_cells(img_ew.rows, img_ew.cols, r, c)
    reference = unpack_reference_values(decoded.reference_bits(), img_ew.rows, img_ew.cols, r, c)
    decrypted[ii, jj] = reference[ii, jj]

    x = decrypted.astype(np.int64).tolist()
    tags = label_map.tags.tolist()
    for i in range(r, img_ew.rows):
        above, row, row_tags = x[i - 1], x[i], tags[i]
        for j in range(c, img_ew.cols):
            t = row_tags[j]
            px = med_predict(above[j - 1], above[j], row[j - 1])
            if t == 8:
                row[j] = px
            else:
                low = 7 - t
                row[j] = (px >> (low + 1) << (low + 1)) + (recover_bit(px, t) << low) + (row[j] & ((1 << low) - 1))
    return GrayImage(np.array(x, dtype=np.int64))
