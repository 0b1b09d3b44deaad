"""
Corpus analysis: capacity and ER per image plus a best/worst/average summary
"""
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple
import csv
import io
import logging
import math
import zlib

import numpy as np

from config.settings import settings
from domain.codec import (
    hider_embed, layout_report, owner_encode, plan_layout, receiver_extract, receiver_recover,
)
from domain.errors import BootstrapCapacityError, HvlclError
from domain.metrics import psnr, ssim, SSIM_WINDOW
from domain.models import PAYLOAD_LENGTH_BITS, TAG_COUNT, GrayImage, KeySpec
from infrastructure.base_patterns import SingletonMeta
from infrastructure.image_repository import FileSystemImageRepository, ImageRepository
from models.reports import AnalysisRow, AnalysisSummary

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    ["filename", "rows", "cols", "status", "ref_rows", "ref_cols", "ref_count"]
    + [f"tag_{tag}" for tag in range(TAG_COUNT)]
    + ["capacity_bits", "code_bits", "net_payload_bits", "er", "psnr", "ssim", "payload_match",
       "best_er", "worst_er"]
)
SUMMARY_NAME = "SUMMARY"


def _cell(value):
    return "" if value is None else value


def _format_float(value: Optional[float], decimals: int) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "+inf"
    return f"{value:.{decimals}f}"


class AnalysisService(metaclass=SingletonMeta):
    """Singleton service that analyzes a directory of PGM images"""

    def __init__(self):
        self._repository: ImageRepository = FileSystemImageRepository()

    def analyze_image(self, name: str, image: GrayImage, verify: bool = False) -> AnalysisRow:
        """Plan one image; with verify, also run and score the whole pipeline"""
        try:
            layout = plan_layout(image, settings.initial_ref_rows, settings.initial_ref_cols,
                                 settings.max_reference_lines)
        except BootstrapCapacityError as e:
            logger.info(f"{name}: {e}")
            return AnalysisRow(filename=name, rows=image.rows, cols=image.cols, status=str(e))

        report = layout_report(layout)
        row = AnalysisRow(
            filename=name,
            rows=image.rows,
            cols=image.cols,
            ref_rows=layout.ref_rows,
            ref_cols=layout.ref_cols,
            reference_count=report.reference_count,
            counts=[tag.count for tag in report.tags],
            total_capacity_bits=report.total_capacity_bits,
            code_bits=report.code_bits,
            net_payload_bits=report.net_payload_bits,
            embedding_rate=report.embedding_rate,
        )
        if verify:
            try:
                self._verify(row, image, layout)
            except HvlclError as e:
                logger.warning(f"{name}: verification aborted: {e}")
                row.status = f"verification failed: {e}"
        return row

    def _verify(self, row: AnalysisRow, image: GrayImage, layout):
        # Keys and payload derive from the file name so reruns are identical
        rng = np.random.default_rng(zlib.crc32(row.filename.encode("utf-8")))
        ke = KeySpec(rng.bytes(16))
        kw = KeySpec(rng.bytes(16))
        marked = owner_encode(image, ke, layout=layout).image
        capacity = max(layout.net_payload_bits - PAYLOAD_LENGTH_BITS, 0)
        payload = rng.integers(0, 2, size=int(capacity * settings.verify_payload_fill), dtype=np.uint8)
        loaded, _ = hider_embed(marked, payload, kw)
        recovered = receiver_recover(loaded, ke)
        row.payload_match = bool(np.array_equal(receiver_extract(loaded, kw), payload))
        row.psnr = psnr(image, recovered)
        if min(image.rows, image.cols) >= SSIM_WINDOW:
            row.ssim = ssim(image, recovered)
        if not row.payload_match or not math.isinf(row.psnr):
            row.status = "verification failed"
            logger.error(f"{row.filename}: round trip failed")

    def _analyze_path(self, path: Path, verify: bool) -> Optional[AnalysisRow]:
        try:
            image = self._repository.load_image(path)
        except (OSError, HvlclError) as e:
            logger.warning(f"Skipping {path.name}: {e}")
            return None
        return self.analyze_image(path.name, image, verify)

    def analyze_directory(self, directory: Path, verify: bool = False,
                          workers: Optional[int] = None) -> Tuple[List[AnalysisRow], AnalysisSummary]:
        paths = self._repository.list_images(directory)
        with ThreadPoolExecutor(max_workers=workers or settings.analyze_workers) as pool:
            results = list(pool.map(lambda p: self._analyze_path(p, verify), paths))
        rows = sorted((row for row in results if row is not None), key=lambda row: row.filename)
        if not rows:
            raise HvlclError(f"No readable PGM images in {directory}")
        summary = self.summarize(rows)
        logger.info(f"Analyzed {summary.images} images ({summary.failures} not ok)")
        return rows, summary

    @staticmethod
    def summarize(rows: List[AnalysisRow]) -> AnalysisSummary:
        """Best/worst/average ER; images that cannot bootstrap count as 0 bpp"""
        best = max(rows, key=lambda row: row.embedding_rate)
        worst = min(rows, key=lambda row: row.embedding_rate)
        return AnalysisSummary(
            images=len(rows),
            failures=sum(1 for row in rows if row.status != "ok"),
            best_er=best.embedding_rate,
            worst_er=worst.embedding_rate,
            average_er=sum(row.embedding_rate for row in rows) / len(rows),
            best_file=best.filename,
            worst_file=worst.filename,
        )

    def render_csv(self, rows: List[AnalysisRow], summary: AnalysisSummary) -> str:
        decimals = settings.report_decimals
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            counts = row.counts or [""] * TAG_COUNT
            writer.writerow([_cell(value) for value in
                [row.filename, row.rows, row.cols, row.status, row.ref_rows, row.ref_cols, row.reference_count]
                + counts
                + [row.total_capacity_bits, row.code_bits, row.net_payload_bits,
                   _format_float(row.embedding_rate, decimals),
                   _format_float(row.psnr, 2), _format_float(row.ssim, decimals),
                   "" if row.payload_match is None else str(row.payload_match).lower(), "", ""]
            ])
        writer.writerow(
            [SUMMARY_NAME, "", "", f"{summary.images} images, {summary.failures} failed"]
            + [""] * (3 + TAG_COUNT + 3)
            + [_format_float(summary.average_er, decimals), "", "", "",
               _format_float(summary.best_er, decimals), _format_float(summary.worst_er, decimals)]
        )
        return buffer.getvalue()

    def write_report(self, path: Path, rows: List[AnalysisRow], summary: AnalysisSummary):
        self._repository.save_bytes(path, self.render_csv(rows, summary).encode("utf-8"))

    def set_repository(self, repository: ImageRepository):
        """Set a different repository implementation (useful for testing)"""
        self._repository = repository


# Singleton instance
analysis_service = AnalysisService()
