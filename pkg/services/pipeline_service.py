"""
Pipeline service: the content-owner, data-hider and receiver roles over files
"""
from pathlib import Path
from typing import Optional
import logging

from config.settings import settings
from domain.bitstream import bits_to_bytes, bytes_to_bits
from domain.cipher import xor_image
from domain.codec import hider_embed, owner_encode, receiver_extract, receiver_recover
from domain.metrics import quality_report
from domain.models import KeySpec
from infrastructure.base_patterns import SingletonMeta
from infrastructure.image_repository import FileSystemImageRepository, ImageRepository
from models.reports import CapacityReport, EmbedReport, QualityReport

logger = logging.getLogger(__name__)


class PipelineService(metaclass=SingletonMeta):
    """Singleton service running each role against the image repository"""

    def __init__(self):
        self._repository: ImageRepository = FileSystemImageRepository()
        logger.debug("PipelineService initialized with FileSystemImageRepository")

    def owner_encrypt(self, input_path: Path, output_path: Path, key: KeySpec,
                      report_path: Optional[Path] = None,
                      encrypted_path: Optional[Path] = None) -> CapacityReport:
        """Encrypt an image and embed its label map"""
        image = self._repository.load_image(input_path)
        output = owner_encode(
            image, key,
            ref_rows=settings.initial_ref_rows,
            ref_cols=settings.initial_ref_cols,
            max_lines=settings.max_reference_lines,
        )
        self._repository.save_image(output_path, output.image)
        if encrypted_path:
            self._repository.save_image(encrypted_path, xor_image(image, key))
        if report_path:
            table = output.capacity_report.to_table(settings.report_decimals)
            self._repository.save_bytes(report_path, (table + "\n").encode("utf-8"))
        logger.info(f"Wrote marked encrypted image {output_path}")
        return output.capacity_report

    def hide(self, input_path: Path, output_path: Path, key: KeySpec, payload_path: Path) -> EmbedReport:
        """Embed a payload file into a marked encrypted image"""
        image = self._repository.load_image(input_path)
        payload = bytes_to_bits(self._repository.load_bytes(payload_path))
        marked, report = hider_embed(image, payload, key)
        self._repository.save_image(output_path, marked)
        logger.info(f"Wrote image with {report.payload_bits} payload bits to {output_path}")
        return report

    def extract(self, input_path: Path, output_path: Path, key: KeySpec) -> int:
        """Write the extracted payload; returns its true bit length"""
        image = self._repository.load_image(input_path)
        bits = receiver_extract(image, key)
        self._repository.save_bytes(output_path, bits_to_bytes(bits))
        return int(bits.size)

    def recover(self, input_path: Path, output_path: Path, key: KeySpec,
                original_path: Optional[Path] = None) -> Optional[QualityReport]:
        """Recover the original image, optionally scoring it against a reference"""
        image = self._repository.load_image(input_path)
        recovered = receiver_recover(image, key)
        self._repository.save_image(output_path, recovered)
        logger.info(f"Wrote recovered image {output_path}")
        if original_path is None:
            return None
        return quality_report(self._repository.load_image(original_path), recovered)

    def set_repository(self, repository: ImageRepository):
        """Set a different repository implementation (useful for testing)"""
        self._repository = repository
        logger.info(f"Repository changed to: {type(repository).__name__}")


# Singleton instance
pipeline_service = PipelineService()
