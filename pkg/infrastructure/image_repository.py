from abc import ABC, abstractmethod
from pathlib import Path
from typing import List
import logging
import os
import tempfile

from domain.models import GrayImage
from infrastructure.image_io import read_pgm, write_pgm

logger = logging.getLogger(__name__)


class ImageRepository(ABC):
    """Abstract repository for images and payload files"""

    @abstractmethod
    def load_image(self, path: Path) -> GrayImage:
        pass

    @abstractmethod
    def save_image(self, path: Path, image: GrayImage) -> None:
        pass

    @abstractmethod
    def load_bytes(self, path: Path) -> bytes:
        pass

    @abstractmethod
    def save_bytes(self, path: Path, data: bytes) -> None:
        pass

    @abstractmethod
    def list_images(self, directory: Path) -> List[Path]:
        pass


class FileSystemImageRepository(ImageRepository):
    """File system repository; every write lands atomically or not at all"""

    def load_image(self, path: Path) -> GrayImage:
        return read_pgm(Path(path).read_bytes())

    def save_image(self, path: Path, image: GrayImage) -> None:
        self.save_bytes(path, write_pgm(image))

    def load_bytes(self, path: Path) -> bytes:
        return Path(path).read_bytes()

    def save_bytes(self, path: Path, data: bytes) -> None:
        path = Path(path)
        # Write atomically
        fd, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
            os.replace(temp_name, path)
        except BaseException:
            Path(temp_name).unlink(missing_ok=True)
            raise
        logger.debug(f"Wrote {len(data)} bytes to {path}")

    def list_images(self, directory: Path) -> List[Path]:
        """PGM files directly inside `directory`, sorted by name"""
        return sorted(p for p in Path(directory).iterdir()
                      if p.is_file() and p.suffix.lower() == ".pgm")
