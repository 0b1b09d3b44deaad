import math
from typing import Optional

import numpy as np
from skimage.metrics import structural_similarity

from domain.errors import DimensionMismatchError, ImageFormatError
from domain.models import GrayImage
from models.reports import QualityReport

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
PEAK = 255.0


def _check_shapes(a: GrayImage, b: GrayImage):
    if a.pixels.shape != b.pixels.shape:
        raise DimensionMismatchError(f"Image shapes differ: {a.pixels.shape} vs {b.pixels.shape}")


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images"""
    _check_shapes(a, b)
    mse = float(np.mean((a.pixels.astype(np.float64) - b.pixels.astype(np.float64)) ** 2))
    if mse == 0:
        return math.inf
    return 10 * math.log10(PEAK ** 2 / mse)


def ssim(a: GrayImage, b: GrayImage) -> float:
    """Single-scale SSIM, 11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03"""
    _check_shapes(a, b)
    if min(a.rows, a.cols) < SSIM_WINDOW:
        raise ImageFormatError(f"SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW} pixels, got {a.rows}x{a.cols}")
    return float(structural_similarity(
        a.pixels.astype(np.float64),
        b.pixels.astype(np.float64),
        data_range=PEAK,
        gaussian_weights=True,
        sigma=SSIM_SIGMA,
        use_sample_covariance=False,
        K1=0.01,
        K2=0.03,
    ))


def embedding_rate(payload_bits: int, m: int, n: int) -> float:
    """Bits per pixel over all m·n pixels, reference region included"""
    if m * n <= 0:
        raise ValueError("Image must have at least one pixel")
    return payload_bits / (m * n)


def quality_report(original: GrayImage, recovered: GrayImage,
                   payload_bits: Optional[int] = None) -> QualityReport:
    er = None if payload_bits is None else embedding_rate(payload_bits, original.rows, original.cols)
    structural = ssim(original, recovered) if min(original.rows, original.cols) >= SSIM_WINDOW else None
    return QualityReport(psnr=psnr(original, recovered), ssim=structural, er=er)
