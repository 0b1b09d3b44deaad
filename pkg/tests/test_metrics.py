import math

import numpy as np
import pytest

from imagegen import constant_image, gradient_image, smooth_image
from domain.errors import DimensionMismatchError, ImageFormatError
from domain.metrics import embedding_rate, psnr, quality_report, ssim
from domain.models import GrayImage


def test_psnr_identical_is_infinite():
    img = gradient_image(16, 16)
    assert math.isinf(psnr(img, img))


def test_psnr_extremes():
    assert psnr(constant_image(8, 8, 0), constant_image(8, 8, 255)) == 0.0


def test_psnr_single_pixel_change():
    a = GrayImage.from_rows([[0, 0], [0, 0]])
    b = GrayImage.from_rows([[16, 0], [0, 0]])
    assert psnr(a, b) == pytest.approx(30.07, abs=0.01)
    assert psnr(a, b) == psnr(b, a)


def test_ssim_identical_is_one(rng):
    for _ in range(20):
        img = smooth_image(rng, 24, 24)
        assert ssim(img, img) == pytest.approx(1.0)
    assert ssim(constant_image(16, 16, 128), constant_image(16, 16, 128)) == pytest.approx(1.0)


def test_ssim_of_inverted_image():
    img = gradient_image(32, 32)
    inverted = GrayImage(255 - img.pixels.astype(np.int64))
    assert ssim(img, inverted) < 1.0
    assert ssim(img, inverted) == pytest.approx(ssim(inverted, img))


def test_ssim_needs_a_full_window():
    img = constant_image(10, 10)
    with pytest.raises(ImageFormatError):
        ssim(img, img)


def test_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        psnr(constant_image(4, 4), constant_image(4, 5))
    with pytest.raises(DimensionMismatchError):
        ssim(constant_image(16, 16), constant_image(16, 17))


def test_embedding_rate():
    assert round(embedding_rate(677212, 512, 512), 3) == 2.583
    assert embedding_rate(0, 512, 512) == 0.0
    assert embedding_rate(262144, 512, 512) == 1.0


def test_quality_report_line():
    img = gradient_image(16, 16)
    assert quality_report(img, img).to_line() == "PSNR / SSIM: +inf / 1.000"
    small = constant_image(4, 4)
    report = quality_report(small, small, payload_bits=8)
    assert report.ssim is None
    assert report.er == 0.5
    assert report.to_line() == "PSNR = +inf dB"
