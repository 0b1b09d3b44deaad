import numpy as np
import pytest

from imagegen import constant_image, rough_image, smooth_image
from domain.errors import HvlclError
from domain.models import REFERENCE, GrayImage
from domain.prediction import build_label_map, histogram, label_grid, label_of, med_predict


def _oracle_tag(x: int, px: int) -> int:
    a, b = format(x, "08b"), format(px, "08b")
    t = 0
    while t < 8 and a[t] == b[t]:
        t += 1
    return t


def _oracle_label_map(img: GrayImage, r: int, c: int) -> np.ndarray:
    x = img.pixels.astype(int).tolist()
    tags = np.full(img.pixels.shape, REFERENCE, dtype=np.int8)
    for i in range(r, img.rows):
        for j in range(c, img.cols):
            a, b, cc = x[i - 1][j - 1], x[i - 1][j], x[i][j - 1]
            if a <= min(b, cc):
                px = max(b, cc)
            elif a >= max(b, cc):
                px = min(b, cc)
            else:
                px = b + cc - a
            tags[i, j] = _oracle_tag(x[i][j], px)
    return tags


@pytest.mark.parametrize("top_left, top, left, expected", [
    (80, 100, 90, 100),
    (120, 100, 90, 90),
    (95, 100, 90, 95),
])
def test_med_predict(top_left, top, left, expected):
    assert med_predict(top_left, top, left) == expected


def test_med_predict_stays_in_range(rng):
    for a, b, c in rng.integers(0, 256, size=(10000, 3)).tolist():
        assert 0 <= med_predict(a, b, c) <= 255


@pytest.mark.parametrize("x, px, expected", [(156, 150, 4), (42, 42, 8), (130, 1, 0)])
def test_label_of(x, px, expected):
    assert label_of(x, px) == expected


def test_label_of_is_maximal_and_symmetric():
    for x in range(256):
        for px in range(0, 256, 7):
            t = label_of(x, px)
            assert t == label_of(px, x) == _oracle_tag(x, px)
            assert x >> (8 - t) == px >> (8 - t)
            if t < 8:
                assert (x >> (7 - t)) & 1 != (px >> (7 - t)) & 1


def test_constant_image_is_all_eight():
    label_map = build_label_map(constant_image(16, 16))
    assert (label_map.non_reference_tags() == 8).all()
    assert (label_map.tags[0, :] == REFERENCE).all()
    assert (label_map.tags[:, 0] == REFERENCE).all()


@pytest.mark.parametrize("r, c", [(1, 1), (2, 1), (1, 3), (3, 2)])
def test_matches_scalar_oracle(rng, r, c):
    for img in (rough_image(rng, 8, 8), smooth_image(rng, 12, 9)):
        label_map = build_label_map(img, r, c)
        assert np.array_equal(label_map.tags, _oracle_label_map(img, r, c))


def test_label_grid_ignores_region_size(rng):
    img = smooth_image(rng, 10, 10)
    grid = label_grid(img)
    wide = build_label_map(img, 3, 4)
    assert np.array_equal(wide.tags[3:, 4:], grid[3:, 4:])


def test_histogram_of_constant_image():
    hist = histogram(build_label_map(constant_image(4, 4)))
    assert hist.counts == (0, 0, 0, 0, 0, 0, 0, 0, 9)
    assert hist.ref_count == 7
    assert hist.total == 16


def test_histogram_reference_count(rng):
    img = rough_image(rng, 20, 30)
    hist = histogram(build_label_map(img, 3, 2))
    assert hist.ref_count == 3 * 30 + 2 * 20 - 3 * 2
    assert sum(hist.counts) == 17 * 28


@pytest.mark.parametrize("r, c", [(0, 1), (1, 0), (4, 1), (1, 4)])
def test_region_must_leave_pixels(r, c):
    with pytest.raises(HvlclError):
        build_label_map(constant_image(4, 4), r, c)
