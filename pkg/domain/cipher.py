"""
Keyed byte stream and XOR encryption of images and payload bits.

The generator is a plain xorshift-multiply stream pinned for container
interoperability. It is NOT cryptographically secure.
"""
from typing import Sequence

import numpy as np

from domain.models import GrayImage, KeySpec

_MASK64 = (1 << 64) - 1

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
ZERO_SEED_SUBSTITUTE = 0x9E3779B97F4A7C15
OUTPUT_MULTIPLIER = 0x2545F4914F6CDD1D


def derive_seed(key: KeySpec) -> int:
    """64-bit FNV-1a of the key bytes, never zero"""
    state = FNV_OFFSET_BASIS
    for byte in key.key:
        state = ((state ^ byte) * FNV_PRIME) & _MASK64
    return state or ZERO_SEED_SUBSTITUTE


class KeystreamGenerator:
    """Sequential keystream state; one instance per consumer"""

    def __init__(self, seed: int):
        if not seed & _MASK64:
            raise ValueError("Keystream seed must be nonzero")
        self._state = seed & _MASK64

    def read(self, count: int) -> bytes:
        state = self._state
        out = bytearray(count)
        for k in range(count):
            state ^= state >> 12
            state ^= (state << 25) & _MASK64
            state ^= state >> 27
            out[k] = ((state * OUTPUT_MULTIPLIER) & _MASK64) >> 56
        self._state = state
        return bytes(out)


def keystream_bytes(seed: int, count: int) -> bytes:
    return KeystreamGenerator(seed).read(count)


def keystream_bits(key: KeySpec, count: int) -> np.ndarray:
    """First `count` keystream bits, MSB first within each byte"""
    raw = keystream_bytes(derive_seed(key), (count + 7) // 8)
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:count]


def xor_image(img: GrayImage, key: KeySpec) -> GrayImage:
    """Encrypt (or decrypt) every pixel with the row-major keystream"""
    stream = np.frombuffer(keystream_bytes(derive_seed(key), img.size), dtype=np.uint8)
    return GrayImage(img.pixels ^ stream.reshape(img.pixels.shape))


def xor_bits(bits: Sequence[int], key: KeySpec) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    return bits ^ keystream_bits(key, bits.size)
