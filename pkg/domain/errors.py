"""
Exception hierarchy for the codec
"""


class HvlclError(Exception):
    """Base class for every codec failure"""


class ImageFormatError(HvlclError):
    """PGM data is malformed or the image violates its invariants"""


class DimensionMismatchError(HvlclError):
    """Two images that must share a shape do not"""


class KeyFormatError(HvlclError, ValueError):
    """A key string is not valid hex"""


class CodeTableError(HvlclError):
    """Serialized code table is not a bijection on the nine tags"""


class BitstreamUnderflow(HvlclError):
    """A reader was asked for bits past its declared length"""


class HeaderError(HvlclError):
    """Auxiliary header fields are out of range"""


class BootstrapStarvation(HvlclError):
    """The streaming label decoder ran out of bits while a tag was needed"""


class BootstrapCapacityError(HvlclError):
    """No reference region lets the label map bootstrap and fit"""

    def __init__(self, message: str = "insufficient bootstrap capacity"):
        super().__init__(message)


class CapacityExceededError(HvlclError):
    """Payload does not fit in the free capacity of a marked image"""

    def __init__(self, capacity_bits: int):
        self.capacity_bits = capacity_bits
        super().__init__(f"payload exceeds capacity {capacity_bits} bits")


class ExtractionError(HvlclError):
    """Declared payload length cannot be satisfied"""

    def __init__(self, message: str = "extraction failed: wrong key or corrupt image"):
        super().__init__(message)
