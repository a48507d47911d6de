from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

# 8-byte little-endian tick count + 1-byte channel, no padding
RECORD_DTYPE = np.dtype([("ticks", "<u8"), ("channel", "u1")])
RECORD_SIZE = RECORD_DTYPE.itemsize


class TimeTagRecord(NamedTuple):
    ticks: int
    channel: int


def as_record_array(records: np.ndarray | Iterable[TimeTagRecord]) -> np.ndarray:
    if isinstance(records, np.ndarray) and records.dtype == RECORD_DTYPE:
        return records
    rows = [(int(ticks), int(channel)) for ticks, channel in records]
    return np.array(rows, dtype=RECORD_DTYPE)


@dataclass(frozen=True)
class BitSequence:
    """Length-aware packed bits, MSB-first within each byte, zero pad bits."""

    length: int
    payload: bytes

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be >= 0")
        if len(self.payload) != (self.length + 7) // 8:
            raise ValueError(f"payload has {len(self.payload)} bytes, expected {(self.length + 7) // 8}")

    def __len__(self) -> int:
        return self.length

    @classmethod
    def from_array(cls, bits: np.ndarray | Iterable[int]) -> "BitSequence":
        array = np.asarray(bits, dtype=np.uint8)
        if array.ndim != 1:
            array = array.ravel()
        return cls(length=int(array.size), payload=np.packbits(array).tobytes())

    @classmethod
    def from_string(cls, text: str) -> "BitSequence":
        digits = "".join(text.split())
        return cls.from_array(np.frombuffer(digits.encode("ascii"), dtype=np.uint8) - ord("0"))

    def to_array(self) -> np.ndarray:
        """Unpacked bits as a uint8 array of 0/1 values."""
        return np.unpackbits(np.frombuffer(self.payload, dtype=np.uint8), count=self.length)

    def to_string(self) -> str:
        return (self.to_array() + ord("0")).tobytes().decode("ascii")

    def count_ones(self) -> int:
        return int(np.count_nonzero(self.to_array()))


def bit_array(bits: "BitSequence | np.ndarray | Iterable[int]") -> np.ndarray:
    if isinstance(bits, BitSequence):
        return bits.to_array()
    return np.asarray(bits, dtype=np.uint8)
