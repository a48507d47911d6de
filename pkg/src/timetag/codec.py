"""Binary formats.

``.qttag``: 8-byte magic ``QTTAG001``, 8-byte little-endian record count, then
9-byte records (little-endian uint64 ticks, uint8 channel).

Bit files: 8-byte magic ``QBITS001``, 8-byte little-endian bit length, then the
packed payload (MSB-first, zero pad bits).
"""

import logging
import struct
from pathlib import Path
from types import TracebackType

import numpy as np

from ..errors import DomainError, FormatError
from ..storage import atomic_writer, write_bytes_atomic
from .models import RECORD_DTYPE, RECORD_SIZE, BitSequence, TimeTagRecord, as_record_array

logger = logging.getLogger(__name__)

RECORD_MAGIC = b"QTTAG001"
BITS_MAGIC = b"QBITS001"
HEADER_SIZE = 16
_HEADER = struct.Struct("<8sQ")


def encode_records(records: np.ndarray | list[TimeTagRecord]) -> bytes:
    array = as_record_array(records)
    _check_records(array)
    return _HEADER.pack(RECORD_MAGIC, array.size) + array.tobytes()


def decode_records(data: bytes) -> np.ndarray:
    count = _read_header(data, RECORD_MAGIC)
    body = memoryview(data)[HEADER_SIZE:]
    if len(body) % RECORD_SIZE:
        raise FormatError(f"record stream is truncated: {len(body)} bytes is not a multiple of {RECORD_SIZE}")
    if len(body) // RECORD_SIZE != count:
        raise FormatError(f"header announces {count} records but stream holds {len(body) // RECORD_SIZE}")
    records = np.frombuffer(body, dtype=RECORD_DTYPE).copy()
    _check_channels(records)
    return records


def write_records(path: Path, records: np.ndarray | list[TimeTagRecord]) -> None:
    write_bytes_atomic(path, encode_records(records))


def read_records(path: Path) -> np.ndarray:
    path = Path(path)
    with path.open("rb") as handle:
        count = _read_header(handle.read(HEADER_SIZE), RECORD_MAGIC)
        records = np.fromfile(handle, dtype=RECORD_DTYPE)
    if records.size != count:
        raise FormatError(f"{path}: header announces {count} records but file holds {records.size}")
    if path.stat().st_size != HEADER_SIZE + count * RECORD_SIZE:
        raise FormatError(f"{path}: record stream is truncated")
    _check_channels(records)
    return records


class TimeTagWriter:
    """Streams record batches into a .qttag file; the file appears atomically on close."""

    def __init__(self, path: Path) -> None:
        self.path = Path(path)
        self.count = 0
        self._last_ticks: int | None = None
        self._context = atomic_writer(self.path)
        self._handle = None

    def __enter__(self) -> "TimeTagWriter":
        self._handle = self._context.__enter__()
        self._handle.write(_HEADER.pack(RECORD_MAGIC, 0))
        return self

    def write(self, records: np.ndarray) -> None:
        array = as_record_array(records)
        if array.size == 0:
            return
        _check_records(array)
        if self._last_ticks is not None and int(array["ticks"][0]) < self._last_ticks:
            raise DomainError("record batches must be written in time order")
        self._handle.write(array.tobytes())
        self._last_ticks = int(array["ticks"][-1])
        self.count += int(array.size)

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        traceback: TracebackType | None,
    ) -> bool | None:
        if exc_type is None:
            self._handle.seek(0)
            self._handle.write(_HEADER.pack(RECORD_MAGIC, self.count))
            logger.debug("Wrote %d records to %s", self.count, self.path)
        return self._context.__exit__(exc_type, exc, traceback)


def encode_bits(bits: BitSequence) -> bytes:
    return _HEADER.pack(BITS_MAGIC, bits.length) + bits.payload


def decode_bits(data: bytes) -> BitSequence:
    length = _read_header(data, BITS_MAGIC)
    payload = bytes(memoryview(data)[HEADER_SIZE:])
    expected = (length + 7) // 8
    if len(payload) != expected:
        raise FormatError(f"bit payload holds {len(payload)} bytes, expected {expected} for {length} bits")
    if length % 8 and payload[-1] & (0xFF >> (length % 8)):
        raise FormatError("trailing pad bits must be zero")
    return BitSequence(length=length, payload=payload)


def write_bits(path: Path, bits: BitSequence) -> None:
    write_bytes_atomic(path, encode_bits(bits))


def read_bits(path: Path) -> BitSequence:
    return decode_bits(Path(path).read_bytes())


def read_bits_file(path: Path, raw_length: int | None = None) -> BitSequence:
    """Read a QBITS001 file, or a raw packed file when ``raw_length`` is given."""
    data = Path(path).read_bytes()
    if raw_length is None:
        return decode_bits(data)
    if raw_length < 0 or raw_length > len(data) * 8:
        raise FormatError(f"raw length {raw_length} does not fit a {len(data)}-byte file")
    array = np.unpackbits(np.frombuffer(data, dtype=np.uint8), count=raw_length)
    return BitSequence.from_array(array)


def sniff_magic(path: Path) -> bytes:
    with Path(path).open("rb") as handle:
        return handle.read(8)


def _read_header(data: bytes, magic: bytes) -> int:
    if len(data) < HEADER_SIZE:
        raise FormatError(f"stream is truncated: {len(data)} bytes is shorter than the {HEADER_SIZE}-byte header")
    found, count = _HEADER.unpack_from(data)
    if found != magic:
        raise FormatError(f"bad magic {found!r}, expected {magic!r}")
    return count


def _check_records(array: np.ndarray) -> None:
    _check_channels(array)
    if array.size > 1 and np.any(array["ticks"][1:] < array["ticks"][:-1]):
        raise DomainError("records must be time-ordered")


def _check_channels(array: np.ndarray) -> None:
    if array.size and array["channel"].max() > 1:
        bad = int(array["channel"][array["channel"] > 1][0])
        raise FormatError(f"channel byte {bad} is not 0 or 1")
