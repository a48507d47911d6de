"""Time-tag and bit-sequence file formats, bit assignment, rate accounting."""

from .bits import bits_from_records, raw_rate
from .codec import (
    BITS_MAGIC,
    HEADER_SIZE,
    RECORD_MAGIC,
    TimeTagWriter,
    decode_bits,
    decode_records,
    encode_bits,
    encode_records,
    read_bits,
    read_bits_file,
    read_records,
    sniff_magic,
    write_bits,
    write_records,
)
from .models import RECORD_DTYPE, RECORD_SIZE, BitSequence, TimeTagRecord, as_record_array

__all__ = [
    "BITS_MAGIC",
    "HEADER_SIZE",
    "RECORD_DTYPE",
    "RECORD_MAGIC",
    "RECORD_SIZE",
    "BitSequence",
    "TimeTagRecord",
    "TimeTagWriter",
    "as_record_array",
    "bits_from_records",
    "decode_bits",
    "decode_records",
    "encode_bits",
    "encode_records",
    "raw_rate",
    "read_bits",
    "read_bits_file",
    "read_records",
    "sniff_magic",
    "write_bits",
    "write_records",
]
