from pathlib import Path

import numpy as np
import pytest

from plasmon_qrng.errors import DomainError, FormatError
from plasmon_qrng.timetag import (
    BITS_MAGIC,
    HEADER_SIZE,
    RECORD_DTYPE,
    RECORD_MAGIC,
    BitSequence,
    TimeTagRecord,
    TimeTagWriter,
    bits_from_records,
    decode_bits,
    decode_records,
    encode_bits,
    encode_records,
    raw_rate,
    read_bits_file,
    read_records,
    sniff_magic,
    write_bits,
    write_records,
)


def test_empty_record_stream_is_header_only() -> None:
    data = encode_records([])

    assert len(data) == HEADER_SIZE
    assert data[:8] == RECORD_MAGIC
    assert decode_records(data).size == 0


def test_single_record_layout() -> None:
    data = encode_records([TimeTagRecord(ticks=40, channel=1)])

    assert data[HEADER_SIZE:].hex() == "280000000000000001"
    assert data[8:16] == (1).to_bytes(8, "little")
    decoded = decode_records(data)
    assert decoded["ticks"].tolist() == [40]
    assert decoded["channel"].tolist() == [1]


def test_decode_rejects_bad_magic() -> None:
    data = bytearray(encode_records([TimeTagRecord(40, 1)]))
    data[:8] = b"NOTMAGIC"

    with pytest.raises(FormatError, match="bad magic"):
        decode_records(bytes(data))


def test_decode_rejects_truncated_stream() -> None:
    data = encode_records([TimeTagRecord(40, 1), TimeTagRecord(80, 0)])

    with pytest.raises(FormatError, match="truncated"):
        decode_records(data[:-3])
    with pytest.raises(FormatError, match="truncated"):
        decode_records(data[:10])


def test_decode_rejects_invalid_channel_byte() -> None:
    data = bytearray(encode_records([TimeTagRecord(40, 1)]))
    data[-1] = 2

    with pytest.raises(FormatError, match="channel byte 2"):
        decode_records(bytes(data))


def test_encode_rejects_unordered_records() -> None:
    with pytest.raises(DomainError):
        encode_records([TimeTagRecord(80, 0), TimeTagRecord(40, 1)])


def test_record_file_round_trip(tmp_path: Path) -> None:
    path = tmp_path / "run.qttag"
    write_records(path, [TimeTagRecord(1, 0), TimeTagRecord(2, 1), TimeTagRecord(2, 0)])

    records = read_records(path)

    assert sniff_magic(path) == RECORD_MAGIC
    assert records["channel"].tolist() == [0, 1, 0]


def test_read_records_detects_trailing_garbage(tmp_path: Path) -> None:
    path = tmp_path / "run.qttag"
    path.write_bytes(encode_records([TimeTagRecord(1, 0)]) + b"\x00\x01")

    with pytest.raises(FormatError):
        read_records(path)


def test_streaming_writer_patches_the_header(tmp_path: Path) -> None:
    path = tmp_path / "stream.qttag"
    first = np.array([(1, 0), (5, 1)], dtype=RECORD_DTYPE)
    second = np.array([(9, 1)], dtype=RECORD_DTYPE)

    with TimeTagWriter(path) as writer:
        writer.write(first)
        writer.write(np.empty(0, dtype=RECORD_DTYPE))
        writer.write(second)

    assert writer.count == 3
    assert path.read_bytes() == encode_records(np.concatenate([first, second]))


def test_streaming_writer_rejects_out_of_order_batches(tmp_path: Path) -> None:
    path = tmp_path / "stream.qttag"

    with pytest.raises(DomainError):
        with TimeTagWriter(path) as writer:
            writer.write(np.array([(10, 0)], dtype=RECORD_DTYPE))
            writer.write(np.array([(5, 0)], dtype=RECORD_DTYPE))

    assert not path.exists()


def test_bits_follow_channel_order() -> None:
    records = [TimeTagRecord(t, c) for t, c in [(0, 0), (1, 1), (2, 1), (3, 0)]]

    assert bits_from_records(records).to_string() == "0110"
    assert len(bits_from_records([])) == 0


def test_raw_rate_bookkeeping() -> None:
    assert raw_rate(82_604_923, 34.0) == pytest.approx(2.4295e6, rel=1e-4)
    assert f"{raw_rate(82_604_923, 34.0) / 1e6:.3g}" == "2.43"
    assert raw_rate(0, 5.0) == 0.0

    with pytest.raises(DomainError):
        raw_rate(10, 0.0)


def test_bit_file_layout() -> None:
    bits = BitSequence.from_string("1011 0")

    data = encode_bits(bits)

    assert data[:8] == BITS_MAGIC
    assert int.from_bytes(data[8:16], "little") == 5
    assert data[16:] == bytes([0b10110000])
    assert decode_bits(data) == bits


def test_bit_file_rejects_nonzero_pad_bits() -> None:
    data = bytearray(encode_bits(BitSequence.from_string("10110")))
    data[-1] |= 0b00000001

    with pytest.raises(FormatError, match="pad bits"):
        decode_bits(bytes(data))


def test_bit_file_rejects_short_payload() -> None:
    data = encode_bits(BitSequence.from_string("1" * 20))

    with pytest.raises(FormatError):
        decode_bits(data[:-1])


def test_raw_packed_file_needs_explicit_length(tmp_path: Path) -> None:
    path = tmp_path / "raw.bin"
    path.write_bytes(bytes([0b10100000, 0xFF]))

    assert read_bits_file(path, raw_length=3).to_string() == "101"
    assert read_bits_file(path, raw_length=16).count_ones() == 10
    with pytest.raises(FormatError):
        read_bits_file(path, raw_length=17)
    with pytest.raises(FormatError):
        read_bits_file(path)


def test_bit_file_round_trip_on_disk(tmp_path: Path) -> None:
    path = tmp_path / "seq.bits"
    bits = BitSequence.from_array(np.arange(37) % 3 == 0)

    write_bits(path, bits)

    assert read_bits_file(path) == bits


def test_bit_sequence_validates_payload_size() -> None:
    with pytest.raises(ValueError):
        BitSequence(length=9, payload=b"\x00")
