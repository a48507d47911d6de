import numpy as np

from ..errors import DomainError
from .models import BitSequence, TimeTagRecord, as_record_array


def bits_from_records(records: np.ndarray | list[TimeTagRecord]) -> BitSequence:
    """One bit per record: detector 0 gives 0, detector 1 gives 1, in file order."""
    return BitSequence.from_array(as_record_array(records)["channel"])


def raw_rate(record_count: int, duration_s: float) -> float:
    if not duration_s > 0:
        raise DomainError(f"duration must be > 0, got {duration_s}")
    return record_count / duration_s
