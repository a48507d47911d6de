"""Child seed derivation.

A child seed is the first 8 bytes (little-endian) of
SHA-256("<master_seed>:<module>:<stream_index>"). Every random stream in the
pipeline is drawn from ``numpy.random.Generator(PCG64(child_seed))``.
"""

import hashlib

import numpy as np

PRNG_ALGORITHM = "numpy.PCG64"


def derive_seed(master_seed: int, module: str, stream_index: int = 0) -> int:
    digest = hashlib.sha256(f"{int(master_seed)}:{module}:{int(stream_index)}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def child_rng(master_seed: int, module: str, stream_index: int = 0) -> np.random.Generator:
    return make_rng(derive_seed(master_seed, module, stream_index))
