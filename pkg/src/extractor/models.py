from pydantic import BaseModel, Field


class ExtractorConfig(BaseModel):
    recursion_depth_limit: int = Field(16, ge=1)
    shuffle_seed: int | None = Field(
        None,
        ge=0,
        lt=2**64,
        description="64-bit shuffle seed; derived from the master seed when unset",
    )
    chunk_size_bits: int = Field(2_400_000, ge=2)
    shuffle: bool = True


class ChunkReport(BaseModel):
    index: int
    input_bits: int
    output_bits: int
    shuffle_seed: int | None = None


class ExtractionReport(BaseModel):
    kind: str = "extraction"
    tool_version: str = ""
    config_hash: str = ""
    shuffle_algorithm: str
    shuffle_seed: int | None
    recursion_depth_limit: int
    chunk_size_bits: int
    chunks: list[ChunkReport] = Field(default_factory=list)
    input_bits: int = 0
    output_bits: int = 0
    mean_output_bits: float = 0.0
    output_bits_stderr: float = 0.0

    @property
    def yield_ratio(self) -> float:
        return self.output_bits / self.input_bits if self.input_bits else 0.0
