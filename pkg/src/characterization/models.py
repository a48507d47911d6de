from pydantic import BaseModel, Field


class AutocorrelationResult(BaseModel):
    coefficients: list[float] = Field(default_factory=list, description="Index i holds lag i + 1")

    @property
    def max_abs(self) -> float:
        return max((abs(value) for value in self.coefficients), default=0.0)

    def lag(self, k: int) -> float:
        return self.coefficients[k - 1]


class BlockHistogram(BaseModel):
    block_bits: int
    counts: list[int]
    mean: float

    @property
    def block_count(self) -> int:
        return sum(self.counts)


class SlopeFit(BaseModel):
    slope: float | None = None
    stderr: float | None = None
    points: int = 0


class RunLengthResult(BaseModel):
    zero_runs: list[int] = Field(default_factory=list, description="Index i holds the count of runs of length i + 1")
    one_runs: list[int] = Field(default_factory=list, description="Index i holds the count of runs of length i + 1")
    fitted_slope_zeros: SlopeFit = Field(default_factory=SlopeFit)
    fitted_slope_ones: SlopeFit = Field(default_factory=SlopeFit)

    @property
    def total_bits(self) -> int:
        return sum((index + 1) * count for runs in (self.zero_runs, self.one_runs) for index, count in enumerate(runs))


class PairFrequencies(BaseModel):
    p00: float
    p01: float
    p10: float
    p11: float
    pair_count: int

    @property
    def alternation_excess(self) -> float:
        return (self.p01 + self.p10) - (self.p00 + self.p11)


class CharacterizationSummary(BaseModel):
    """Headline figures of every characterization measure."""

    label: str = "sequence"
    bit_count: int
    fraction_zeros: float
    fraction_ones: float
    mean: float
    entropy: float
    pi_estimate: float
    run_slope_zeros: SlopeFit
    run_slope_ones: SlopeFit
    max_abs_autocorrelation: float
    pairs: PairFrequencies


class CharacterizationResult(BaseModel):
    kind: str = "characterization"
    tool_version: str = ""
    config_hash: str = ""
    summary: CharacterizationSummary
    autocorrelation: AutocorrelationResult
    histogram: BlockHistogram
    runs: RunLengthResult
    reference: CharacterizationSummary | None = None
