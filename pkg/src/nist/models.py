from pydantic import BaseModel, Field, field_validator

TEST_NAMES = (
    "frequency",
    "block_frequency",
    "cumulative_sums",
    "runs",
    "longest_run",
    "rank",
    "dft",
    "non_overlapping_template",
    "overlapping_template",
    "universal",
    "approximate_entropy",
    "random_excursions",
    "random_excursions_variant",
    "serial",
    "linear_complexity",
)

DISPLAY_NAMES = {
    "frequency": "Frequency",
    "block_frequency": "Block Frequency",
    "cumulative_sums": "Cumulative Sums",
    "runs": "Runs",
    "longest_run": "Longest Run",
    "rank": "Rank",
    "dft": "FFT",
    "non_overlapping_template": "Non-overlapping Template",
    "overlapping_template": "Overlapping Template",
    "universal": "Universal",
    "approximate_entropy": "Approximate Entropy",
    "random_excursions": "Random Excursions",
    "random_excursions_variant": "Random Excursions Variant",
    "serial": "Serial",
    "linear_complexity": "Linear Complexity",
}

UNIFORMITY_THRESHOLD = 1e-4


class BatteryConfig(BaseModel):
    sequence_length_bits: int = Field(500_000, ge=1)
    sequence_count: int = Field(160, ge=1)
    long_sequence_length_bits: int = Field(1_000_000, ge=1)
    long_sequence_count: int = Field(80, ge=1)
    long_tests: list[str] = Field(
        default_factory=lambda: [
            "overlapping_template",
            "linear_complexity",
            "random_excursions",
            "random_excursions_variant",
        ],
        description="Tests that run on the long partition",
    )
    tests: list[str] = Field(default_factory=lambda: list(TEST_NAMES))
    alpha: float = Field(0.01, gt=0.0, lt=1.0)
    block_frequency_block_length: int = Field(128, ge=1)
    template_length: int = Field(9, ge=2, le=16)
    non_overlapping_blocks: int = Field(8, ge=1)
    overlapping_block_length: int = Field(1032, ge=2)
    approximate_entropy_block_length: int = Field(10, ge=1, le=20)
    serial_block_length: int = Field(16, ge=3, le=24)
    linear_complexity_block_length: int = Field(500, ge=2)
    random_excursions_min_cycles: int = Field(500, ge=0)

    @field_validator("tests", "long_tests")
    @classmethod
    def _known_tests(cls, names: list[str]) -> list[str]:
        unknown = sorted(set(names) - set(TEST_NAMES))
        if unknown:
            raise ValueError(f"unknown NIST tests: {', '.join(unknown)}")
        return names

    def sequence_layout(self, test_name: str) -> tuple[int, int]:
        """(sequence length, sequence count) of the partition a test runs on."""
        if test_name in self.long_tests:
            return self.long_sequence_length_bits, self.long_sequence_count
        return self.sequence_length_bits, self.sequence_count


class SubStatistic(BaseModel):
    name: str
    p_values: list[float] = Field(default_factory=list)
    sequence_count: int = 0
    proportion_passing: int = 0
    threshold: int = 0
    uniformity_p: float = 0.0
    passed: bool = False

    @property
    def proportion(self) -> float:
        return self.proportion_passing / self.sequence_count if self.sequence_count else 0.0


class TestOutcome(BaseModel):
    __test__ = False

    test_name: str
    display_name: str
    sequence_length_bits: int
    sequence_count: int = 0
    sub_statistics: list[SubStatistic] = Field(default_factory=list)
    representative: str | None = None
    proportion_passing: int = 0
    threshold: int = 0
    uniformity_p: float = 0.0
    min_uniformity_p: float = 0.0
    worst_proportion: float = 0.0
    skipped_sequences: int = 0
    skipped: bool = False
    skip_reason: str | None = None
    passed: bool = False

    @property
    def p_values(self) -> list[float]:
        for sub in self.sub_statistics:
            if sub.name == self.representative:
                return sub.p_values
        return []


class BatteryReport(BaseModel):
    kind: str = "nist"
    tool_version: str = ""
    config_hash: str = ""
    alpha: float
    input_bits: int
    outcomes: list[TestOutcome] = Field(default_factory=list)
    passed: bool = False

    def outcome(self, test_name: str) -> TestOutcome | None:
        return next((outcome for outcome in self.outcomes if outcome.test_name == test_name), None)
