"""
Pydantic models for experiment configuration.
"""

from enum import Enum
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator


class Strategy(str, Enum):
    """Training/evaluation strategies compared by the harness"""

    GM = "GM"
    LM = "LM"
    LM_F = "LM-F"
    FEDAVG = "FEDAVG"
    FEDAMP = "FEDAMP"
    FEDAMP_F = "FEDAMP-F"


class FederationStrategy(str, Enum):
    """Server-side federated algorithms"""

    FEDAVG = "FEDAVG"
    FEDAMP = "FEDAMP"


class TrainingConfig(BaseModel):
    """Local optimizer settings (plain mini-batch gradient descent)"""

    learning_rate: float = Field(default=0.1, gt=0.0, description="Step size")
    epochs: int = Field(default=5, ge=1, description="Epochs per call of train_local")
    batch_size: Union[int, Literal["full"]] = Field(
        default=32, description="Mini-batch size, or 'full' for full-batch steps"
    )
    mode: Literal["stochastic", "deterministic"] = Field(
        default="stochastic",
        description="'deterministic' runs full-batch descent without shuffling",
    )
    rng_seed: int = Field(default=0, ge=0, description="Seed of the shuffling stream")

    @field_validator("batch_size")
    @classmethod
    def _positive_batch(cls, value):
        if isinstance(value, int) and value < 1:
            raise ValueError("batch_size must be >= 1 or 'full'")
        return value


class ModelConfig(BaseModel):
    """MLP architecture (input width and L are taken from the dataset)"""

    hidden_layers: List[int] = Field(
        default_factory=lambda: [256, 16], description="Hidden layer widths"
    )

    @field_validator("hidden_layers")
    @classmethod
    def _positive_widths(cls, value: List[int]) -> List[int]:
        if any(width < 1 for width in value):
            raise ValueError("hidden layer widths must be >= 1")
        return value


class FederationConfig(BaseModel):
    """Server orchestration settings shared by FedAvg and FedAMP"""

    strategy: FederationStrategy = Field(default=FederationStrategy.FEDAMP)
    rounds: int = Field(default=20, ge=1, description="Communication rounds K")
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    sigma: float = Field(default=20.0, gt=0.0, description="Attention kernel scale")
    lambda_tilde: float = Field(
        default=1.0, ge=0.0, description="Weight of the proximal term"
    )
    alpha: float = Field(default=1.0, gt=0.0, description="Prox-center step size")
    kernel: str = Field(
        default="gaussian-saturating", description="Attention kernel identifier"
    )
    workers: int = Field(
        default=1, ge=1, description="Threads for client updates inside a round"
    )


class SyntheticConfig(BaseModel):
    """Generator settings for the synthetic UJIIndoorLoc-format source"""

    n_rooms: int = Field(default=24, ge=1)
    samples_per_room: int = Field(default=30, ge=1)
    n_access_points: int = Field(default=520, ge=1)
    seed: int = Field(default=7)


class DatasetConfig(BaseModel):
    """Where samples come from and how rooms become area labels"""

    source: Literal["ujiindoorloc", "synthetic", "processed"] = Field(
        default="ujiindoorloc"
    )
    path: Optional[str] = Field(
        default=None, description="CSV (ujiindoorloc) or .npz (processed) path"
    )
    building: int = Field(default=1)
    floor: int = Field(default=1)
    cluster_seed: int = Field(default=0, description="Seed of room clustering")
    test_fraction: float = Field(default=0.2, ge=0.0, le=1.0)
    synthetic: SyntheticConfig = Field(default_factory=SyntheticConfig)


class GroupConfig(BaseModel):
    """One group of clients sharing dominant labels"""

    clients: int = Field(ge=1)
    dominant_labels: List[int] = Field(default_factory=list)


class PartitionConfig(BaseModel):
    """Dirichlet label-skew settings"""

    n_groups: int = Field(default=3, ge=1)
    labels_per_group: int = Field(default=3, ge=0)
    beta_high: float = Field(default=80.0, gt=0.0)
    beta_low: float = Field(default=20.0, gt=0.0)
    samples_per_client: Union[int, Literal["proportional"]] = Field(
        default="proportional",
        description="Fixed count per client, or floor(N_train / M)",
    )
    groups: Optional[List[GroupConfig]] = Field(
        default=None, description="Explicit groups; auto layout when absent"
    )

    @model_validator(mode="after")
    def _ordered_betas(self) -> "PartitionConfig":
        if not self.beta_high > self.beta_low:
            raise ValueError("beta_high must be greater than beta_low")
        if isinstance(self.samples_per_client, int) and self.samples_per_client < 1:
            raise ValueError("samples_per_client must be >= 1 or 'proportional'")
        return self


class FusionConfig(BaseModel):
    """Bayesian fusion settings"""

    prior: Literal["uniform", "empirical"] = Field(default="uniform")
    floor: float = Field(default=1e-12, ge=0.0, lt=1.0)


class SweepConfig(BaseModel):
    """One sweep axis and its values"""

    axis: Literal["L", "M", "sigma", "lambda"]
    values: List[float] = Field(min_length=1)


class OutputConfig(BaseModel):
    """What the commands write besides the result tables"""

    histogram_label: int = Field(default=1, ge=0)
    histogram_bins: int = Field(default=20, ge=1)
    round_logs: bool = Field(default=True)


class ExperimentConfig(BaseModel):
    """Complete experiment description"""

    n_labels: int = Field(default=10, ge=1, description="Number of area labels L")
    n_clients: int = Field(default=6, ge=1, description="Number of clients M")
    strategies: List[Strategy] = Field(
        default_factory=lambda: list(Strategy), min_length=1
    )
    monte_carlo_runs: int = Field(default=10, ge=1, description="Runs R")
    master_seed: int = Field(default=0, ge=0)
    workers: Optional[int] = Field(
        default=None,
        ge=1,
        description="Worker processes for Monte-Carlo runs; unset uses FEDLOC_WORKERS",
    )

    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    partition: PartitionConfig = Field(default_factory=PartitionConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    federation: FederationConfig = Field(default_factory=FederationConfig)
    fusion: FusionConfig = Field(default_factory=FusionConfig)
    sweep: Optional[SweepConfig] = Field(default=None)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @field_validator("strategies")
    @classmethod
    def _unique_strategies(cls, value: List[Strategy]) -> List[Strategy]:
        # keep the first occurrence, preserve order
        return list(dict.fromkeys(value))


class CliConfig(BaseModel):
    """Parsed command line"""

    subcommand: Literal[
        "prepare-data", "partition", "train", "evaluate", "sweep", "histograms"
    ]
    config_path: str
    overrides: List[str] = Field(default_factory=list)
    output_dir: Optional[str] = None
    verbosity: int = Field(default=0, ge=0)
