"""
Per-round diagnostics of a federated run.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple

import pandas as pd

from ..utils.file_utils import write_frame


@dataclass(frozen=True)
class RoundRecord:
    round_index: int
    client_id: int
    local_loss: float
    prox_distance: float
    xi_row: Tuple[float, ...]


@dataclass
class FederationHistory:
    """Round records of one run, appended in (round, client id) order."""

    strategy: str
    records: List[RoundRecord] = field(default_factory=list)

    def append(self, record: RoundRecord) -> None:
        self.records.append(record)

    @property
    def rounds(self) -> int:
        return max((r.round_index for r in self.records), default=0)

    def to_frame(self) -> pd.DataFrame:
        n_clients = max((len(r.xi_row) for r in self.records), default=0)
        rows = []
        for record in self.records:
            row = {
                "strategy": self.strategy,
                "round": record.round_index,
                "client_id": record.client_id,
                "local_loss": record.local_loss,
                "prox_distance": record.prox_distance,
            }
            row.update({f"xi_{j}": value for j, value in enumerate(record.xi_row)})
            rows.append(row)
        columns = ["strategy", "round", "client_id", "local_loss", "prox_distance"] + [
            f"xi_{j}" for j in range(n_clients)
        ]
        return pd.DataFrame(rows, columns=columns)

    def write_csv(self, path: Path) -> Path:
        return write_frame(self.to_frame(), Path(path))
