from .dirichlet import (
    ClientGroup,
    ClientLabelDistribution,
    GroupSpec,
    concentration_vector,
    draw_client_distributions,
    sample_distribution,
)
from .manifest import (
    client_histogram_frame,
    distributions_frame,
    export_manifest,
    load_manifest,
    manifest_frame,
)
from .partitioner import client_sample_count, largest_remainder, partition, target_counts

__all__ = [
    "ClientGroup",
    "ClientLabelDistribution",
    "GroupSpec",
    "concentration_vector",
    "draw_client_distributions",
    "sample_distribution",
    "client_histogram_frame",
    "distributions_frame",
    "export_manifest",
    "load_manifest",
    "manifest_frame",
    "client_sample_count",
    "largest_remainder",
    "partition",
    "target_counts",
]
