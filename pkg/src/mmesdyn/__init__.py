"""Entanglement and nonlocality dynamics of mixed maximally entangled states
in lossy cavity pairs: exact matrix evolutions, closed-form spectra and
measures, independent numerical oracles, and a CLI for sweeps and figure
datasets.
"""

from .dynamics import (
    FAMILIES,
    PAIR_NAMES,
    build_mmes,
    damping_amplitudes,
    evolve_four_partite,
    family_spec,
    pair_state,
)
from .entanglement import (
    esd_boundary,
    esd_region_classifier,
    negativity,
)
from .linalg import DensityMatrix, partial_trace, partial_transpose
from .monogamy import (
    DistributionPanel,
    distribution_panel,
    min_distribution,
    min_distribution_closed,
    negativity_monogamy,
    peak_census,
    squared_min_scan,
)
from .nonlocality import (
    min_bipartition,
    min_brute_force,
    min_closed_form,
    min_luo_fu,
)
from .validation import all_passed, report_lines, run_all

__version__ = "1.0.0"

__all__ = [
    "DensityMatrix",
    "DistributionPanel",
    "FAMILIES",
    "PAIR_NAMES",
    "all_passed",
    "build_mmes",
    "damping_amplitudes",
    "distribution_panel",
    "esd_boundary",
    "esd_region_classifier",
    "evolve_four_partite",
    "family_spec",
    "min_bipartition",
    "min_brute_force",
    "min_closed_form",
    "min_distribution",
    "min_distribution_closed",
    "min_luo_fu",
    "negativity",
    "negativity_monogamy",
    "pair_state",
    "partial_trace",
    "partial_transpose",
    "peak_census",
    "report_lines",
    "run_all",
    "squared_min_scan",
    "__version__",
]
