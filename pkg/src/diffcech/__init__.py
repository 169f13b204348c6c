"""Finite, exact models of plot-based Čech cohomology and principal bundles
on diffeological spaces presented by finitely many probes."""

from .abelian import FgAbGroup, Z
from .bundles import (FiniteGroup, bundle_from_plot_cocycle, classify_bundles, cocycle_from_labels,
                      parse_group, verify_principal)
from .cohomology import (THEORIES, CohomologyReport, compare_theories, cohomology_report,
                         kww_cohomology, piz_cohomology, tot_cohomology)
from .errors import (BoundError, ConsistencyError, DiffCechError, MalformedInputError,
                     ResourceCapError, ValidationError)
from .fixtures import PRESENTATIONS, fixture
from .site import PlotPresentation, load_presentation, validate_presentation

__version__ = "0.1.0"

__all__ = [
    "FgAbGroup", "Z", "FiniteGroup", "parse_group", "cocycle_from_labels", "bundle_from_plot_cocycle",
    "classify_bundles", "verify_principal", "THEORIES", "CohomologyReport", "piz_cohomology",
    "kww_cohomology", "tot_cohomology", "cohomology_report", "compare_theories", "PlotPresentation",
    "load_presentation", "validate_presentation", "fixture", "PRESENTATIONS", "DiffCechError",
    "MalformedInputError", "ValidationError", "ConsistencyError", "ResourceCapError", "BoundError",
]
