"""Analysis engine for primitive substitution tilings of boxes: exact
spectral data of the count matrix, bounded-displacement classification,
discrepancy experiments, and the recursive economic-packing decomposition."""

from .classifier import Classification, classify, classify_matrix, compare_abs_power
from .discrepancy import (
    DiscrepancyReport,
    GrowthFit,
    disc,
    growth_fit,
    laczkovich_ratio,
    supertile_disc,
    vm_counts_paper,
    vm_disc_closed_form,
    vm_disc_paper,
    vm_geometry,
)
from .fixtures import FIXTURES, get_fixture, load_ruleset
from .hierarchy import Hierarchy
from .packing import PackingConfig, PackingResult, RegionExpr, economic_pack, evaluate_expr
from .ruleset import (
    ChildPlacement,
    RuleSet,
    TileType,
    parse_ruleset,
    primitivity_check,
    serialize_ruleset,
    substitution_matrix,
)
from .spectra import (
    CharPoly,
    Eigenvalue,
    SpectralReport,
    analyze_matrix,
    analyze_ruleset,
    char_poly,
    eigen_decompose,
    find_t,
    perron_data,
)
from .tiling import NetPoint, Patch, TileInstance, count_vector, inflate, net_points, partition_levels, supertile

__version__ = "0.1.0"
