"""Exact Galois cohomology of reductive groups over finite models of local and global fields."""

from .intlat import FgAbGroup, GroupElement, Hom, smith
from .groups import FinGroup, Subgroup, group_analysis, is_sylow_cyclic
from .grpmod import (
    GModule,
    coinvariants,
    free_kernel_resolution,
    induced_module,
    pontryagin_dual,
    tate_h_minus1,
    transfer,
    verify_resolution,
)
from .localcoh import (
    LocalClass,
    PlaceSpec,
    capacity,
    h1_local,
    local_class,
    local_index,
    period_local,
    power_local,
    split_degree_local,
)
from .globalcoh import (
    GlobalClass,
    PlaceModel,
    glue_local_classes,
    global_ab_group,
    index_bounds_global,
    period_global,
    power_global,
    sha_kernel,
    split_degree_global,
)

__version__ = "1.0.0"

__all__ = [
    "FgAbGroup", "GroupElement", "Hom", "smith",
    "FinGroup", "Subgroup", "group_analysis", "is_sylow_cyclic",
    "GModule", "coinvariants", "free_kernel_resolution", "induced_module", "pontryagin_dual",
    "tate_h_minus1", "transfer", "verify_resolution",
    "LocalClass", "PlaceSpec", "capacity", "h1_local", "local_class", "local_index", "period_local",
    "power_local", "split_degree_local",
    "GlobalClass", "PlaceModel", "glue_local_classes", "global_ab_group", "index_bounds_global",
    "period_global", "power_global", "sha_kernel", "split_degree_global",
]
