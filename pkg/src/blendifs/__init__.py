"""Blend IFS attractors on a grid, with certified error bounds and similarity metrics."""

from .blend import (
    BlendResult,
    ParameterChoice,
    attractor_approx,
    attractors_approx,
    blend_approx,
    choose_parameters,
    error_bound_tight,
    error_bound_worst,
    generate_theta,
)
from .config import RunConfig, bundled_names, config_from_dict, load_config
from .exceptions import (
    BadLengthError,
    BlendifsError,
    ConfigError,
    ConfigNotFoundError,
    DeltaNonPositiveError,
    EmptyIfsError,
    EmptyInputError,
    GridMismatchError,
    LambdaOutOfRangeError,
    NeedTwoSystemsError,
    NotContractiveError,
    SymbolOutOfRangeError,
    ThetaParseError,
    UnknownIfsError,
)
from .grid import (
    CellIndex,
    DiscreteSet,
    Grid,
    bbox_diameter,
    discretize,
    full_set,
    hb_apply_discrete,
    hb_apply_discrete_counted,
    iterate_until_fixed,
    load_cells,
    project,
    realize,
    save_cells,
)
from .ifs import (
    AffineMap2,
    BBoxEscapeWarning,
    BlendSystem,
    Ifs,
    affine_apply,
    code_map_point,
    d_lambda,
    ifs_validate,
    lipschitz,
    make_blend_system,
)
from .metrics import (
    BetaEntry,
    BetaReport,
    BoundCheckResult,
    CoveringRadii,
    HausdorffResult,
    beta_definition,
    beta_examples,
    beta_report,
    bound_check,
    covering_radii_selfmax,
    covering_radii_thm31,
    delta_self_dissimilarity,
    hausdorff,
)
from .render import RenderSpec, rasterize, read_pgm, write_pgm

__version__ = "0.1.0"
