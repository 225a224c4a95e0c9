"""Exact dispersion of planar lattices via two-sided continued fractions."""

from .qfield import (
    CertifiedInterval,
    MixedRadicand,
    ParseError,
    QuadraticNumber,
    compare,
    decimal_str,
    delta,
    parse_number,
    rational,
    sqrt,
)
from .contfrac import (
    CFSequence,
    NonPeriodicTail,
    cf_expand,
    cf_value,
    convergent,
    convergents_range,
    format_cf,
    parse_cf,
    periodic_value,
    purely_periodic_generator,
    shift_reverse,
    tail_values,
    two_sided_from_tails,
    two_sided_periodic,
)
from .boxwalk import (
    LatticeNormalForm,
    MaxEmptyBox,
    NotIrrational,
    SingularBasis,
    TerminatedWalk,
    closed_form_box,
    enumerate_boxes,
    generator_from_box,
    normal_form,
    starting_box,
    step,
    volume_decomposition,
)
from .torus import (
    NotCoprime,
    PeriodicDispersionResult,
    RankOneLattice,
    ZarembaRow,
    ZarembaScan,
    dispersion_constant,
    fibonacci_lattice,
    periodic_dispersion,
    zaremba_scan,
)
from .oracle import (
    CapExceeded,
    OracleBox,
    PointSet,
    WindowTooSmall,
    brute_boxes_origin,
    brute_dispersion,
    brute_periodic_dispersion,
    read_point_set,
    write_point_set,
)
from .dispersion import (
    DispersionResult,
    MixedValue,
    MINIMUM_DISPERSION,
    NotPurelyPeriodic,
    NotQuadraticInteger,
    SubringSpec,
    best_lattice,
    bounds_table,
    box_value,
    coefficient_bound_check,
    coefficient_bounds,
    coefficient_statistics_scan,
    disp_quadratic,
    disp_sequence,
    maximizing_offsets,
    tight_bounds,
    value_cmp,
    value_decimal,
)

__version__ = "0.1.0"

__all__ = [
    "CertifiedInterval",
    "MixedRadicand",
    "ParseError",
    "QuadraticNumber",
    "compare",
    "decimal_str",
    "delta",
    "parse_number",
    "rational",
    "sqrt",
    "CFSequence",
    "NonPeriodicTail",
    "cf_expand",
    "cf_value",
    "convergent",
    "convergents_range",
    "format_cf",
    "parse_cf",
    "periodic_value",
    "purely_periodic_generator",
    "shift_reverse",
    "tail_values",
    "two_sided_from_tails",
    "two_sided_periodic",
    "LatticeNormalForm",
    "MaxEmptyBox",
    "NotIrrational",
    "SingularBasis",
    "TerminatedWalk",
    "closed_form_box",
    "enumerate_boxes",
    "generator_from_box",
    "normal_form",
    "starting_box",
    "step",
    "volume_decomposition",
    "NotCoprime",
    "PeriodicDispersionResult",
    "RankOneLattice",
    "ZarembaRow",
    "ZarembaScan",
    "dispersion_constant",
    "fibonacci_lattice",
    "periodic_dispersion",
    "zaremba_scan",
    "CapExceeded",
    "OracleBox",
    "PointSet",
    "WindowTooSmall",
    "brute_boxes_origin",
    "brute_dispersion",
    "brute_periodic_dispersion",
    "read_point_set",
    "write_point_set",
    "DispersionResult",
    "MixedValue",
    "MINIMUM_DISPERSION",
    "NotPurelyPeriodic",
    "NotQuadraticInteger",
    "SubringSpec",
    "best_lattice",
    "bounds_table",
    "box_value",
    "coefficient_bound_check",
    "coefficient_bounds",
    "coefficient_statistics_scan",
    "disp_quadratic",
    "disp_sequence",
    "maximizing_offsets",
    "tight_bounds",
    "value_cmp",
    "value_decimal",
    "__version__",
]
