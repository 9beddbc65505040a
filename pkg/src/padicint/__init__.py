"""Exact p-adic cell measures, constructible integration, Poincare series.

Everything is exact: field points are rationals inside Q_p, measures and
integrals live in the ring Z[q, q^-1, 1/(1-q^-i)], counts are integers,
and every symbolic result can be cross-checked against residue-enumeration
oracles shipped alongside.
"""

from .aqring import AqElem, LaurentPoly, aq_add, aq_eval, aq_mul
from .errors import (
    BudgetExceeded,
    DivergentSum,
    DomainError,
    EmptySet,
    InfiniteMeasure,
    NotFiberReducible,
    PadicIntError,
    ParseError,
    UndefinedAtPoint,
)
from .integrate import (
    BoundRef,
    ConstructibleExpr,
    Domain,
    DomainGammaCell,
    IntConst,
    IntScale,
    IntSum,
    LinExpr,
    OracleResult,
    OrdExpr,
    Term,
    UNIT_BALL,
    brute_force_integrate,
    eval_constructible,
    identity_lin,
    integrate,
)
from .kcells import (
    KCell,
    kcell_contains,
    kcell_measure,
    kcells_disjoint,
    partition_unit_ball,
)
from .padic import (
    DEFAULT_BUDGET,
    INFINITY,
    AngularResidue,
    ExtendedInteger,
    PAdicPoint,
    Prime,
    ac_of,
    enumerate_residues,
    is_prime,
    ord_of,
    rational_ac,
    rational_ord,
)
from .poincare import (
    PoincareReport,
    RationalFunctionT,
    SeriesTable,
    UNDETERMINED,
    count_Nm,
    fit_rational,
    measure_identity_check,
    poincare_report,
    series_table,
)
from .polys import Polynomial
from .presburger import (
    GammaCell,
    GammaCellUnion,
    PreparedLinear,
    cell_cardinality,
    cells_disjoint,
    gamma_weight_sum,
    geom_sum,
    intersect_cells,
    prepared_eval,
    weighted_sum,
    wellorder_less,
    wellorder_min,
    wellorder_min_product,
)

__version__ = "0.1.0"
