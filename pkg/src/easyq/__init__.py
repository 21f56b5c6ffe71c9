"""Partition categories, intertwiner matrices, matrix-model checks and free
moment identities for the two-parameter quantum groups O+(p,q), B+(p,q),
S+(p,q), H+(p,q) and H_s+(p,q)."""

from .category import (
    ComposeResult,
    category_equal,
    closure,
    compose,
    involute,
    product_enumerate,
    rotate,
    rotate_back,
    tensor,
)
from .errors import (
    EasyqError,
    InvalidPartition,
    KindMismatch,
    NothingToRotate,
    ParseError,
    PrecondFailed,
    ShapeMismatch,
    SizeLimitExceeded,
    UnsupportedImpl,
)
from .models import (
    BlockMatrixModel,
    check,
    conjugate_by_c,
    quotient_projections,
    sample_classical,
    sudoku_transform,
    witness_search,
)
from .moments import (
    character_count,
    cumulants_from_moments,
    dilate,
    finite_group_moment,
    free_convolve,
    free_poisson,
    moments_from_cumulants,
    ncjoin_count,
)
from .partitions import (
    Cat,
    Partition,
    Product,
    belongs,
    canonicalize,
    count,
    enumerate_partitions,
    is_noncrossing,
    parse,
    parse_category,
    serialize,
)
from .tensor_rep import (
    IndexSpace,
    IntertwinerMatrix,
    c_matrix,
    delta,
    f_matrix,
    fix_dim,
    gram_rank,
    is_intertwiner,
    t_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "belongs",
    "BlockMatrixModel",
    "c_matrix",
    "canonicalize",
    "Cat",
    "category_equal",
    "character_count",
    "check",
    "closure",
    "compose",
    "ComposeResult",
    "conjugate_by_c",
    "count",
    "cumulants_from_moments",
    "delta",
    "dilate",
    "EasyqError",
    "enumerate_partitions",
    "f_matrix",
    "finite_group_moment",
    "fix_dim",
    "free_convolve",
    "free_poisson",
    "gram_rank",
    "IndexSpace",
    "IntertwinerMatrix",
    "InvalidPartition",
    "involute",
    "is_intertwiner",
    "is_noncrossing",
    "KindMismatch",
    "moments_from_cumulants",
    "ncjoin_count",
    "NothingToRotate",
    "parse",
    "parse_category",
    "ParseError",
    "Partition",
    "PrecondFailed",
    "Product",
    "product_enumerate",
    "quotient_projections",
    "rotate",
    "rotate_back",
    "sample_classical",
    "serialize",
    "ShapeMismatch",
    "SizeLimitExceeded",
    "sudoku_transform",
    "t_matrix",
    "tensor",
    "UnsupportedImpl",
    "witness_search",
]
