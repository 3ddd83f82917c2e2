"""Good-product (Nöbeling) bases of C(S, Z) for closed subsets S of bit-cubes."""

from .basis import (
    Decomposition,
    GoodBasis,
    both_methods,
    check_exactness,
    check_tail_identities,
    compute_basis,
    decompose,
    delta_expansion,
    good_products_greedy,
    good_products_recursive,
    prefix_filtration,
)
from .cube import CoordinateOrder, CubeSet, FunctionOnS
from .products import enumerate_products, eval_product, is_good_definitional, lex_compare

__version__ = "0.1.0"
