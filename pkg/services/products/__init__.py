"""
乘积模块

- graph: 收缩图、规范形与图和
- contraction: ⋆、·_T、·_Λ 等乘积与参照路径
- checks: 因果分解、Dyson–Schwinger 方程与代数检查
"""

from .checks import (
    associativity_check, causal_factorization_check, commutator_check, conjugation_check,
    derivative_pairing, dyson_schwinger_check, field_functional, require_causally_later,
    vanishes_in_retarded_basis,
)
from .contraction import (
    EdgeOption, Product, alpha, anti_timeordered, contract, dM_dLambda, differentiate_cutoff,
    exp_product, expand_edges, log_product, named_product, pointwise, power, product_options,
    reference_product, regularized_options, regularized_product, star, star_hadamard,
    strip_labels, timeordered, timeordered_hadamard,
)
from .graph import (
    ContractionGraph, Edge, GraphSum, Vertex, canonicalize, constant_vertex, edge_allowed,
    graph_allowed, merge_vertices, orient,
)

__all__ = [
    'associativity_check', 'causal_factorization_check', 'commutator_check', 'conjugation_check',
    'derivative_pairing', 'dyson_schwinger_check', 'field_functional', 'require_causally_later',
    'vanishes_in_retarded_basis',
    'EdgeOption', 'Product', 'alpha', 'anti_timeordered', 'contract', 'dM_dLambda',
    'differentiate_cutoff', 'exp_product', 'expand_edges', 'log_product', 'named_product',
    'pointwise', 'power', 'product_options', 'reference_product', 'regularized_options',
    'regularized_product', 'star', 'star_hadamard', 'strip_labels', 'timeordered',
    'timeordered_hadamard',
    'ContractionGraph', 'Edge', 'GraphSum', 'Vertex', 'canonicalize', 'constant_vertex',
    'edge_allowed', 'graph_allowed', 'merge_vertices', 'orient',
]
