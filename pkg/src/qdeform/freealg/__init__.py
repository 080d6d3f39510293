"""Words, group letters and rewriting in F = TV x Gamma and its quotients."""

from .element import Element, TensorElement, format_element, format_tensor
from .presentation import (
    CROSSED_FLAVORS, FLAVORS, HOPF_FLAVORS, Presentation, PresentationError,
    RewriteBudgetError, braided_adjoint, build_presentation, serre_element, serre_relations,
)
from .overlaps import OverlapReport, check_overlaps, raw_triple_expected, theta_triple_raw
from .overlaps import complete_block_relations
from .hilbert import basis_enumerate, hilbert_ranks, oracle_ranks, series_coefficients
from .parse import ParseError, parse_element
