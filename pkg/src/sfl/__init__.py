"""Exact contact invariants and rational ball fillability of small Seifert fibered spaces."""

from .exactmath import DomainError, Slope, cf_eval, cf_expand, format_rational, i_invariant, parse_rational
from .plumbing import (
    SeifertData,
    StabilizedDiagram,
    intersection_data,
    lens_chain,
    normalize_seifert,
    orientation_reverse,
    prism_graph,
    seifert_to_plumbing,
    torus_surgery_chain,
)
from .contact import canonical_rotation, classify_consistency, enumerate_structures, theta, theta_all
from .obstruct import generate_fillable, qhb_match, verdict_lens, verdict_seifert, verdict_torus

__version__ = "0.1.0"
