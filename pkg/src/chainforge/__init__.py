"""Exact constructions for weighted chains: orthogonal polynomials, cospectral
vertices, perfect state transfer and Prouhet-Tarry-Escott solutions."""

__version__ = "0.1.0"

from .chain import (  # noqa: E402
    Chain,
    OPSequence,
    RationalFn,
    SpectralData,
    alpha,
    cd_identity_check,
    chain_from_top_pair,
    eigen,
    ops_from_chain,
    reflect_chain,
    subchain_polys,
    transition_amplitude,
    vertex_deleted_charpoly,
)
from .cospec import (  # noqa: E402
    construct_cospectral,
    construct_cospectral_base,
    extend_cospectral,
    is_cospectral,
    position_feasible,
)
from .opsbuild import BuildCertificate, BuildOptions, build_ops  # noqa: E402
from .poly import Poly, isolate_real_roots, strongly_interlaces  # noqa: E402
from .pst import (  # noqa: E402
    admissible_pattern,
    build_pst_chain,
    check_pst,
    is_periodic,
    pst_interpolant,
    scan_no_pst_half,
    shrink,
)
from .pte import (  # noqa: E402
    chain_to_pte,
    pte_interlacing_check,
    pte_poly_gap,
    pte_to_chain,
    pte_to_pst_chain,
    search_pte,
    verify_pte,
)
