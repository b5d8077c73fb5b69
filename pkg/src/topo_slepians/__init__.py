"""Topological Slepians on simplicial complexes: edge-concentrated,
band-limited signals, frame dictionaries built from them, and sparse coding
of edge flows."""

from .complex import (
    LaplacianTriple,
    SimplicialComplex,
    build_complex,
    from_simplices,
    incidence,
    laplacian,
    lower_neighborhood,
    upper_neighborhood,
)
from .dictionary import (
    ConcentrationPlan,
    FrameCertificate,
    SlepianDictionary,
    build_dictionary,
    default_concentration_sets,
    empirical_frame_check,
    fourier_dictionary,
    frame_certificate,
)
from .slepian import ConcentrationPair, SlepianSet, band_limiter, dual_slepians, edge_limiter, solve_slepians
from .sparse import SparseCode, nmse, omp_error, omp_sparsity
from .spectral import HodgeSpectrum, hodge_decompose, hodge_spectrum, inverse_sft, sft, spectrum_of
from .synth import FieldSpec, HexGeometry, add_noise, field_flow, hex_complex, sigma_for, snr_of

__version__ = "0.1.0"
