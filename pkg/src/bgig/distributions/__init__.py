from .params import BgigParams, CumulantSet, GigParams, ModeSide, TailConstants
from .gig import gig_chf, gig_cumulants, gig_log_mgf, gig_logpdf, gig_mellin, gig_pdf, gig_raw_moment
from .bgig import (
    PdfDiagnostics,
    bgig_cgf_derivative,
    bgig_chf,
    bgig_chf_analytic,
    bgig_cumulants,
    bgig_levy_density,
    bgig_log_mgf,
    bgig_moment,
    bgig_pdf,
    mode,
    mode_side,
    mode_side_gap,
    tail_constants,
)
from .mellin import bgig_pdf_mellin
from .sampling import bgig_sample, bgig_samples, gig_sample, gig_samples
