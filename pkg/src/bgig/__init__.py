"""Bilateral generalized inverse Gaussian laws, Lévy processes and option pricing."""

from .distributions import BgigParams, GigParams, bgig_chf, bgig_cumulants, bgig_pdf
from .distributions.mellin import bgig_pdf_mellin
from .distributions.sampling import bgig_sample, bgig_samples, gig_sample, gig_samples

__version__ = "0.1.0"

__all__ = [
    "BgigParams",
    "GigParams",
    "bgig_chf",
    "bgig_cumulants",
    "bgig_pdf",
    "bgig_pdf_mellin",
    "bgig_sample",
    "bgig_samples",
    "gig_sample",
    "gig_samples",
]
