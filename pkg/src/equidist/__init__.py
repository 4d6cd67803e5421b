"""Mahler measures, equilibrium measures and zero-distribution discrepancy
bounds for integer polynomials."""

from .discrepancy import DiscrepancyReport, TestFunction, TheoremTag, builtin_test_function, zero_stats
from .families import FamilyMember, FamilySpec, parse_family
from .intpoly import IntPolynomial, discriminant, parse_polynomial, resultant
from .mahler import generalized_mahler, mahler_measure, measure_report, sup_norm, tilde_mahler
from .potential import DiskPlusPoints, Segment, UnitDisk, equilibrium_mean, green, parse_domain
from .rootfinder import RootSet, find_roots

__version__ = "0.1.0"

__all__ = [
    "DiscrepancyReport",
    "DiskPlusPoints",
    "FamilyMember",
    "FamilySpec",
    "IntPolynomial",
    "RootSet",
    "Segment",
    "TestFunction",
    "TheoremTag",
    "UnitDisk",
    "builtin_test_function",
    "discriminant",
    "equilibrium_mean",
    "find_roots",
    "generalized_mahler",
    "green",
    "mahler_measure",
    "measure_report",
    "parse_domain",
    "parse_family",
    "parse_polynomial",
    "resultant",
    "sup_norm",
    "tilde_mahler",
    "zero_stats",
]
