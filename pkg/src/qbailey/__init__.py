"""Exact q-series verification of multiple Bailey-lemma identities at p = 0."""

from .qcore import FactoredQ, FactoredSum, QMono, QSeries, qm, qpow

__all__ = ["FactoredQ", "FactoredSum", "QMono", "QSeries", "qm", "qpow"]
__version__ = "0.1.0"
