"""Distantly supervised corpora and classifiers for singular vs. plural "you"."""

from .instances import Domain, LabeledInstance, Plurality, Provenance, Utterance

__version__ = "0.1.0"

__all__ = [
    "Domain",
    "LabeledInstance",
    "Plurality",
    "Provenance",
    "Utterance",
    "__version__",
]
