"""Parametric resonance in forced oscillator networks.

Predicts Arnold tongues of ``phi'' + (L + eps P cos(omega t)) phi = 0`` from the
Laplacian spectrum and checks them against brute-force Floquet monodromy.
"""

from .floquet import ForcedSystem, MonodromyResult, analyse, classify_stability, growth_rate, monodromy
from .graph import Graph, Spectrum, laplacian, load_graph, spectral_decomposition
from .predictor import Tongue, classify_frequency, predict_first_order_tongues

__all__ = [
    "ForcedSystem", "MonodromyResult", "analyse", "classify_stability", "growth_rate", "monodromy",
    "Graph", "Spectrum", "laplacian", "load_graph", "spectral_decomposition",
    "Tongue", "classify_frequency", "predict_first_order_tongues",
]
