"""Exact super-hedging and arbitrage analysis for finite markets with a random horizon."""
from .model import Analysis, Claim, Model
from .modelfile import ModelError, dumps, load, loads, save
from .pricing import CLASSES, AIPViolation

__version__ = "0.1.0"

__all__ = ["Analysis", "Claim", "Model", "ModelError", "dumps", "load", "loads", "save", "CLASSES",
           "AIPViolation", "__version__"]
