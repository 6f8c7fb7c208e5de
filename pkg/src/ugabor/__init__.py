"""Gabor frames with rational windows over a periodic universal set."""

from .errors import GaborLabError
from .universal import build_universal, periodic_set, UniversalSet
from .windows import Window, SimpleWindow, GeneralWindow, validate, load_window, class_test
from .symbols import SymbolFamily, general_symbol_family, simple_symbol_family
from .segments import build_segments, erase_row, segment_det, vandermonde_det, fd_window
from .framecheck import frame_bounds_estimate, gabor_sum_oracle, criterion_form

__version__ = "0.1.0"

__all__ = [
    "GaborLabError", "UniversalSet", "build_universal", "periodic_set",
    "Window", "SimpleWindow", "GeneralWindow", "validate", "load_window",
    "class_test", "SymbolFamily", "general_symbol_family", "simple_symbol_family",
    "build_segments", "erase_row", "segment_det", "vandermonde_det", "fd_window",
    "frame_bounds_estimate", "gabor_sum_oracle", "criterion_form",
]
