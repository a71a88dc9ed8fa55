"""Norm curves of ``M_t = [[a, t], [c t, b phi(t)]]`` and norm attainment of
the block operator ``[[a I, A], [c A^*, b phi(|A|)]]``."""

from .curves import NsParams, ParamSet, eval_f
from .phicrit import LogPhi, PowerPhi, PresetPhi, TablePhi, parse_phi
from .specop import SpectrumSpec, decide_attainment

__all__ = [
    "LogPhi",
    "NsParams",
    "ParamSet",
    "PowerPhi",
    "PresetPhi",
    "SpectrumSpec",
    "TablePhi",
    "decide_attainment",
    "eval_f",
    "parse_phi",
]
__version__ = "0.1.0"
