"""Exact exterior-algebra model of the l-adic cohomology of CM abelian
varieties: Lefschetz calculus, type descent, pairing certificates and the
group-level Chebotarev density."""

from .cm import CMConfig, CycleType, EigenvalueTuple
from .exterior import Element, GeneratorIndex, top_trace, wedge
from .lefschetz import LefschetzClass

__all__ = ["CMConfig", "CycleType", "EigenvalueTuple", "Element", "GeneratorIndex", "LefschetzClass", "top_trace", "wedge"]
