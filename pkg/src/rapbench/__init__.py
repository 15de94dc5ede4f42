"""Availability-aware redundancy allocation: Markov subsystem models, system
structures, multi-objective optimizers and a reproducible benchmark harness."""

from .ctmc import Strategy, SubsystemParams, subsystem_availability
from .rap import Evaluation, InstanceSpec, Phenotype, evaluate, load_instance
from .structures import CaseStudy, system_availability

__version__ = "0.1.0"

__all__ = [
    "CaseStudy",
    "Evaluation",
    "InstanceSpec",
    "Phenotype",
    "Strategy",
    "SubsystemParams",
    "evaluate",
    "load_instance",
    "subsystem_availability",
    "system_availability",
]
