"""Simulation and security checks for two-party quantum protocols.

Modules: :mod:`~biparti.qlin` (states, gates, partial traces, distances),
:mod:`~biparti.model` (protocol engine with quantum and classical channels),
:mod:`~biparti.nogo` (concealment checks and cheat synthesis),
:mod:`~biparti.scenarios` (worked protocol runs) and :mod:`~biparti.cli`.
"""
from .model import Party, WorldState
from .nogo import ExtractionResult, SecurityReport
from .qlin import DensityOperator, SchmidtDecomposition, StateVector, UnitaryMatrix
from .scenarios import ScenarioOutcome

__version__ = "0.1.0"

__all__ = [
    "DensityOperator", "ExtractionResult", "Party", "ScenarioOutcome", "SchmidtDecomposition",
    "SecurityReport", "StateVector", "UnitaryMatrix", "WorldState",
]
