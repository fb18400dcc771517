from enum import Enum


class SolverError(RuntimeError):
    """Raised for exact-solver cap breaches and illegal solver phase changes"""
    pass


class SolverPhase(Enum):
    IDLE = 0
    CONSTRUCTING = 1
    IMPROVING = 2
    COMPLETED = 3
    FAILED = 4


class PhaseTransition:
    """Simple phase transition validator"""

    _allowed = {
        SolverPhase.IDLE: {SolverPhase.CONSTRUCTING, SolverPhase.IMPROVING, SolverPhase.FAILED},
        SolverPhase.CONSTRUCTING: {SolverPhase.IMPROVING, SolverPhase.FAILED},
        SolverPhase.IMPROVING: {SolverPhase.COMPLETED, SolverPhase.FAILED},
        SolverPhase.COMPLETED: {SolverPhase.IDLE},
        SolverPhase.FAILED: {SolverPhase.IDLE},
    }

    @staticmethod
    def is_valid(from_phase: SolverPhase, to_phase: SolverPhase) -> bool:
        return to_phase in PhaseTransition._allowed.get(from_phase, set())

    @staticmethod
    def advance(from_phase: SolverPhase, to_phase: SolverPhase) -> SolverPhase:
        if not PhaseTransition.is_valid(from_phase, to_phase):
            raise SolverError(f"Invalid phase transition {from_phase.name} -> {to_phase.name}")
        return to_phase
