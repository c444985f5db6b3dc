"""Exception hierarchy for the solver."""

from __future__ import annotations


class WeakSPEError(Exception):
    """Base class for every error raised by this package."""


class InvalidGame(WeakSPEError):
    """Arena or objective data violates a structural invariant."""


class InvalidLasso(WeakSPEError):
    """A lasso is not a path of the game, or its cycle does not close."""


class ObjectiveNotPrefixIndependent(WeakSPEError):
    """Operation requires prefix-independent objectives; reduce Reachability/Safety first."""


# Alias used by the verifier surface.
NonPrefixIndependentObjective = ObjectiveNotPrefixIndependent


class VertexNotAllowed(WeakSPEError):
    """Query starts outside the restricted arena."""


class ArenaTooLarge(WeakSPEError):
    """Restricted arena exceeds the subset-enumeration cap."""


class NoSuchPlay(WeakSPEError):
    """Lasso extraction requested for an unrealizable payoff."""


class EmptyLabelEncountered(WeakSPEError):
    """A label set is empty where that signals an internal bug."""


class InvalidThresholds(WeakSPEError):
    """Lower payoff threshold is not componentwise below the upper one."""


class TargetNotAchievable(WeakSPEError):
    """Requested payoff is not in the fixpoint at the initial vertex."""


class InternalWitnessNotGood(WeakSPEError):
    """A witness built from a fixpoint failed its own admissibility check (bug)."""


class MalformedWitness(WeakSPEError):
    """Witness entry violates its start-vertex or length contract."""


class WitnessNotGood(WeakSPEError):
    """Synthesis requires a witness that passes the admissibility check."""


class WitnessIncomplete(WeakSPEError):
    """Witness lacks a lasso for a deviation-index entry."""


class MachinePartial(WeakSPEError):
    """Strategy machine has no transition or action for a reachable query."""


class NotReachSafety(WeakSPEError):
    """Reduction applies only to Reachability and Safety objectives."""


class TooLarge(WeakSPEError):
    """Brute-force enumeration refused: instance above its size guard."""


class BudgetExceeded(WeakSPEError):
    """Sampled witness search exhausted its trial budget without an answer."""


class InvalidParams(WeakSPEError):
    """Generator parameters out of range."""


class SchemaError(WeakSPEError):
    """Input file does not conform to the expected format."""
