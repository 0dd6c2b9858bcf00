"""Decision orchestration: candidates in, recommended behaviour out.

For one decision point the governor enumerates the context-legal
candidate behaviours, runs each through rule check, utilities, case
lookup, and desirability evaluation, posts everything to a blackboard,
and emits a recommendation.

Arbitration prefers the behaviour that carries out a pending resident
instruction; among other desirable behaviours it escalates first
(report over record over follow-up over reminders).  If nothing is
desirable, the rule-compliant candidate with the best combined utility
is recommended alone and flagged as a fallback, so the robot always has
an action and the log shows the governor was overridden by necessity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .casekb import CaseBase
from .evaluator import evaluate
from .model import (
    Behaviour,
    BehaviourKind,
    Blackboard,
    BlackboardEntry,
    CharacterProfile,
    DecisionContext,
    Instruction,
    ReminderState,
)
from .rules import evaluate_rules
from .utility import autonomy_utility, wellbeing_utility

#: How many follow-ups exhaust patience and expand the candidate set.
EXPANSION_FOLLOW_UPS = 3

#: Fixed arbitration priority among desirable behaviours that do not
#: answer an instruction: escalate before settling before re-prompting.
ARBITRATION_PRIORITY: Tuple[BehaviourKind, ...] = (
    BehaviourKind.REPORT,
    BehaviourKind.RECORD,
    BehaviourKind.FOLLOW_UP,
    BehaviourKind.SNOOZE,
    BehaviourKind.REMIND,
    BehaviourKind.ACK_WAIT,
)

#: Canonical posting order on the blackboard.
_CANONICAL_ORDER: Tuple[BehaviourKind, ...] = (
    BehaviourKind.REMIND,
    BehaviourKind.SNOOZE,
    BehaviourKind.FOLLOW_UP,
    BehaviourKind.RECORD,
    BehaviourKind.REPORT,
    BehaviourKind.ACK_WAIT,
)


class GovernorError(Exception):
    """Raised when a decision cannot produce any recommendation."""


_OBEY_BEHAVIOURS = {
    Instruction.SNOOZE: Behaviour(BehaviourKind.SNOOZE, obeys=Instruction.SNOOZE),
    Instruction.ACKNOWLEDGE: Behaviour(
        BehaviourKind.ACK_WAIT, obeys=Instruction.ACKNOWLEDGE
    ),
}

_ESCALATION_SET = (
    Behaviour(BehaviourKind.FOLLOW_UP),
    Behaviour(BehaviourKind.RECORD),
    Behaviour(BehaviourKind.REPORT),
)


def candidate_behaviours(ctx: DecisionContext) -> Tuple[Behaviour, ...]:
    """Context-legal candidate actions, in canonical order.

    - inside a granted snooze window: continue the snooze;
    - a pending instruction: the single behaviour that carries it out;
    - an acknowledgement that produced no medication, or patience
      exhausted after three follow-ups: follow up, record, or report;
    - a snoozed reminder whose window has run out: follow up;
    - otherwise: issue the due reminder.
    """
    if ctx.snooze_remaining > 0:
        return (Behaviour(BehaviourKind.SNOOZE),)
    if ctx.instruction_pending:
        assert ctx.last_instruction is not None  # enforced by the context
        return (_OBEY_BEHAVIOURS[ctx.last_instruction],)
    if ctx.acknowledged_without_taking or ctx.follow_ups >= EXPANSION_FOLLOW_UPS:
        return _ESCALATION_SET
    if ctx.reminder_state is ReminderState.SNOOZED:
        return (Behaviour(BehaviourKind.FOLLOW_UP),)
    return (Behaviour(BehaviourKind.REMIND),)


@dataclass(frozen=True)
class Recommendation:
    """What the governor tells the robot about one decision."""

    desirable: Tuple[Behaviour, ...]      # canonical order, possibly empty
    fallback: Optional[Behaviour]         # set exactly when desirable is empty
    blackboard: Blackboard

    def is_fallback(self) -> bool:
        return self.fallback is not None


def decide(
    ctx: DecisionContext,
    profile: CharacterProfile,
    kb: CaseBase,
    risk_mode: str = "literal",
) -> Recommendation:
    """Run the full pipeline over the context-legal candidates.

    Never mutates the case base and never returns an empty
    recommendation: when no candidate is desirable the rule-compliant
    candidate with the highest combined utility is picked as fallback.
    """
    candidates = candidate_behaviours(ctx)
    ordered = sorted(candidates, key=lambda b: _CANONICAL_ORDER.index(b.kind))
    blackboard = Blackboard(context=ctx, profile=profile)
    for behaviour in ordered:
        verdict = evaluate_rules(behaviour, ctx)
        au = autonomy_utility(behaviour, ctx)
        w, spec = wellbeing_utility(behaviour, ctx)
        opinion = kb.consult(behaviour, ctx, au, w, verdict)
        evaluation = evaluate(
            behaviour, ctx, profile, verdict, opinion, au, w, risk_mode=risk_mode
        )
        blackboard.post(
            BlackboardEntry(
                behaviour=behaviour,
                verdict=verdict,
                autonomy_utility=au,
                wellbeing_utility=w,
                wellbeing_spec=spec,
                opinion=opinion,
                evaluation=evaluation,
            )
        )

    desirable = tuple(
        entry.behaviour
        for entry in blackboard.entries
        if entry.evaluation.desirability == 1
    )
    if desirable:
        return Recommendation(desirable=desirable, fallback=None, blackboard=blackboard)

    compliant = [
        entry for entry in blackboard.entries if entry.verdict.permissible
    ]
    if not compliant:
        raise GovernorError(
            f"no desirable and no rule-compliant candidate at step {ctx.step}"
        )
    best = None
    best_total = None
    for entry in sorted(
        compliant, key=lambda e: ARBITRATION_PRIORITY.index(e.behaviour.kind)
    ):
        total = entry.wellbeing_utility + entry.autonomy_utility
        if best_total is None or total > best_total:
            best, best_total = entry, total
    return Recommendation(
        desirable=(), fallback=best.behaviour, blackboard=blackboard
    )


def arbitrate(
    recommendation: Recommendation,
    pending_instruction: Optional[Instruction] = None,
) -> Behaviour:
    """Pick the single behaviour the robot executes.

    A desirable behaviour obeying the pending instruction wins outright;
    otherwise the fixed escalation-first priority applies.  A fallback
    recommendation already names its single behaviour.
    """
    if recommendation.fallback is not None:
        return recommendation.fallback
    if not recommendation.desirable:
        raise GovernorError("empty recommendation cannot be arbitrated")
    if pending_instruction is not None:
        for behaviour in recommendation.desirable:
            if behaviour.obeys is pending_instruction:
                return behaviour
    return min(
        recommendation.desirable,
        key=lambda b: ARBITRATION_PRIORITY.index(b.kind),
    )
