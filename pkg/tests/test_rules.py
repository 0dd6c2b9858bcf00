"""The two hard rules: obey instructions, never record silently."""

import pytest

from rulebend.model import Behaviour, BehaviourKind, Instruction
from rulebend.rules import RULES, evaluate_rules

from conftest import breach_context, pending_context


def test_registry_has_two_rules_with_stable_ids():
    assert [rule.rule_id for rule in RULES] == [1, 2]
    assert all(rule.summary for rule in RULES)


def test_record_after_hollow_acknowledgement_breaks_rule_two():
    verdict = evaluate_rules(Behaviour(BehaviourKind.RECORD), breach_context())
    assert not verdict.permissible
    assert verdict.violated_rule_ids == (2,)


def test_report_after_hollow_acknowledgement_is_permissible():
    verdict = evaluate_rules(Behaviour(BehaviourKind.REPORT), breach_context())
    assert verdict.permissible


def test_follow_up_after_hollow_acknowledgement_is_permissible():
    verdict = evaluate_rules(Behaviour(BehaviourKind.FOLLOW_UP), breach_context())
    assert verdict.permissible


def test_ignoring_a_pending_instruction_breaks_rule_one():
    ctx = pending_context(Instruction.SNOOZE)
    verdict = evaluate_rules(Behaviour(BehaviourKind.FOLLOW_UP), ctx)
    assert verdict.violated_rule_ids == (1,)


def test_carrying_out_the_pending_instruction_is_permissible():
    ctx = pending_context(Instruction.SNOOZE)
    obey = Behaviour(BehaviourKind.SNOOZE, obeys=Instruction.SNOOZE)
    assert evaluate_rules(obey, ctx).permissible


def test_obeying_the_wrong_instruction_still_breaks_rule_one():
    ctx = pending_context(Instruction.ACKNOWLEDGE)
    wrong = Behaviour(BehaviourKind.SNOOZE, obeys=Instruction.SNOOZE)
    assert evaluate_rules(wrong, ctx).violated_rule_ids == (1,)


def test_both_rules_can_break_together_in_ascending_order():
    # a record that also ignores a pending instruction
    ctx = pending_context(Instruction.ACKNOWLEDGE)
    ctx = type(ctx)(
        epsilon_m=ctx.epsilon_m,
        missed_doses=ctx.missed_doses,
        follow_ups=ctx.follow_ups,
        reminder_state=ctx.reminder_state,
        last_instruction=ctx.last_instruction,
        instruction_pending=True,
        acknowledged_without_taking=True,
        snoozes_granted=ctx.snoozes_granted,
        snooze_remaining=ctx.snooze_remaining,
        step=ctx.step,
    )
    verdict = evaluate_rules(Behaviour(BehaviourKind.RECORD), ctx)
    assert verdict.violated_rule_ids == (1, 2)


@pytest.mark.parametrize(
    "kind",
    [BehaviourKind.REMIND, BehaviourKind.FOLLOW_UP, BehaviourKind.REPORT],
)
def test_non_record_actions_never_break_rule_two(kind):
    verdict = evaluate_rules(Behaviour(kind), breach_context())
    assert 2 not in verdict.violated_rule_ids
