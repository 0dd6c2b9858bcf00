"""Desirability evaluation: when may the robot bend or suppress a rule?

Every candidate behaviour arrives here with four inputs already on the
blackboard: its rule verdict, its two utilities, and the case-base
opinion.  Crossing verdict with opinion gives four branches:

    permissible + acceptable     -> desirable as-is
    impermissible + unacceptable -> rejected as-is
    impermissible + acceptable   -> a *bend*: precedent says act against
                                    the rules; the character decides
    permissible + unacceptable   -> a *suppress*: precedent says refuse
                                    a legal action; the character decides

The two contested branches run value gates and then a risk gate.  In a
bend, a value the precedent stance serves must gain at least the gain
floor (10-C)/10 and every other value must stay above the loss floor
(C-10)/10.  In a suppress, only the values the stance serves are
checked, against the loss floor.  Finally the situation's risk must not
exceed the character's risk ceiling.

The wellbeing gate reads the behaviour's wellbeing utility; the
autonomy gate reads its autonomy utility.  Gates run in the fixed value
order (wellbeing, then autonomy) and the first failure decides the
explanation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Optional, Sequence, Tuple

from .casekb import CaseOpinion
from .model import (
    AUTONOMY,
    VALUE_TAGS,
    WELLBEING,
    Behaviour,
    CharacterProfile,
    DecisionContext,
    GammaSpec,
    RuleVerdict,
)
from .utility import behaviour_risk, risk_threshold, situation_spec, value_thresholds


class Branch(str, Enum):
    COMPLIANT_SUPPORTED = "compliant_supported"
    NONCOMPLIANT_UNSUPPORTED = "noncompliant_unsupported"
    BEND_EVALUATED = "bend_evaluated"
    SUPPRESS_EVALUATED = "suppress_evaluated"


# ======================================================================
# Explanation templates
# ======================================================================
# Templates 1-6 are the canonical explanation wordings for contested
# (bend/suppress) outcomes; 7-9 cover the uncontested branches and the
# suppress that survives every gate.  Placeholders in angle brackets are
# substituted by render_explanation.  The wording, down to punctuation,
# is part of the external contract: tests compare byte-for-byte.

TEMPLATE_BEND_ACCEPTED = 1
TEMPLATE_SUPPRESS_RISK = 2
TEMPLATE_SUPPRESS_WELLBEING = 3
TEMPLATE_BEND_RISK = 4
TEMPLATE_BEND_VALUE = 5
TEMPLATE_SUPPRESS_AUTONOMY = 6
TEMPLATE_COMPLIANT_SUPPORTED = 7
TEMPLATE_NONCOMPLIANT_UNSUPPORTED = 8
TEMPLATE_SUPPRESS_OVERRIDDEN = 9

TEMPLATES = {
    TEMPLATE_BEND_ACCEPTED: (
        "The action breaks the rules <rule_ids>. However, this action in "
        "this context is considered desirable by experts. Since it "
        "increases <intentions> values greatly, while not reducing the "
        "other values <other_values> by a considerable amount, and the "
        "outcome is within accepted risk levels, deemed accepted by the "
        "PSRB system."
    ),
    TEMPLATE_SUPPRESS_RISK: (
        "The action does not break any rules. However, this action in "
        "this context is considered undesirable by experts. Since the "
        "action outcomes introduce a high risk, deemed not accepted by "
        "the PSRB system."
    ),
    TEMPLATE_SUPPRESS_WELLBEING: (
        "The action does not break any rules. However, this action in "
        "this context is considered undesirable by experts. Since it "
        "decreases <intentions> values by a considerable amount, the "
        "action is deemed unacceptable by the system"
    ),
    TEMPLATE_BEND_RISK: (
        "The action breaks the rules <rule_ids>. However, this action in "
        "this context is considered desirable by experts. Although the "
        "value tradeoff is satisfactory, the risk taken by the action is "
        "not acceptable to bend the rule."
    ),
    TEMPLATE_BEND_VALUE: (
        "The action breaks the rules <rule_ids>. However, this action in "
        "this context is considered desirable by experts. But, the PSRB "
        "system suggests that the value tradeoff is not satisfactory to "
        "bend the rule."
    ),
    TEMPLATE_SUPPRESS_AUTONOMY: (
        "The action does not break any rules. However, this action in "
        "this context is considered undesirable by experts. But, the PSRB "
        "system suggests that the value tradeoff is not satisfactory to "
        "bend the rule."
    ),
    TEMPLATE_COMPLIANT_SUPPORTED: (
        "The action does not break any rules and is considered desirable "
        "by experts, deemed accepted by the PSRB system."
    ),
    TEMPLATE_NONCOMPLIANT_UNSUPPORTED: (
        "The action breaks the rules <rule_ids> and is considered "
        "undesirable by experts, deemed not accepted by the PSRB system."
    ),
    TEMPLATE_SUPPRESS_OVERRIDDEN: (
        "The action does not break any rules. However, this action in "
        "this context is considered undesirable by experts. Since the "
        "value tradeoff and the risk stay within the limits the agent's "
        "character accepts, deemed accepted by the PSRB system."
    ),
}


def _join_ids(rule_ids: Sequence[int]) -> str:
    return ", ".join(str(rule_id) for rule_id in rule_ids) if rule_ids else "none"


def _join_tags(tags: FrozenSet[str]) -> str:
    return ", ".join(sorted(tags)) if tags else "none"


def render_explanation(
    template_id: int,
    rule_ids: Sequence[int] = (),
    intentions: FrozenSet[str] = frozenset(),
) -> str:
    """Fill one canonical template.

    <rule_ids>      comma-joined broken rule numbers
    <intentions>    comma-joined sorted value tags of the opinion
    <other_values>  the complementary value tags
    Empty substitutions render as "none".
    """
    if template_id not in TEMPLATES:
        raise ValueError(f"unknown explanation template {template_id!r}")
    others = frozenset(VALUE_TAGS) - intentions
    text = TEMPLATES[template_id]
    text = text.replace("<rule_ids>", _join_ids(rule_ids))
    text = text.replace("<intentions>", _join_tags(intentions))
    text = text.replace("<other_values>", _join_tags(others))
    return text


@dataclass(frozen=True)
class EvaluationResult:
    """Verdict of the desirability evaluation for one behaviour."""

    desirability: int                 # 1 desirable, 0 not
    branch: Branch
    risk: float                       # situation risk under the mode used
    risk_mode: str
    risk_spec: GammaSpec
    template_id: int
    explanation: str
    failed_value: Optional[str] = None   # value gate that decided a 0


# ======================================================================
# Gate helpers
# ======================================================================


def _utility_for(tag: str, autonomy_utility: float, wellbeing_utility: float) -> float:
    return wellbeing_utility if tag == WELLBEING else autonomy_utility


def _bend_value_gates(
    profile: CharacterProfile,
    opinion: CaseOpinion,
    autonomy_utility: float,
    wellbeing_utility: float,
) -> Optional[str]:
    """First value failing a bend, or None if all pass.

    Values the precedent stance serves must clear the gain floor;
    every other value must stay above the loss floor.
    """
    for tag in VALUE_TAGS:
        gain_floor, loss_floor = value_thresholds(profile.weight_for(tag))
        utility = _utility_for(tag, autonomy_utility, wellbeing_utility)
        floor = gain_floor if tag in opinion.intentions else loss_floor
        if utility < floor:
            return tag
    return None


def _suppress_value_gates(
    profile: CharacterProfile,
    opinion: CaseOpinion,
    autonomy_utility: float,
    wellbeing_utility: float,
) -> Optional[str]:
    """First value failing a suppress, or None.

    Only the values the adverse stance is oriented toward are checked,
    against the loss floor.
    """
    for tag in VALUE_TAGS:
        if tag not in opinion.intentions:
            continue
        _, loss_floor = value_thresholds(profile.weight_for(tag))
        if _utility_for(tag, autonomy_utility, wellbeing_utility) < loss_floor:
            return tag
    return None


# ======================================================================
# Evaluation
# ======================================================================


def evaluate(
    behaviour: Behaviour,
    ctx: DecisionContext,
    profile: CharacterProfile,
    verdict: RuleVerdict,
    opinion: CaseOpinion,
    autonomy_utility: float,
    wellbeing_utility: float,
    risk_mode: str = "literal",
) -> EvaluationResult:
    """Decide desirability of one candidate behaviour.

    Total over all inputs: always returns a result with desirability in
    {0, 1}, an assigned branch, and a rendered explanation.  The risk is
    computed for every branch (it is logged), but only the contested
    branches gate on it.
    """
    spec = situation_spec(ctx)
    risk = behaviour_risk(spec, mode=risk_mode)
    rule_ids = verdict.violated_rule_ids
    intentions = opinion.intentions

    def result(
        desirability: int,
        branch: Branch,
        template_id: int,
        failed_value: Optional[str] = None,
    ) -> EvaluationResult:
        return EvaluationResult(
            desirability=desirability,
            branch=branch,
            risk=risk,
            risk_mode=risk_mode,
            risk_spec=spec,
            template_id=template_id,
            explanation=render_explanation(template_id, rule_ids, intentions),
            failed_value=failed_value,
        )

    broken = not verdict.permissible
    if not broken and opinion.acceptable:
        return result(1, Branch.COMPLIANT_SUPPORTED, TEMPLATE_COMPLIANT_SUPPORTED)
    if broken and not opinion.acceptable:
        return result(
            0, Branch.NONCOMPLIANT_UNSUPPORTED, TEMPLATE_NONCOMPLIANT_UNSUPPORTED
        )

    if broken:
        # Bend: precedent supports acting against the rule book.
        failed = _bend_value_gates(
            profile, opinion, autonomy_utility, wellbeing_utility
        )
        if failed is not None:
            return result(0, Branch.BEND_EVALUATED, TEMPLATE_BEND_VALUE, failed)
        if risk > risk_threshold(profile.risk_propensity):
            return result(0, Branch.BEND_EVALUATED, TEMPLATE_BEND_RISK)
        return result(1, Branch.BEND_EVALUATED, TEMPLATE_BEND_ACCEPTED)

    # Suppress: precedent opposes a rule-compliant action.
    failed = _suppress_value_gates(
        profile, opinion, autonomy_utility, wellbeing_utility
    )
    if failed is not None:
        template = (
            TEMPLATE_SUPPRESS_WELLBEING
            if failed == WELLBEING
            else TEMPLATE_SUPPRESS_AUTONOMY
        )
        return result(0, Branch.SUPPRESS_EVALUATED, template, failed)
    if risk > risk_threshold(profile.risk_propensity):
        return result(0, Branch.SUPPRESS_EVALUATED, TEMPLATE_SUPPRESS_RISK)
    return result(1, Branch.SUPPRESS_EVALUATED, TEMPLATE_SUPPRESS_OVERRIDDEN)
