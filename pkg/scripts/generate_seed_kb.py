#!/usr/bin/env python3
"""Regenerate the packaged seed case base (src/rulebend/data/seed_kb.jsonl).

The seed base covers the six reference situations (severity 1..3 crossed
with 0 or 2 already-missed doses).  For each situation it seeds:

* the three escalation behaviours at the first two breach decisions
  (follow-up counts 1 and 3, reminder acknowledged but not acted on),
* the post-snooze window decisions (follow-up counts 0, 2, 4), including
  one record and one report precedent at the deepest window,
* the single-candidate decisions (fresh reminder, granting a snooze,
  waiting after an acknowledgement) so routine steps always retrieve an
  exact precedent.

Utilities are computed with the package's own functions so the stored
features always agree with what a live query computes.  Labels encode
the care-team position for each situation: early follow-ups respect
autonomy, silent records are tolerable only for low-severity medication,
and reports are the accepted course once severity is high.

Run from the repository root:  python3 scripts/generate_seed_kb.py
"""

from __future__ import annotations

import sys
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from rulebend.casekb import Case, CaseBase
from rulebend.model import (
    Behaviour,
    BehaviourKind,
    DecisionContext,
    Instruction,
    ReminderState,
    AUTONOMY,
    WELLBEING,
)
from rulebend.utility import autonomy_utility, wellbeing_utility

OUT = SRC / "rulebend" / "data" / "seed_kb.jsonl"

#: the six reference situations: (situation number, severity, missed doses)
SITUATIONS = [(1, 1, 0.0), (2, 2, 0.0), (3, 3, 0.0),
              (4, 1, 2.0), (5, 2, 2.0), (6, 3, 2.0)]

ACC = 1.0
UNACC = 0.0

# (acceptability, intention) per situation / behaviour / follow-up count
# at breach decisions (reminder acknowledged, dose still not taken).
# Follow-up stances are seeded densely (1, 3, 4, 5 prior follow-ups): the
# dense band keeps deep-cycle retrievals anchored to precedents from the
# same situation rather than same-shaped ones from other severities.
_FU_COUNTS = (1, 3, 4, 5)


def _fu_band(early, late):
    """Follow-up labels: `early` at one prior follow-up, `late` beyond."""
    return {1: early, 3: late, 4: late, 5: late}


BREACH_LABELS = {
    1: {
        BehaviourKind.FOLLOW_UP: _fu_band((ACC, AUTONOMY), (ACC, AUTONOMY)),
        BehaviourKind.RECORD: {1: (UNACC, AUTONOMY), 3: (ACC, AUTONOMY)},
        BehaviourKind.REPORT: {1: (UNACC, AUTONOMY), 3: (UNACC, AUTONOMY)},
    },
    2: {
        BehaviourKind.FOLLOW_UP: _fu_band((ACC, AUTONOMY), (UNACC, AUTONOMY)),
        BehaviourKind.RECORD: {1: (UNACC, AUTONOMY), 3: (UNACC, AUTONOMY)},
        BehaviourKind.REPORT: {1: (UNACC, AUTONOMY), 3: (UNACC, AUTONOMY)},
    },
    3: {
        BehaviourKind.FOLLOW_UP: _fu_band((UNACC, WELLBEING), (UNACC, WELLBEING)),
        BehaviourKind.RECORD: {1: (UNACC, WELLBEING), 3: (UNACC, WELLBEING)},
        BehaviourKind.REPORT: {1: (ACC, WELLBEING), 3: (ACC, WELLBEING)},
    },
    4: {
        BehaviourKind.FOLLOW_UP: _fu_band((ACC, AUTONOMY), (ACC, AUTONOMY)),
        BehaviourKind.RECORD: {1: (ACC, AUTONOMY), 3: (ACC, AUTONOMY)},
        BehaviourKind.REPORT: {1: (UNACC, AUTONOMY), 3: (UNACC, AUTONOMY)},
    },
}
BREACH_LABELS[5] = BREACH_LABELS[3]
BREACH_LABELS[6] = BREACH_LABELS[3]

# Post-snooze window decisions (instruction already honoured, window over).
WINDOW_FOLLOW_UPS = (0, 2, 4)
WINDOW_FU_LABEL = (ACC, AUTONOMY)
WINDOW_RECORD_LABEL = (UNACC, WELLBEING)   # giving up silently harms care
WINDOW_REPORT_LABEL = (UNACC, AUTONOMY)    # escalating over a granted snooze

REMIND_LABEL = (ACC, WELLBEING)
SNOOZE_LABEL = (ACC, AUTONOMY)
ACK_WAIT_LABEL = (ACC, AUTONOMY)


def make_case(case_id, ctx, behaviour, label):
    acceptability, intention = label
    return Case(
        case_id=case_id,
        epsilon_m=ctx.epsilon_m,
        missed_doses=ctx.missed_doses,
        follow_ups=ctx.follow_ups,
        reminder_state=ctx.reminder_state,
        acknowledged_without_taking=ctx.acknowledged_without_taking,
        behaviour=behaviour.kind,
        autonomy_utility=autonomy_utility(behaviour, ctx),
        wellbeing_utility=wellbeing_utility(behaviour, ctx)[0],
        acceptability=acceptability,
        intention=(intention,),
    )


def breach_context(eps, d, f):
    return DecisionContext(
        epsilon_m=eps, missed_doses=d, follow_ups=f,
        reminder_state=ReminderState.ACKNOWLEDGED,
        last_instruction=Instruction.ACKNOWLEDGE,
        instruction_pending=False, acknowledged_without_taking=True,
        snoozes_granted=0, snooze_remaining=0, step=0,
    )


def window_context(eps, d, f):
    return DecisionContext(
        epsilon_m=eps, missed_doses=d, follow_ups=f,
        reminder_state=ReminderState.SNOOZED,
        last_instruction=Instruction.SNOOZE,
        instruction_pending=False, acknowledged_without_taking=False,
        snoozes_granted=0, snooze_remaining=0, step=0,
    )


def build() -> CaseBase:
    cases = []
    for n, eps, d in SITUATIONS:
        # breach precedents
        for kind in (BehaviourKind.FOLLOW_UP, BehaviourKind.RECORD,
                     BehaviourKind.REPORT):
            counts = _FU_COUNTS if kind is BehaviourKind.FOLLOW_UP else (1, 3)
            for f in counts:
                ctx = breach_context(eps, d, f)
                label = BREACH_LABELS[n][kind][f]
                cases.append(make_case(
                    f"c{n}-breach-{kind.value}-f{f}", ctx,
                    Behaviour(kind), label))
        # post-snooze window precedents
        for f in WINDOW_FOLLOW_UPS:
            ctx = window_context(eps, d, f)
            cases.append(make_case(
                f"c{n}-window-follow_up-f{f}", ctx,
                Behaviour(BehaviourKind.FOLLOW_UP), WINDOW_FU_LABEL))
        deep = window_context(eps, d, 4)
        cases.append(make_case(
            f"c{n}-window-record-f4", deep,
            Behaviour(BehaviourKind.RECORD), WINDOW_RECORD_LABEL))
        cases.append(make_case(
            f"c{n}-window-report-f4", deep,
            Behaviour(BehaviourKind.REPORT), WINDOW_REPORT_LABEL))
        # single-candidate decisions
        fresh = DecisionContext(
            epsilon_m=eps, missed_doses=d, follow_ups=0,
            reminder_state=ReminderState.ISSUED, last_instruction=None,
            instruction_pending=False, acknowledged_without_taking=False,
            snoozes_granted=0, snooze_remaining=0, step=0,
        )
        cases.append(make_case(
            f"c{n}-remind-f0", fresh, Behaviour(BehaviourKind.REMIND),
            REMIND_LABEL))
        for f in WINDOW_FOLLOW_UPS:
            ctx = DecisionContext(
                epsilon_m=eps, missed_doses=d, follow_ups=f,
                reminder_state=ReminderState.SNOOZED,
                last_instruction=Instruction.SNOOZE,
                instruction_pending=True, acknowledged_without_taking=False,
                snoozes_granted=0, snooze_remaining=0, step=0,
            )
            cases.append(make_case(
                f"c{n}-snooze-f{f}", ctx,
                Behaviour(BehaviourKind.SNOOZE, obeys=Instruction.SNOOZE),
                SNOOZE_LABEL))
        for f in (1, 3):
            ctx = DecisionContext(
                epsilon_m=eps, missed_doses=d, follow_ups=f,
                reminder_state=ReminderState.ACKNOWLEDGED,
                last_instruction=Instruction.ACKNOWLEDGE,
                instruction_pending=True, acknowledged_without_taking=False,
                snoozes_granted=0, snooze_remaining=0, step=0,
            )
            cases.append(make_case(
                f"c{n}-ackwait-f{f}", ctx,
                Behaviour(BehaviourKind.ACK_WAIT,
                          obeys=Instruction.ACKNOWLEDGE),
                ACK_WAIT_LABEL))
    return CaseBase(cases)


def main() -> int:
    kb = build()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    kb.save(OUT)
    print(f"wrote {len(kb)} cases -> {OUT}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
