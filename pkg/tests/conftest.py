import json
from pathlib import Path

import pytest

from rulebend.casekb import CaseBase
from rulebend.cli import load_profiles, _packaged
from rulebend.model import (
    DecisionContext,
    Instruction,
    ReminderState,
)
from rulebend.sim import Scenario

DATA = Path(_packaged(""))


@pytest.fixture(scope="session")
def seed_kb() -> CaseBase:
    return CaseBase.load(DATA / "seed_kb.jsonl")


@pytest.fixture(scope="session")
def profiles():
    return load_profiles(DATA / "profiles.json")


@pytest.fixture(scope="session")
def expected_grid():
    data = json.loads((DATA / "expected_matrix.json").read_text(encoding="utf-8"))
    return data["grid"]


@pytest.fixture
def scenario():
    def _load(name: str) -> Scenario:
        return Scenario.from_file(DATA / "scenarios" / f"{name}.json")

    return _load


def breach_context(epsilon_m=1, missed_doses=0.0, follow_ups=1, snoozes=1, step=10):
    """A breach decision: reminder acknowledged, dose still untaken."""
    return DecisionContext(
        epsilon_m=epsilon_m,
        missed_doses=missed_doses,
        follow_ups=follow_ups,
        reminder_state=ReminderState.ACKNOWLEDGED,
        last_instruction=Instruction.ACKNOWLEDGE,
        instruction_pending=False,
        acknowledged_without_taking=True,
        snoozes_granted=snoozes,
        snooze_remaining=0,
        step=step,
    )


def pending_context(instruction=Instruction.SNOOZE, follow_ups=0, step=2):
    state = (
        ReminderState.SNOOZED
        if instruction is Instruction.SNOOZE
        else ReminderState.ACKNOWLEDGED
    )
    return DecisionContext(
        epsilon_m=1,
        missed_doses=0.0,
        follow_ups=follow_ups,
        reminder_state=state,
        last_instruction=instruction,
        instruction_pending=True,
        acknowledged_without_taking=False,
        snoozes_granted=0,
        snooze_remaining=0,
        step=step,
    )
