"""Case knowledge base: reviewed precedent decisions and KNN lookup.

A case records one reviewed stance: in a situation with these features,
this behaviour was (un)acceptable, and the judgement was oriented toward
this value dimension.  Queries are answered by the K nearest cases under
a normalized euclidean distance; near-exact matches dominate through a
step-up weight.

The feature layout is versioned.  Categorical fields are one-hot so a
single category flip always costs the same distance regardless of how
the category values happen to be numbered; the two utilities enter as
plain scalars.  The distance divides by sqrt(dimension), keeping any
single-coordinate difference within [0, ~0.28] and the 0.1 near-match
radius meaningful.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .model import (
    Behaviour,
    BehaviourKind,
    DecisionContext,
    ReminderState,
    RuleVerdict,
    VALUE_TAGS,
)

FORMAT_VERSION = 1

#: Number of neighbours consulted unless the caller overrides it.
DEFAULT_NEIGHBOURS = 3

#: Distance at or below which a case counts as a near-exact precedent.
NEAR_MATCH_RADIUS = 0.1

#: Weight given to near-exact precedents; farther cases weigh 1/distance.
NEAR_MATCH_WEIGHT = 10.0

_EPSILON_CLASSES = (1, 2, 3)
_MISSED_BUCKETS = ("0", "1", "2", "3", "4plus")
_FOLLOW_UP_BUCKETS = ("0", "1", "2", "3plus")
_STATES = tuple(state.value for state in ReminderState)

#: The behaviour kinds cases may be recorded for.  Restraint is not a
#: case-base concept: it is never proposed, so never judged.
_CASE_KINDS = (
    BehaviourKind.REMIND,
    BehaviourKind.SNOOZE,
    BehaviourKind.FOLLOW_UP,
    BehaviourKind.RECORD,
    BehaviourKind.REPORT,
    BehaviourKind.ACK_WAIT,
)

FEATURE_NAMES: Tuple[str, ...] = (
    tuple(f"epsilon_{e}" for e in _EPSILON_CLASSES)
    + tuple(f"missed_{b}" for b in _MISSED_BUCKETS)
    + tuple(f"follow_ups_{b}" for b in _FOLLOW_UP_BUCKETS)
    + tuple(f"state_{s}" for s in _STATES)
    + ("acknowledged_without_taking",)
    + tuple(f"behaviour_{k.value}" for k in _CASE_KINDS)
    + ("autonomy_utility", "wellbeing_utility")
)

DIMENSION = len(FEATURE_NAMES)
_DISTANCE_DIVISOR = math.sqrt(DIMENSION)


class KBError(Exception):
    """Raised for malformed case-base files or queries."""


def _missed_bucket(missed_doses: float) -> int:
    if missed_doses < 0:
        raise KBError(f"missed_doses cannot be negative: {missed_doses!r}")
    return min(int(missed_doses), 4)


def _follow_up_bucket(follow_ups: int) -> int:
    if follow_ups < 0:
        raise KBError(f"follow_ups cannot be negative: {follow_ups!r}")
    return min(follow_ups, 3)


def feature_vector(
    epsilon_m: int,
    missed_doses: float,
    follow_ups: int,
    reminder_state: ReminderState,
    acknowledged_without_taking: bool,
    behaviour: BehaviourKind,
    autonomy_utility: float,
    wellbeing_utility: float,
) -> Tuple[float, ...]:
    """Encode one (situation, behaviour, utilities) point.

    Requires: epsilon_m in {1,2,3}; behaviour one of the six case kinds.
    Ensures:  a DIMENSION-long tuple matching FEATURE_NAMES.
    """
    if epsilon_m not in _EPSILON_CLASSES:
        raise KBError(f"epsilon_m must be 1..3, got {epsilon_m!r}")
    if behaviour not in _CASE_KINDS:
        raise KBError(f"behaviour {behaviour!r} is not case-base encodable")
    features = [0.0] * DIMENSION
    features[_EPSILON_CLASSES.index(epsilon_m)] = 1.0
    offset = len(_EPSILON_CLASSES)
    features[offset + _missed_bucket(missed_doses)] = 1.0
    offset += len(_MISSED_BUCKETS)
    features[offset + _follow_up_bucket(follow_ups)] = 1.0
    offset += len(_FOLLOW_UP_BUCKETS)
    features[offset + _STATES.index(reminder_state.value)] = 1.0
    offset += len(_STATES)
    features[offset] = 1.0 if acknowledged_without_taking else 0.0
    offset += 1
    features[offset + _CASE_KINDS.index(behaviour)] = 1.0
    offset += len(_CASE_KINDS)
    features[offset] = float(autonomy_utility)
    features[offset + 1] = float(wellbeing_utility)
    return tuple(features)


def distance(u: Sequence[float], v: Sequence[float]) -> float:
    """Normalized euclidean distance between two feature vectors."""
    if len(u) != DIMENSION or len(v) != DIMENSION:
        raise KBError("feature vectors must match the manifest dimension")
    return math.sqrt(math.fsum((a - b) ** 2 for a, b in zip(u, v))) / _DISTANCE_DIVISOR


def case_weight(dist: float) -> float:
    """Vote weight of a retrieved case at the given distance."""
    if dist < 0:
        raise KBError(f"distance cannot be negative: {dist!r}")
    if dist <= NEAR_MATCH_RADIUS:
        return NEAR_MATCH_WEIGHT
    return 1.0 / dist


@dataclass(frozen=True)
class Case:
    """One reviewed precedent."""

    case_id: str
    epsilon_m: int
    missed_doses: float
    follow_ups: int
    reminder_state: ReminderState
    acknowledged_without_taking: bool
    behaviour: BehaviourKind
    autonomy_utility: float
    wellbeing_utility: float
    acceptability: float              # 0 (unacceptable) .. 1 (acceptable)
    intention: Tuple[str, ...]        # value dimension(s) the stance serves

    def __post_init__(self) -> None:
        if not self.case_id:
            raise KBError("case_id must be non-empty")
        if not (0.0 <= self.acceptability <= 1.0):
            raise KBError(f"acceptability outside [0,1]: {self.acceptability!r}")
        if not self.intention:
            raise KBError(f"case {self.case_id}: intention must be non-empty")
        for tag in self.intention:
            if tag not in VALUE_TAGS:
                raise KBError(f"case {self.case_id}: unknown intention {tag!r}")
        if tuple(sorted(self.intention)) != self.intention:
            raise KBError(f"case {self.case_id}: intention tags must be sorted")

    def features(self) -> Tuple[float, ...]:
        return feature_vector(
            self.epsilon_m,
            self.missed_doses,
            self.follow_ups,
            self.reminder_state,
            self.acknowledged_without_taking,
            self.behaviour,
            self.autonomy_utility,
            self.wellbeing_utility,
        )


@dataclass(frozen=True)
class TraceEntry:
    """One consulted neighbour, as logged for transparency."""

    case_id: str
    distance: float
    weight: float
    acceptability: float
    intention: Tuple[str, ...]


@dataclass(frozen=True)
class CaseOpinion:
    """Aggregated precedent stance on one candidate behaviour."""

    acceptable: bool
    score: float
    intentions: FrozenSet[str]
    trace: Tuple[TraceEntry, ...]


class CaseBase:
    """An in-memory, immutable-by-convention collection of cases."""

    def __init__(self, cases: Iterable[Case] = ()):
        self._cases: List[Case] = list(cases)
        seen = set()
        for case in self._cases:
            if case.case_id in seen:
                raise KBError(f"duplicate case id {case.case_id!r}")
            seen.add(case.case_id)
        self._features = [case.features() for case in self._cases]

    def __len__(self) -> int:
        return len(self._cases)

    @property
    def cases(self) -> Tuple[Case, ...]:
        return tuple(self._cases)

    # ------------------------------------------------------------------
    # retrieval
    # ------------------------------------------------------------------

    def retrieve(
        self, query: Sequence[float], k: int = DEFAULT_NEIGHBOURS
    ) -> List[Tuple[Case, float]]:
        """K nearest cases to the query vector.

        Requires: k >= 1.
        Ensures:  at most k (case, distance) pairs ordered by ascending
                  distance, equal distances ordered by case id.
        """
        if k < 1:
            raise KBError(f"k must be >= 1, got {k!r}")
        scored = [
            (distance(query, feats), case.case_id, case)
            for case, feats in zip(self._cases, self._features)
        ]
        scored.sort(key=lambda item: (item[0], item[1]))
        return [(case, dist) for dist, _, case in scored[:k]]

    def consult(
        self,
        behaviour: Behaviour,
        ctx: DecisionContext,
        autonomy_utility: float,
        wellbeing_utility: float,
        verdict: RuleVerdict,
        k: int = DEFAULT_NEIGHBOURS,
    ) -> CaseOpinion:
        """Weighted-vote opinion of the K nearest precedents.

        The acceptability score is the weighted mean over neighbours;
        the behaviour is acceptable when the score reaches 0.5.  The
        opinion's intentions are the union of intention tags over the
        neighbours on the winning side of that vote.

        With no knowledge at all, the opinion defers to the rule
        verdict: permissible behaviours read as acceptable (score 1.0)
        and impermissible ones as unacceptable (score 0.0), with no
        intentions and an empty trace.
        """
        if not self._cases:
            permissible = verdict.permissible
            return CaseOpinion(
                acceptable=permissible,
                score=1.0 if permissible else 0.0,
                intentions=frozenset(),
                trace=(),
            )
        query = feature_vector(
            ctx.epsilon_m,
            ctx.missed_doses,
            ctx.follow_ups,
            ctx.reminder_state,
            ctx.acknowledged_without_taking,
            behaviour.kind,
            autonomy_utility,
            wellbeing_utility,
        )
        neighbours = self.retrieve(query, k=k)
        weights = [case_weight(dist) for _, dist in neighbours]
        total = math.fsum(weights)
        score = math.fsum(
            w * case.acceptability for (case, _), w in zip(neighbours, weights)
        ) / total
        acceptable = score >= 0.5
        winning: set = set()
        for (case, _), _w in zip(neighbours, weights):
            on_winning_side = (
                case.acceptability >= 0.5 if acceptable else case.acceptability < 0.5
            )
            if on_winning_side:
                winning.update(case.intention)
        trace = tuple(
            TraceEntry(
                case_id=case.case_id,
                distance=dist,
                weight=w,
                acceptability=case.acceptability,
                intention=case.intention,
            )
            for (case, dist), w in zip(neighbours, weights)
        )
        return CaseOpinion(
            acceptable=acceptable,
            score=score,
            intentions=frozenset(winning),
            trace=trace,
        )

    # ------------------------------------------------------------------
    # persistence (JSON lines with a header record)
    # ------------------------------------------------------------------

    def save(self, path: Path | str) -> None:
        path = Path(path)
        lines = [json.dumps(_header(), sort_keys=True)]
        for case in self._cases:
            record = asdict(case)
            record["record_type"] = "case"
            record["reminder_state"] = case.reminder_state.value
            record["behaviour"] = case.behaviour.value
            record["intention"] = list(case.intention)
            lines.append(json.dumps(record, sort_keys=True))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Path | str) -> "CaseBase":
        path = Path(path)
        if not path.exists():
            raise KBError(f"case base not found: {path}")
        raw_lines = [
            line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()
        ]
        if not raw_lines:
            raise KBError(f"case base {path} is empty (missing header)")
        header = _parse_json(raw_lines[0], path, 1)
        _check_header(header, path)
        cases = []
        for lineno, line in enumerate(raw_lines[1:], start=2):
            record = _parse_json(line, path, lineno)
            if record.get("record_type") != "case":
                raise KBError(f"{path}:{lineno}: expected a case record")
            cases.append(_case_from_record(record, path, lineno))
        return cls(cases)


def _header() -> Dict[str, object]:
    return {
        "record_type": "header",
        "format_version": FORMAT_VERSION,
        "dimension": DIMENSION,
        "feature_names": list(FEATURE_NAMES),
        "neighbours": DEFAULT_NEIGHBOURS,
        "near_match_radius": NEAR_MATCH_RADIUS,
        "near_match_weight": NEAR_MATCH_WEIGHT,
    }


def _parse_json(line: str, path: Path, lineno: int) -> Dict[str, object]:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise KBError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
    if not isinstance(record, dict):
        raise KBError(f"{path}:{lineno}: record must be an object")
    return record


def _check_header(header: Dict[str, object], path: Path) -> None:
    if header.get("record_type") != "header":
        raise KBError(f"{path}: first record must be the header")
    if header.get("format_version") != FORMAT_VERSION:
        raise KBError(
            f"{path}: unsupported format_version {header.get('format_version')!r}; "
            f"this build reads version {FORMAT_VERSION}"
        )
    if header.get("feature_names") != list(FEATURE_NAMES):
        raise KBError(f"{path}: feature manifest does not match this build")
    if header.get("dimension") != DIMENSION:
        raise KBError(f"{path}: header dimension does not match this build")


_REQUIRED_CASE_KEYS = {
    "case_id",
    "epsilon_m",
    "missed_doses",
    "follow_ups",
    "reminder_state",
    "acknowledged_without_taking",
    "behaviour",
    "autonomy_utility",
    "wellbeing_utility",
    "acceptability",
    "intention",
}


def _case_from_record(record: Dict[str, object], path: Path, lineno: int) -> Case:
    missing = _REQUIRED_CASE_KEYS - record.keys()
    if missing:
        raise KBError(f"{path}:{lineno}: case missing keys {sorted(missing)}")
    try:
        return Case(
            case_id=str(record["case_id"]),
            epsilon_m=int(record["epsilon_m"]),
            missed_doses=float(record["missed_doses"]),
            follow_ups=int(record["follow_ups"]),
            reminder_state=ReminderState(record["reminder_state"]),
            acknowledged_without_taking=bool(record["acknowledged_without_taking"]),
            behaviour=BehaviourKind(record["behaviour"]),
            autonomy_utility=float(record["autonomy_utility"]),
            wellbeing_utility=float(record["wellbeing_utility"]),
            acceptability=float(record["acceptability"]),
            intention=tuple(record["intention"]),
        )
    except (KBError, ValueError, TypeError) as exc:
        raise KBError(f"{path}:{lineno}: invalid case record ({exc})") from exc
