"""Command-line harness.

Commands:
  run        simulate one scenario with one character profile
  matrix     run the 6x4 scenario/profile grid and diff it against the
             packaged reference grid
  calibrate  grid-search character trait triples that reproduce a target
             grid column per profile
  kb-trace   show the nearest precedents for a query
  validate   check data files without running anything

Exit codes: 0 success/match, 1 invalid input, 2 mismatch, 3 runtime failure.
"""

import argparse
import csv
import io
import json
import logging
import sys
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .casekb import CaseBase, KBError, case_weight, feature_vector
from .model import (
    AUTONOMY,
    Behaviour,
    BehaviourKind,
    CharacterProfile,
    ContextError,
    DecisionContext,
    Instruction,
    ModelError,
    ProfileError,
    ReminderState,
    WELLBEING,
    validate_profile,
)
from .rules import evaluate_rules
from .sim import (
    MAX_STEPS,
    Scenario,
    ScenarioError,
    SignatureRegistry,
    behaviour_id,
    run_episode,
)
from .utility import RISK_MODES, autonomy_utility, wellbeing_utility

log = logging.getLogger("rulebend")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MISMATCH = 2
EXIT_RUNTIME = 3

PROFILES_FORMAT_VERSION = 1
PROFILE_ORDER = ("A", "AR", "ARW", "WR")
CASE_ORDER = tuple(f"case{i}" for i in range(1, 7))

#: qualitative trait constraints used by `calibrate`, per profile.  Each
#: entry maps trait -> (lo, hi) inclusive; `extra` is a predicate over
#: the (wellbeing, autonomy, risk) triple.
TRAIT_RANGE = (0, 10)
CALIBRATION_CONSTRAINTS = {
    "A": {
        "precedence": (AUTONOMY,),
        "ranges": {"wellbeing": (0, 10), "autonomy": (6, 10), "risk": (0, 1)},
    },
    "AR": {
        "precedence": (AUTONOMY,),
        "ranges": {"wellbeing": (0, 10), "autonomy": (6, 10), "risk": (6, 10)},
    },
    "ARW": {
        "precedence": (AUTONOMY,),
        "ranges": {"wellbeing": (3, 7), "autonomy": (3, 7), "risk": (3, 7)},
        "predicate": lambda w, a, r: a > w,
    },
    "WR": {
        "precedence": (WELLBEING,),
        "ranges": {"wellbeing": (6, 10), "autonomy": (0, 10), "risk": (0, 10)},
    },
}

# short action codes for the text timeline
_TIMELINE_CODES = {
    "remind": "RM",
    "snooze": "SZ",
    "follow_up": "FU",
    "record": "RC",
    "report": "RP",
    "acknowledge_wait": "AW",
    "observe_medication_taken": "OK",
}
_RESIDENT_CODES = {"snooze": "S", "acknowledge": "A"}


def _packaged(name: str) -> Path:
    return Path(str(resources.files("rulebend").joinpath("data", name)))


def load_profiles(path: Path | str) -> Dict[str, CharacterProfile]:
    """Read a profiles file into validated CharacterProfile objects."""
    path = Path(path)
    if not path.exists():
        raise ProfileError(f"profiles file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ProfileError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict) or data.get("format_version") != PROFILES_FORMAT_VERSION:
        raise ProfileError(
            f"{path}: expected format_version {PROFILES_FORMAT_VERSION}"
        )
    raw = data.get("profiles")
    if not isinstance(raw, dict) or not raw:
        raise ProfileError(f"{path}: no profiles defined")
    profiles = {}
    for name, entry in raw.items():
        try:
            profile = CharacterProfile(
                name=name,
                wellbeing=float(entry["wellbeing"]),
                autonomy=float(entry["autonomy"]),
                risk_propensity=float(entry["risk_propensity"]),
                precedence=frozenset(entry["precedence"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProfileError(f"{path}: profile {name!r} invalid ({exc})") from exc
        validate_profile(profile)
        profiles[name] = profile
    return profiles


def _load_kb(path_arg: Optional[str]) -> CaseBase:
    path = Path(path_arg) if path_arg else _packaged("seed_kb.jsonl")
    if not path.exists():
        raise KBError(f"case base not found: {path}")
    return CaseBase.load(path)


def _load_profile_set(path_arg: Optional[str]) -> Dict[str, CharacterProfile]:
    path = Path(path_arg) if path_arg else _packaged("profiles.json")
    return load_profiles(path)


def _resolve_scenario(token: str) -> Scenario:
    """Accept a scenario file path or a packaged scenario name (case1..6)."""
    path = Path(token)
    if path.exists():
        return Scenario.from_file(path)
    if token in CASE_ORDER:
        return Scenario.from_file(_packaged(f"scenarios/{token}.json"))
    raise ScenarioError(f"scenario file not found: {token}")


def _load_expected(path_arg: Optional[str]) -> Dict[str, Dict[str, int]]:
    path = Path(path_arg) if path_arg else _packaged("expected_matrix.json")
    if not path.exists():
        raise ModelError(f"reference grid not found: {path}")
    data = json.loads(path.read_text(encoding="utf-8"))
    if data.get("format_version") != 1 or "grid" not in data:
        raise ModelError(f"{path}: not a reference grid file")
    return {
        case: {prof: int(v) for prof, v in row.items()}
        for case, row in data["grid"].items()
    }


# ----------------------------------------------------------------------
# run
# ----------------------------------------------------------------------


def _utilities_csv(log_obj) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "behavior", "Au", "W", "risk", "D"])
    for rec in log_obj.steps:
        decision = rec.get("decision")
        if not decision:
            continue
        for entry in decision["entries"]:
            writer.writerow(
                [
                    rec["step"],
                    entry["behaviour"],
                    repr(entry["autonomy_utility"]),
                    repr(entry["wellbeing_utility"]),
                    repr(entry["risk"]),
                    entry["desirability"],
                ]
            )
    return buf.getvalue()


def _timeline_text(log_obj) -> str:
    steps = [rec["step"] for rec in log_obj.steps]
    resident_row, robot_row, recommend_row = [], [], []
    for rec in log_obj.steps:
        resident_row.append(_RESIDENT_CODES.get(rec["resident"], "."))
        action = rec["robot_action"]
        robot_row.append(_TIMELINE_CODES.get(action, ".") if action else ".")
        decision = rec.get("decision")
        if decision:
            code = _TIMELINE_CODES.get(decision["recommended"], "??")
            if decision["fallback"]:
                code += "*"
            recommend_row.append(code)
        else:
            recommend_row.append(".")

    def fmt(label: str, cells: List[str]) -> str:
        return f"{label:<12}| " + " ".join(f"{c:>3}" for c in cells)

    lines = [
        f"scenario: {log_obj.meta['scenario']}    profile: {log_obj.meta['profile']}"
        f"    risk mode: {log_obj.meta['risk_mode']}",
        f"terminal: {log_obj.terminal.value} (step {log_obj.terminal_step})",
        "",
        fmt("step", [str(s) for s in steps]),
        fmt("resident", resident_row),
        fmt("robot", robot_row),
        fmt("recommended", recommend_row),
        "",
        "legend: RM remind, SZ snooze granted, FU follow-up, AW wait after",
        "        acknowledgement, RC record, RP report, OK medication observed",
        "        taken, S snooze request, A acknowledgement, * fallback choice,",
        "        . no event",
    ]
    return "\n".join(lines) + "\n"


def cmd_run(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb)
    profiles = _load_profile_set(args.profiles)
    if args.profile not in profiles:
        raise ProfileError(
            f"unknown profile {args.profile!r}; have {sorted(profiles)}"
        )
    scenario = _resolve_scenario(args.scenario)
    episode = run_episode(scenario, profiles[args.profile], kb, risk_mode=args.risk_mode)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "episode.jsonl").write_text(episode.to_jsonl(), encoding="utf-8")
    (out / "utilities.csv").write_text(_utilities_csv(episode), encoding="utf-8")
    (out / "timeline.txt").write_text(_timeline_text(episode), encoding="utf-8")
    print(
        f"{scenario.name} / {args.profile}: behaviour class {behaviour_id(episode)}, "
        f"terminal {episode.terminal.value} at step {episode.terminal_step}"
    )
    print(f"wrote episode.jsonl, utilities.csv, timeline.txt -> {out}")
    return EXIT_OK


# ----------------------------------------------------------------------
# matrix
# ----------------------------------------------------------------------


def _run_matrix(
    kb: CaseBase,
    profiles: Dict[str, CharacterProfile],
    risk_mode: str,
    profile_names: Tuple[str, ...] = PROFILE_ORDER,
    case_names: Tuple[str, ...] = CASE_ORDER,
) -> Dict[str, Dict[str, int]]:
    registry = SignatureRegistry()
    grid: Dict[str, Dict[str, int]] = {}
    for case in case_names:
        scenario = _resolve_scenario(case)
        row = {}
        for name in profile_names:
            try:
                episode = run_episode(scenario, profiles[name], kb, risk_mode=risk_mode)
            except Exception as exc:
                raise RuntimeError(f"cell ({case}, {name}) failed: {exc}") from exc
            row[name] = behaviour_id(episode, registry)
        grid[case] = row
    return grid


def _matrix_table(grid: Dict[str, Dict[str, int]], names: Tuple[str, ...]) -> str:
    lines = ["        " + "".join(f"{n:>5}" for n in names)]
    for case in sorted(grid):
        lines.append(f"{case:<8}" + "".join(f"{grid[case][n]:>5}" for n in names))
    return "\n".join(lines) + "\n"


def cmd_matrix(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb)
    profiles = _load_profile_set(args.profiles)
    missing = [n for n in PROFILE_ORDER if n not in profiles]
    if missing:
        raise ProfileError(f"profiles file lacks {missing}")
    expected = _load_expected(args.expected)

    try:
        grid = _run_matrix(kb, profiles, args.risk_mode)
    except RuntimeError as exc:
        log.error("%s", exc)
        return EXIT_RUNTIME

    diff = []
    for case in CASE_ORDER:
        for name in PROFILE_ORDER:
            got = grid[case][name]
            want = expected.get(case, {}).get(name)
            if got != want:
                diff.append(
                    {"case": case, "profile": name, "got": got, "expected": want}
                )

    table = _matrix_table(grid, PROFILE_ORDER)
    report = {"grid": grid, "expected": expected, "diff": diff, "match": not diff}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "matrix.txt").write_text(
        table + ("\ndiff: none\n" if not diff else f"\ndiff: {len(diff)} cell(s)\n"),
        encoding="utf-8",
    )
    (out / "matrix.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    print(table, end="")
    if diff:
        for d in diff:
            print(
                f"MISMATCH {d['case']}/{d['profile']}: "
                f"got {d['got']}, expected {d['expected']}"
            )
        return EXIT_MISMATCH
    print("all 24 cells match the reference grid")
    return EXIT_OK


# ----------------------------------------------------------------------
# calibrate
# ----------------------------------------------------------------------


def _constrained_points(name: str):
    spec = CALIBRATION_CONSTRAINTS[name]
    lo_w, hi_w = spec["ranges"]["wellbeing"]
    lo_a, hi_a = spec["ranges"]["autonomy"]
    lo_r, hi_r = spec["ranges"]["risk"]
    predicate = spec.get("predicate", lambda w, a, r: True)
    for w in range(lo_w, hi_w + 1):
        for a in range(lo_a, hi_a + 1):
            for r in range(lo_r, hi_r + 1):
                if predicate(w, a, r):
                    yield (w, a, r)


def _profile_column(
    kb: CaseBase,
    profile: CharacterProfile,
    risk_mode: str,
    target: Dict[str, int],
    early_abort: bool = True,
) -> Tuple[int, Dict[str, int]]:
    """Matches against target per case; returns (match count, column)."""
    registry = SignatureRegistry()
    matches = 0
    column: Dict[str, int] = {}
    for case in CASE_ORDER:
        scenario = _resolve_scenario(case)
        episode = run_episode(scenario, profile, kb, risk_mode=risk_mode)
        got = behaviour_id(episode, registry)
        column[case] = got
        if got == target[case]:
            matches += 1
        elif early_abort:
            break
    return matches, column


def cmd_calibrate(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    log_lines: List[str] = []

    if args.constraints_only:
        profiles_dict = {}
        for name in PROFILE_ORDER:
            point = next(_constrained_points(name))
            spec = CALIBRATION_CONSTRAINTS[name]
            profiles_dict[name] = {
                "wellbeing": point[0],
                "autonomy": point[1],
                "risk_propensity": point[2],
                "precedence": list(spec["precedence"]),
            }
            log_lines.append(f"{name}: constraint-feasible default {point}")
        result = {"format_version": PROFILES_FORMAT_VERSION, "profiles": profiles_dict}
        (out / "calibrated_profiles.json").write_text(
            json.dumps(result, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        (out / "calibration_log.txt").write_text(
            "\n".join(log_lines) + "\n", encoding="utf-8"
        )
        print("\n".join(log_lines))
        return EXIT_OK

    if args.target:
        target_grid = _load_expected(args.target)
    else:
        target_grid = _load_expected(None)

    profiles_dict = {}
    any_missing = False
    for name in PROFILE_ORDER:
        spec = CALIBRATION_CONSTRAINTS[name]
        target_column = {case: target_grid[case][name] for case in CASE_ORDER}
        found = None
        tried = 0
        for point in _constrained_points(name):
            tried += 1
            profile = CharacterProfile(
                name=name,
                wellbeing=float(point[0]),
                autonomy=float(point[1]),
                risk_propensity=float(point[2]),
                precedence=frozenset(spec["precedence"]),
            )
            matches, column = _profile_column(
                kb, profile, args.risk_mode, target_column
            )
            if matches == len(CASE_ORDER):
                found = point
                break
        if found is not None:
            log_lines.append(
                f"{name}: found (C_w={found[0]}, C_au={found[1]}, C_rp={found[2]}) "
                f"after {tried} grid points (lexicographic order; further "
                f"solutions may exist)"
            )
            profiles_dict[name] = {
                "wellbeing": found[0],
                "autonomy": found[1],
                "risk_propensity": found[2],
                "precedence": list(spec["precedence"]),
            }
        else:
            any_missing = True
            # second pass without early abort: rank every point by its
            # true per-case match count for an honest nearest miss
            best = (-1, None, None)
            for point in _constrained_points(name):
                profile = CharacterProfile(
                    name=name,
                    wellbeing=float(point[0]),
                    autonomy=float(point[1]),
                    risk_propensity=float(point[2]),
                    precedence=frozenset(spec["precedence"]),
                )
                matches, column = _profile_column(
                    kb, profile, args.risk_mode, target_column, early_abort=False
                )
                if matches > best[0]:
                    best = (matches, point, column)
            matches, point, full_column = best
            misses = {
                case: {"got": full_column[case], "want": target_column[case]}
                for case in CASE_ORDER
                if full_column[case] != target_column[case]
            }
            log_lines.append(
                f"{name}: no trait triple in the constrained grid reproduces the "
                f"target column; nearest miss (C_w={point[0]}, C_au={point[1]}, "
                f"C_rp={point[2]}) matches {matches}/{len(CASE_ORDER)}; "
                f"mismatches: {json.dumps(misses, sort_keys=True)}"
            )

    (out / "calibration_log.txt").write_text(
        "\n".join(log_lines) + "\n", encoding="utf-8"
    )
    print("\n".join(log_lines))
    if any_missing:
        return EXIT_MISMATCH
    result = {"format_version": PROFILES_FORMAT_VERSION, "profiles": profiles_dict}
    (out / "calibrated_profiles.json").write_text(
        json.dumps(result, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote calibrated_profiles.json -> {out}")
    return EXIT_OK


# ----------------------------------------------------------------------
# kb-trace
# ----------------------------------------------------------------------


def _query_from_spec(data: dict, kb: CaseBase):
    """Build a feature vector from a query dict.

    The query mirrors a decision: context fields plus the behaviour.  The
    utilities are computed exactly as a live decision would compute
    them, unless explicit autonomy_utility / wellbeing_utility overrides
    are present.
    """
    try:
        last = data.get("last_instruction")
        ctx = DecisionContext(
            epsilon_m=int(data["epsilon_m"]),
            missed_doses=float(data["missed_doses"]),
            follow_ups=int(data["follow_ups"]),
            reminder_state=ReminderState(data["reminder_state"]),
            last_instruction=Instruction(last) if last else None,
            instruction_pending=bool(data.get("instruction_pending", False)),
            acknowledged_without_taking=bool(
                data.get("acknowledged_without_taking", False)
            ),
            snoozes_granted=int(data.get("snoozes_granted", 0)),
            snooze_remaining=int(data.get("snooze_remaining", 0)),
            step=int(data.get("step", 0)),
        )
        obeys = data.get("obeys")
        behaviour = Behaviour(
            BehaviourKind(data["behaviour"]),
            obeys=Instruction(obeys) if obeys else None,
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ContextError(f"invalid query spec: {exc}") from exc
    au = data.get("autonomy_utility")
    w = data.get("wellbeing_utility")
    au = autonomy_utility(behaviour, ctx) if au is None else float(au)
    w = wellbeing_utility(behaviour, ctx)[0] if w is None else float(w)
    features = feature_vector(
        ctx.epsilon_m,
        ctx.missed_doses,
        ctx.follow_ups,
        ctx.reminder_state,
        ctx.acknowledged_without_taking,
        behaviour.kind,
        au,
        w,
    )
    verdict = evaluate_rules(behaviour, ctx)
    opinion = kb.consult(behaviour, ctx, au, w, verdict)
    return features, opinion


def cmd_kb_trace(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb)
    if len(kb) == 0:
        print("no knowledge: the case base is empty")
        return EXIT_OK

    if args.seed_case:
        matches = [c for c in kb.cases if c.case_id == args.seed_case]
        if not matches:
            raise KBError(f"no case with id {args.seed_case!r}")
        case = matches[0]
        features = case.features()
        neighbours = kb.retrieve(features)
        weights = [case_weight(d) for _, d in neighbours]
        total = sum(weights)
        score = sum(w * c.acceptability for (c, _), w in zip(neighbours, weights)) / total
        acceptable = score >= 0.5
        intentions = sorted(
            {
                tag
                for (c, _), _w in zip(neighbours, weights)
                if (c.acceptability >= 0.5) == acceptable
                for tag in c.intention
            }
        )
        rows = [(c.case_id, d, w, c.acceptability) for (c, d), w in zip(neighbours, weights)]
    else:
        if not args.query:
            raise ContextError("kb-trace needs a query file or --seed-case")
        path = Path(args.query)
        if not path.exists():
            raise ContextError(f"query file not found: {path}")
        data = json.loads(path.read_text(encoding="utf-8"))
        _features, opinion = _query_from_spec(data, kb)
        score = opinion.score
        acceptable = opinion.acceptable
        intentions = sorted(opinion.intentions)
        rows = [
            (t.case_id, t.distance, t.weight, t.acceptability) for t in opinion.trace
        ]

    print(f"{'case id':<28} {'distance':>12} {'weight':>10} {'label':>7}")
    for case_id, dist, weight, acc in rows:
        print(f"{case_id:<28} {dist:>12.6f} {weight:>10.4f} {acc:>7.2f}")
    print(f"score: {score:.6f}  acceptable: {acceptable}  intentions: {intentions}")
    return EXIT_OK


# ----------------------------------------------------------------------
# validate
# ----------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    checked = []
    if args.kb:
        kb = _load_kb(args.kb)
        checked.append(f"case base: {len(kb)} cases OK")
    if args.profiles:
        profiles = _load_profile_set(args.profiles)
        checked.append(f"profiles: {sorted(profiles)} OK")
    if args.scenario:
        scenario = _resolve_scenario(args.scenario)
        checked.append(f"scenario: {scenario.name} OK")
    if not checked:
        raise ModelError("nothing to validate: pass --kb, --profiles or --scenario")
    print("\n".join(checked))
    return EXIT_OK


# ----------------------------------------------------------------------
# argument parsing / entry point
# ----------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, *, kb=True, profiles=True, out=True):
    if kb:
        parser.add_argument("--kb", help="case base file (default: packaged seed KB)")
    if profiles:
        parser.add_argument(
            "--profiles", help="profiles file (default: packaged profiles)"
        )
    if out:
        parser.add_argument(
            "--out", default="out", help="output directory (default: ./out)"
        )
    parser.add_argument(
        "--risk-mode",
        choices=RISK_MODES,
        default="literal",
        help="how risk is read off the outcome density (default: literal)",
    )
    parser.add_argument(
        "--seed-irrelevant",
        action="store_true",
        help="reserved; the pipeline has no randomness, so setting this is an error",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rulebend",
        description="Deterministic governor simulations for the medication-reminder robot.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    p_run.add_argument("scenario", help="scenario file, or a packaged name (case1..case6)")
    p_run.add_argument("--profile", required=True, help="profile name, e.g. A")
    _add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_matrix = sub.add_parser("matrix", help="run the full scenario/profile grid")
    p_matrix.add_argument(
        "--expected", help="reference grid file (default: packaged grid)"
    )
    _add_common(p_matrix)
    p_matrix.set_defaults(func=cmd_matrix)

    p_cal = sub.add_parser("calibrate", help="search trait triples against a target grid")
    p_cal.add_argument("--target", help="target grid file (default: packaged grid)")
    p_cal.add_argument(
        "--constraints-only",
        action="store_true",
        help="emit constraint-feasible defaults without searching",
    )
    _add_common(p_cal, profiles=False)
    p_cal.set_defaults(func=cmd_calibrate)

    p_trace = sub.add_parser("kb-trace", help="show nearest precedents for a query")
    p_trace.add_argument("query", nargs="?", help="query spec JSON file")
    p_trace.add_argument("--seed-case", help="use an existing case id as the query")
    _add_common(p_trace, profiles=False, out=False)
    p_trace.set_defaults(func=cmd_kb_trace)

    p_val = sub.add_parser("validate", help="check data files")
    p_val.add_argument("--kb", help="case base file")
    p_val.add_argument("--profiles", help="profiles file")
    p_val.add_argument("--scenario", help="scenario file or packaged name")
    p_val.add_argument("--seed-irrelevant", action="store_true", help=argparse.SUPPRESS)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    if getattr(args, "seed_irrelevant", False):
        log.error(
            "--seed-irrelevant is reserved: every run is already deterministic"
        )
        return EXIT_INVALID
    try:
        return args.func(args)
    except (ModelError, ScenarioError, KBError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    except Exception as exc:  # pragma: no cover - defensive
        log.error("runtime failure: %s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
