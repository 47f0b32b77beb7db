"""Command-line front end.

Every command writes machine-readable CSV or JSON (numbers at 17
significant digits) so that figures can be regenerated by an external
plotting script. Exit codes: 0 success, 1 other domain error, 2 parse
error, 3 unphysical state, 4 unsupported noise regime.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import channels, discord, freezing
from .errors import DiscordFreezeError, SpecParseError, UnphysicalStateError, UnsupportedRegimeError
from .states import AnyBellState, parse_number, parse_state, to_density_matrix

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_UNPHYSICAL = 3
EXIT_REGIME = 4

FROZEN_TOL = 1e-9

TRAJECTORY_COLUMNS = ("t", "q", "Q", "I_c", "I", "branch", "frozen")
RATE_COLUMNS = ("q", "branch", "rate", "rate_B1", "rate_B2", "rate_B3", "note")
EVAL_COLUMNS = ("q", "Q", "I", "I_c", "branch", "c_M")
REPORT_COLUMNS = ("condition", "order_class", "boundary", "frozen_value", "q_transition", "sudden_rate")
POINT_COLUMNS = ("sqrt_l1", "sqrt_l2", "sqrt_l3", "condition", "curve_id")
EVENT_COLUMNS = ("t", "q", "direction")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SpecParseError(message)


@dataclass
class RunConfig:
    command: str
    state: str | None = None
    schedule: str | None = None
    q_range: tuple[float, float, int] | None = None
    t_range: tuple[float, float, int] | None = None
    output_format: str = "csv"
    out: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def as_json(self) -> dict[str, Any]:
        d: dict[str, Any] = {"command": self.command, "state": self.state, "schedule": self.schedule}
        d["q_range"] = list(self.q_range) if self.q_range else None
        d["t_range"] = list(self.t_range) if self.t_range else None
        d.update(self.extra)
        return d


def parse_range(text: str) -> tuple[float, float, int]:
    """``start:stop:steps`` inclusive of both ends, steps >= 2."""
    parts = text.split(":")
    if len(parts) != 3:
        raise SpecParseError(f"range must be start:stop:steps, got {text!r}")
    start, stop = parse_number(parts[0]), parse_number(parts[1])
    try:
        steps = int(parts[2])
    except ValueError as exc:
        raise SpecParseError(f"steps must be an integer, got {parts[2]!r}") from exc
    if steps < 2:
        raise SpecParseError("range needs at least 2 steps")
    return start, stop, steps


def _grid(r: tuple[float, float, int]) -> np.ndarray:
    return np.linspace(r[0], r[1], r[2])


# -- formatting ---------------------------------------------------------------


def _fmt_csv(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return ""
        return format(v, ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (int, np.integer)):
        return int(v)
    if v is None:
        return None
    return str(v)


def render_csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt_csv(row.get(c)) for c in columns) + "\n")
    return buf.getvalue()


def render_json(cfg: RunConfig, key: str, payload) -> str:
    if isinstance(payload, list):
        body = [{k: _json_value(v) for k, v in row.items()} for row in payload]
    else:
        body = {k: _json_value(v) for k, v in payload.items()}
    return json.dumps({"config": cfg.as_json(), key: body}, indent=2) + "\n"


def render_text(record: dict) -> str:
    width = max(len(k) for k in record)
    return "".join(f"{k.ljust(width)} : {_fmt_csv(v)}\n" for k, v in record.items())


def _emit(cfg: RunConfig, columns, rows, key="rows") -> str:
    rows = [{c: r.get(c) for c in columns} for r in rows]
    if cfg.output_format == "json":
        return render_json(cfg, key, rows if key == "rows" else rows[0])
    if cfg.output_format == "text":
        return "".join(render_text(r) for r in rows)
    return render_csv(columns, rows)


# -- commands -----------------------------------------------------------------


def _state(cfg: RunConfig) -> AnyBellState:
    if not cfg.state:
        raise SpecParseError("--state is required")
    return parse_state(cfg.state)


def cmd_eval(cfg: RunConfig) -> str:
    s = _state(cfg)
    q = cfg.extra.get("q", 0.0)
    info = discord.c_max_branch(s, q)
    row = {
        "q": q,
        "Q": discord.discord_analytic(s, q),
        "I": discord.mutual_information(s, q),
        "I_c": discord.classical_correlation_analytic(s, q),
        "branch": info.branch,
        "c_M": info.c_max,
    }
    columns = EVAL_COLUMNS
    grid_n = cfg.extra.get("grid_n")
    if grid_n:
        rho = channels.dephase_subsystem(to_density_matrix(s), q)
        row["Q_bruteforce"] = discord.discord_bruteforce(rho, grid_n)
        columns = columns + ("Q_bruteforce",)
    return _emit(cfg, columns, [row], key="report")


def _times_and_qs(cfg: RunConfig):
    if cfg.schedule:
        if not cfg.t_range:
            raise SpecParseError("--schedule needs --t-range")
        sched = channels.parse_schedule(cfg.schedule)
        ts = _grid(cfg.t_range)
        if np.any(ts < 0):
            raise SpecParseError("times must be non-negative")
        unit = 1.0 if cfg.extra.get("raw_time") else sched.time_unit
        return sched, ts, np.atleast_1d(channels.q_of_t(sched, ts * unit))
    if not cfg.q_range:
        raise SpecParseError("give --q-range, or --schedule with --t-range")
    qs = _grid(cfg.q_range)
    if np.any((qs < 0) | (qs > 2)):
        raise SpecParseError("q values must lie in [0, 2]")
    return None, None, qs


def cmd_trajectory(cfg: RunConfig) -> str:
    s = _state(cfg)
    _, ts, qs = _times_and_qs(cfg)
    curves = discord.correlation_curves(s, qs)
    q0 = discord.discord_analytic(s, 0.0)
    rows = []
    for i, q in enumerate(qs):
        rows.append(
            {
                "t": None if ts is None else float(ts[i]),
                "q": float(q),
                "Q": curves["Q"][i],
                "I_c": curves["I_c"][i],
                "I": curves["I"][i],
                "branch": discord.c_max_branch(s, float(q)).branch,
                "frozen": bool(abs(curves["Q"][i] - q0) <= FROZEN_TOL),
            }
        )
    return _emit(cfg, TRAJECTORY_COLUMNS, rows)


def cmd_rate(cfg: RunConfig) -> str:
    s = _state(cfg)
    if not cfg.q_range:
        raise SpecParseError("rate needs --q-range")
    rows = []
    for q in _grid(cfg.q_range):
        if not 0.0 <= q <= 2.0:
            raise SpecParseError("q values must lie in [0, 2]")
        r = discord.discord_rate(s, float(q))
        row = {"q": float(q), "branch": r.branch, "rate": r.rate, "note": r.note}
        for b in discord.Branch:
            row[f"rate_{b.value}"] = r.branch_rates.get(b)
        rows.append(row)
    return _emit(cfg, RATE_COLUMNS, rows)


def cmd_check_freeze(cfg: RunConfig) -> str:
    s = _state(cfg)
    rep = freezing.analyze(s, cfg.extra.get("tol", freezing.DEFAULT_TOL))
    row = {
        "condition": rep.condition,
        "order_class": rep.order_class,
        "boundary": rep.boundary,
        "frozen_value": rep.frozen_value,
        "q_transition": rep.q_transition,
        "sudden_rate": rep.sudden_rate,
    }
    return _emit(cfg, REPORT_COLUMNS, [row], key="report")


def cmd_transitions(cfg: RunConfig) -> str:
    s = _state(cfg)
    if not cfg.schedule:
        raise SpecParseError("transitions needs --schedule rtn:a=..,gamma=..")
    sched = channels.parse_schedule(cfg.schedule)
    if not isinstance(sched, channels.RandomTelegraph):
        raise SpecParseError("transitions needs a random telegraph (rtn) schedule")
    unit = 1.0 if cfg.extra.get("raw_time") else sched.time_unit
    t_max = cfg.extra["t_max"] * unit if "t_max" in cfg.extra else sched.period
    events = freezing.nonmarkovian_transitions(s, sched, t_max, tol=cfg.extra.get("tol", freezing.DEFAULT_TOL))
    rows = [{"t": e.t / unit, "q": e.q, "direction": e.direction} for e in events]
    return _emit(cfg, EVENT_COLUMNS, rows)


def _point_rows(points, condition, curve_id=None):
    return [
        {"sqrt_l1": p[0], "sqrt_l2": p[1], "sqrt_l3": p[2], "condition": condition, "curve_id": curve_id}
        for p in points.tolist()
    ]


def cmd_surface(cfg: RunConfig) -> str:
    which = cfg.extra.get("condition", "both")
    conds = [freezing.Condition.COND_A, freezing.Condition.COND_B] if which == "both" else [freezing.Condition(which)]
    rows = []
    for c in conds:
        rows += _point_rows(freezing.sample_surface(c, cfg.extra["n"], cfg.extra.get("tol", freezing.DEFAULT_TOL)), c)
    return _emit(cfg, POINT_COLUMNS, rows)


def cmd_boundary(cfg: RunConfig) -> str:
    rows = []
    for curve in freezing.boundary_curves(cfg.extra["n"]):
        rows += _point_rows(curve.points, curve.condition, curve.curve_id)
    return _emit(cfg, POINT_COLUMNS, rows)


COMMANDS = {
    "eval": cmd_eval,
    "trajectory": cmd_trajectory,
    "rate": cmd_rate,
    "check-freeze": cmd_check_freeze,
    "transitions": cmd_transitions,
    "surface": cmd_surface,
    "boundary": cmd_boundary,
}


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="discordfreeze", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def common(sp, state=True, fmt=("csv", "json")):
        if state:
            sp.add_argument("--state", required=True, help="c1=..,c2=..,c3=.. | l1=..,..,l4=.. | c11=..,c12=..,c21=..,c22=..,c33=..")
        sp.add_argument("--format", choices=fmt, default="csv", dest="output_format")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")

    sp = sub.add_parser("eval", help="correlations at a single q")
    common(sp, fmt=("csv", "json", "text"))
    sp.add_argument("--q", type=parse_number, default=0.0)
    sp.add_argument("--grid-n", type=int, default=None, help="also run the brute-force oracle at this grid resolution")

    sp = sub.add_parser("trajectory", help="Q, I_c, I along a q or time grid")
    common(sp)
    sp.add_argument("--q-range", type=parse_range)
    sp.add_argument("--schedule")
    sp.add_argument("--t-range", type=parse_range, help="times in units of 1/gamma unless --raw-time")
    sp.add_argument("--raw-time", action="store_true")

    sp = sub.add_parser("rate", help="dQ/dq along a q grid")
    common(sp)
    sp.add_argument("--q-range", type=parse_range, required=True)

    sp = sub.add_parser("check-freeze", help="freezing condition, plateau, transition and sudden rate")
    common(sp, fmt=("csv", "json", "text"))
    sp.add_argument("--tol", type=float, default=freezing.DEFAULT_TOL)

    sp = sub.add_parser("transitions", help="freeze/decay events under random telegraph noise")
    common(sp)
    sp.add_argument("--schedule", required=True)
    sp.add_argument("--t-max", type=parse_number, help="in units of 1/gamma unless --raw-time (default: one period)")
    sp.add_argument("--raw-time", action="store_true")
    sp.add_argument("--tol", type=float, default=freezing.DEFAULT_TOL)

    sp = sub.add_parser("surface", help="freezing-surface points in (sqrt l1, sqrt l2, sqrt l3)")
    common(sp, state=False)
    sp.add_argument("--n", type=int, default=65)
    sp.add_argument("--condition", choices=("CondA", "CondB", "both"), default="both")
    sp.add_argument("--tol", type=float, default=freezing.DEFAULT_TOL)

    sp = sub.add_parser("boundary", help="transition curves bounding the freezing surface")
    common(sp, state=False)
    sp.add_argument("--n", type=int, default=65)
    return p


_CONFIG_FIELDS = {"command", "state", "schedule", "q_range", "t_range", "output_format", "out"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns)
    extra = {k: v for k, v in d.items() if k not in _CONFIG_FIELDS and v is not None and v is not False}
    if "n" in extra and extra["n"] < 2:
        raise SpecParseError("--n must be >= 2")
    if "grid_n" in extra and extra["grid_n"] < 2:
        raise SpecParseError("--grid-n must be >= 2")
    return RunConfig(
        command=d["command"],
        state=d.get("state"),
        schedule=d.get("schedule"),
        q_range=d.get("q_range"),
        t_range=d.get("t_range"),
        output_format=d["output_format"],
        out=d.get("out"),
        extra=extra,
    )


def run(cfg: RunConfig) -> str:
    return COMMANDS[cfg.command](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
        text = run(cfg)
    except SpecParseError as exc:
        print(f"discordfreeze: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnphysicalStateError as exc:
        print(f"discordfreeze: unphysical state: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    except UnsupportedRegimeError as exc:
        print(f"discordfreeze: unsupported regime: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except DiscordFreezeError as exc:
        print(f"discordfreeze: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
