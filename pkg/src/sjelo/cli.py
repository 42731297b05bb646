"""Command-line front end.

Input is CSV with header ``period,player_a,player_b,points_a,points_b``.
Each row adds ``points_a`` to p[a, b] and ``points_b`` to p[b, a] in the
given period. Periods are non-negative integers; missing periods are empty.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from .core import SolverConfig, SolverError, _elo_map, solve
from .ledger import (
    ELO_SIGMA,
    PeriodLedger,
    PlayerRegistry,
    PublishConfig,
    accumulate,
    classical_sequence,
    gate_players,
    publish,
)
from .structure import analyze, asymptotic_rating, solve_by_components

HEADER = ("period", "player_a", "player_b", "points_a", "points_b")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_STALL = 2


class IngestError(ValueError):
    pass


def _parse_points(text, line, column):
    try:
        value = float(text)
    except ValueError:
        raise IngestError(f"line {line}: {column} is not a number: {text!r}") from None
    if not np.isfinite(value):
        raise IngestError(f"line {line}: {column} must be finite")
    if value < 0:
        raise IngestError(f"line {line}: {column} is negative")
    return value


def ingest(source):
    """Read result records into a player registry and a period ledger.

    ``source`` is a path or a text stream. Rows for the same pair and period
    are summed; players are indexed in first-seen order.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, newline="", encoding="utf-8") as fh:
            return ingest(fh)

    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != HEADER:
        raise IngestError(f"line 1: expected header {','.join(HEADER)}")

    registry = PlayerRegistry()
    records = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(HEADER):
            raise IngestError(f"line {line}: expected {len(HEADER)} fields, got {len(row)}")
        period_text, a, b, pa, pb = (cell.strip() for cell in row)
        try:
            period = int(period_text)
        except ValueError:
            raise IngestError(f"line {line}: period is not an integer: {period_text!r}") from None
        if period < 0:
            raise IngestError(f"line {line}: period is negative")
        if not a or not b:
            raise IngestError(f"line {line}: empty player identifier")
        if a == b:
            raise IngestError(f"line {line}: player {a!r} paired with themselves")
        records.append((period, registry.add(a), registry.add(b),
                        _parse_points(pa, line, "points_a"), _parse_points(pb, line, "points_b")))

    n = len(registry)
    n_periods = max((r[0] for r in records), default=-1) + 1
    periods = [np.zeros((n, n)) for _ in range(n_periods)]
    for period, i, j, pi, pj in records:
        periods[period][i, j] += pi
        periods[period][j, i] += pj
    return registry, PeriodLedger(periods)


def write_results(registry, ledger, stream):
    """Write a ledger back out in the input CSV format, one row per pair and period."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(HEADER)
    ids = registry.ids
    for period, p in enumerate(ledger.periods):
        for i in range(ledger.n):
            for j in range(i + 1, ledger.n):
                if p[i, j] or p[j, i]:
                    writer.writerow([period, ids[i], ids[j], repr(float(p[i, j])), repr(float(p[j, i]))])


def _fmt(value, digits):
    text = f"{value:.{digits}f}"
    # no "-0.00"
    if float(text) == 0:
        text = f"{0.0:.{digits}f}"
    return text


def _emit(rows, columns, fmt, out, extra=None):
    if fmt == "json":
        payload = dict(extra or {})
        payload["players"] = rows
        json.dump(payload, out, indent=2)
        out.write("\n")
        return
    digits = {"rating": 6, "published": 2, "classical": 6, "self_justifying": 6, "games": None}

    def cell(row, col):
        value = row[col]
        if value is None:
            return "unrated"
        if isinstance(value, float):
            d = digits.get(col)
            return repr(value) if d is None else _fmt(value, d)
        return str(value)

    table = [[cell(row, col) for col in columns] for row in rows]
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(table)
        return
    widths = [max([len(c)] + [len(r[i]) for r in table]) for i, c in enumerate(columns)]
    out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for r in table:
        out.write("  ".join(v.ljust(w) if i == 0 else v.rjust(w)
                            for i, (v, w) in enumerate(zip(r, widths))).rstrip() + "\n")


def _ordered(rows, key):
    rated = [r for r in rows if r[key] is not None]
    unrated = [r for r in rows if r[key] is None]
    rated.sort(key=lambda r: (-r[key], r["_index"]))
    return [{k: v for k, v in r.items() if k != "_index"} for r in rated + unrated]


def _solver_config(args):
    return SolverConfig(k=args.k, epsilon=args.epsilon, c=args.c)


def _publish_config(args):
    return PublishConfig(mu=args.mu, sigma=args.sigma, min_games=args.min_games)


def _load(args):
    registry, ledger = ingest(args.input)
    if getattr(args, "decay", None) is not None:
        ledger = PeriodLedger(ledger.periods, decay=args.decay)
    return registry, ledger


def cmd_solve(args, out):
    registry, ledger = _load(args)
    if len(ledger) == 0 or ledger.n == 0:
        _emit([], ["player", "rating", "published", "games"], args.format, out,
              {"period": None, "residual": 0.0, "loops_used": 0})
        return EXIT_OK
    pub = _publish_config(args)
    last = len(ledger) - 1
    included, _, reduced = gate_players(ledger, last, pub)
    q = accumulate(ledger, last)
    games = q.sum(axis=1) + q.sum(axis=0)
    cfg = _solver_config(args)
    try:
        outcome = (solve_by_components if args.by_components else solve)(reduced, cfg)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STALL
    published = publish(outcome.rating, pub)
    mask = set(included)
    rows = []
    for i, pid in enumerate(registry):
        rated = i in mask
        rows.append({
            "player": pid,
            "rating": float(outcome.rating[i]) if rated else None,
            "published": float(published[i]) if rated else None,
            "games": float(games[i]),
            "_index": i,
        })
    extra = {
        "period": last,
        "k": cfg.k,
        "epsilon": outcome.epsilon,
        "residual": outcome.residual,
        "loops_used": outcome.loops_used,
        "loop_bound": outcome.loop_bound,
        "stalled": outcome.stalled,
    }
    _emit(_ordered(rows, "published"), ["player", "rating", "published", "games"], args.format, out, extra)
    if outcome.stalled:
        print(f"warning: solver stalled at residual {outcome.residual:g} "
              f"(epsilon {outcome.epsilon:g})", file=sys.stderr)
        return EXIT_STALL
    return EXIT_OK


def _verdict_text(verdict, registry):
    if verdict.kind == "converged":
        return "verdict: converged"
    if verdict.kind == "oscillating":
        first = registry.ids[0] if len(registry) else "?"
        points = " / ".join(_fmt(a[0], 6) for a in verdict.attractors)
        return f"verdict: oscillating (period {verdict.period}), {first} alternates near {points}"
    return "verdict: undetermined"


def cmd_classical(args, out):
    registry, ledger = _load(args)
    if len(ledger) == 0 or ledger.n == 0:
        _emit([], ["player", "rating", "published"], args.format, out, {"verdict": None})
        return EXIT_OK
    pub = _publish_config(args)
    included, _, _ = gate_players(ledger, len(ledger) - 1, pub)
    mask = np.zeros(ledger.n, dtype=bool)
    mask[included] = True
    gated = PeriodLedger([p * np.outer(mask, mask) for p in ledger.periods])
    cfg = _solver_config(args)
    trace = classical_sequence(gated, cfg)
    verdict_line = _verdict_text(trace.verdict, registry)

    if args.trace:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["period", *registry.ids])
        for l, x in enumerate(trace.ratings):
            writer.writerow([l, *(repr(float(v)) for v in x)])
        print(verdict_line, file=sys.stderr)
        return EXIT_OK

    final = trace.ratings[-1]
    published = publish(final, pub)
    rows = []
    for i, pid in enumerate(registry):
        rated = bool(mask[i])
        rows.append({
            "player": pid,
            "rating": float(final[i]) if rated else None,
            "published": float(published[i]) if rated else None,
            "_index": i,
        })
    verdict = {
        "kind": trace.verdict.kind,
        "period": trace.verdict.period,
        "attractors": [[float(v) for v in a] for a in trace.verdict.attractors],
    }
    _emit(_ordered(rows, "published"), ["player", "rating", "published"], args.format, out,
          {"k": cfg.k, "periods": len(ledger), "verdict": verdict})
    if args.format == "table":
        out.write(verdict_line + "\n")
    elif args.format == "csv":
        print(verdict_line, file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args, out):
    registry, ledger = _load(args)
    ids = registry.ids
    if len(ledger) == 0 or ledger.n == 0:
        if args.format == "json":
            _emit([], [], "json", out, {"components": [], "bounded": True})
        else:
            out.write("components: none\nbounded: true\n")
        return EXIT_OK
    period = len(ledger) - 1 if args.period is None else args.period
    q = accumulate(ledger, period)
    report = analyze(q)
    limit = asymptotic_rating(q, tol=args.tol) if report.bounded else None

    components = [
        {"players": [ids[i] for i in comp], "strongly_connected": flag}
        for comp, flag in zip(report.components, report.strong_flags)
    ]
    rows = []
    if limit is not None:
        rows = [{"player": pid, "rating": float(limit.rating[i]), "_index": i} for i, pid in enumerate(ids)]
        rows = _ordered(rows, "rating")
    if args.format == "json":
        _emit(rows, ["player", "rating"], "json", out, {
            "period": period,
            "components": components,
            "bounded": report.bounded,
            "residual": None if limit is None else limit.residual,
        })
        return EXIT_OK

    out.write(f"period: {period}\n")
    out.write(f"components: {len(components)}\n")
    for c in components:
        tag = "strongly connected" if c["strongly_connected"] else "NOT strongly connected"
        out.write(f"  {{{', '.join(c['players'])}}}: {tag}\n")
    out.write(f"bounded: {'true' if report.bounded else 'false'}\n")
    if limit is None:
        weak = [", ".join(c["players"]) for c in components if not c["strongly_connected"]]
        out.write("warning: ratings grow without bound as k increases "
                  f"(not strongly connected: {'; '.join('{' + w + '}' for w in weak)})\n")
        return EXIT_OK
    out.write("asymptotic rating:\n")
    buf = io.StringIO()
    _emit(rows, ["player", "rating"], args.format, buf)
    out.write(buf.getvalue())
    return EXIT_OK


def cmd_compare(args, out):
    registry, ledger = _load(args)
    if len(ledger) == 0 or ledger.n == 0:
        _emit([], ["player", "classical", "self_justifying"], args.format, out, {"l1_difference": 0.0})
        return EXIT_OK
    cfg = _solver_config(args)
    last = len(ledger) - 1
    q = accumulate(ledger, last)
    classical = classical_sequence(PeriodLedger(ledger.periods), cfg).ratings[-1]
    try:
        outcome = (solve_by_components if args.by_components else solve)(q, cfg)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STALL
    selfj = outcome.rating
    contested = q + q.T

    def res(x):
        return float(np.abs(x - _elo_map(x, q, contested, cfg.k)).sum())

    rows = [
        {"player": pid, "classical": float(classical[i]), "self_justifying": float(selfj[i]), "_index": i}
        for i, pid in enumerate(registry)
    ]
    summary = {
        "l1_difference": float(np.abs(classical - selfj).sum()),
        "classical_residual": res(classical),
        "self_justifying_residual": res(selfj),
        "epsilon": outcome.epsilon,
    }
    _emit(_ordered(rows, "self_justifying"), ["player", "classical", "self_justifying"],
          args.format, out, summary)
    if args.format == "table":
        for key, value in summary.items():
            out.write(f"{key}: {value:.6g}\n")
    return EXIT_STALL if outcome.stalled else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="sjelo", description="Self-justifying Elo ratings.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, solver=True):
        p.add_argument("--input", required=True, help="result CSV file")
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")
        if not solver:
            return
        p.add_argument("--k", type=float, required=True, help="dynamising parameter")
        p.add_argument("--epsilon", type=float, default=None,
                       help="L1 precision (default 1e-9 * max(1, 2k * total points))")
        p.add_argument("--c", type=int, default=4, help="continuity parameter")
        p.add_argument("--mu", type=float, default=1500.0, help="published average")
        p.add_argument("--sigma", type=float, default=ELO_SIGMA, help="published deviation factor")
        p.add_argument("--decay", type=float, default=None,
                       help="geometric weight per elapsed period, in (0, 1); default equal weights")
        p.add_argument("--min-games", type=float, default=0.0,
                       help="minimum points contested for a player to be rated")
        p.add_argument("--by-components", action="store_true",
                       help="solve each connected component separately")

    p = sub.add_parser("solve", help="self-justifying ratings at the last period")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classical", help="sequential classical Elo over the periods")
    common(p)
    p.add_argument("--trace", action="store_true", help="print the per-period trajectory as CSV")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("analyze", help="connectivity and large-k behaviour")
    common(p, solver=False)
    p.add_argument("--period", type=int, default=None, help="period index (default: last)")
    p.add_argument("--tol", type=float, default=1e-9, help="precision of the asymptotic rating")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="classical vs self-justifying ratings")
    common(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (IngestError, OSError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
