"""Batch command line: counting, profiling, verification suites, head
detection, seeded simulation, and path rendering.

Data goes to stdout (or --out); diagnostics go to stderr, so pipelines
never see them interleaved.  Exit codes: 0 success, 1 a verification
check failed, 2 configuration error, 3 resource guard or numeric guard.
Identical configuration and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import counting, cycle, families, kraft, walks
from .model import AmbiguityError, GrowthFunction, GuardError, SubsetMask, log2_int, set_to_path

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------


def _load_gf(spec: Optional[str]) -> GrowthFunction:
    if spec is None or spec == "zero":
        return GrowthFunction.zero()
    if spec == "paper":
        return GrowthFunction.paper()
    if spec.startswith("@"):
        text = Path(spec[1:]).read_text()
    elif spec.lstrip().startswith("{"):
        text = spec
    elif Path(spec).is_file():
        text = Path(spec).read_text()
    else:
        raise ConfigError(f"growth function must be 'zero', 'paper', JSON, or a file: {spec!r}")
    try:
        return GrowthFunction.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad growth-function JSON: {exc}") from exc


def _parse_range(spec: str) -> list[int]:
    """'12' -> [12]; '1..12' -> [1, ..., 12]."""
    try:
        if ".." in spec:
            lo, hi = spec.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise ValueError
            return list(range(lo_i, hi_i + 1))
        return [int(spec)]
    except ValueError as exc:
        raise ConfigError(f"bad range {spec!r}, expected N or LO..HI") from exc


def _parse_mu(spec: str) -> Fraction:
    try:
        if "/" in spec:
            num, den = spec.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(spec))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad slope {spec!r}, expected num/den") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[list], header: list[str]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if v is None:
        return ""
    return str(v)


def _json_ready(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, dict):
        return {k: _json_ready(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_ready(x) for x in v]
    return v


def _dump_json(obj) -> str:
    return json.dumps(_json_ready(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------


def cmd_count(args) -> int:
    gf = _load_gf(args.gf)
    ns = _parse_range(args.n)
    if args.per_k:
        header = ["n", "k", "count", "backend"]
        rows = []
        for n in ns:
            if args.backend == "exact":
                fn = counting.prefix_counts if args.per_k == "p" else counting.suffix_counts
                table = fn(n, gf).counts
                rows.extend([n, k, table[k], "exact"] for k in sorted(table))
            else:
                fn = counting.prefix_counts_log2 if args.per_k == "p" else counting.suffix_counts_log2
                table = fn(n, gf)
                rows.extend([n, k, table[k], "logfloat"] for k in sorted(table))
    else:
        header = ["n", "count"]
        if args.backend == "exact":
            rows = [[n, counting.family_path_count(n, gf)] for n in ns]
        else:
            header = ["n", "count_log2"]
            rows = [[n, counting.family_path_count_log2(n, gf)] for n in ns]
    if args.format == "json":
        _emit(_dump_json([dict(zip(header, r)) for r in rows]), args.out)
    else:
        _emit(_csv(rows, header), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------


def _density_ratio(count: int, n: int, log_power: int) -> Optional[float]:
    if n < 2:
        return None
    if count == 0:
        return 0.0
    log2_ratio = log2_int(count) + math.log2(n) + log_power * math.log2(math.log(n)) - n
    return 2.0**log2_ratio


def cmd_profile(args) -> int:
    gf = _load_gf(args.gf)
    upto = args.N
    if upto < 0:
        raise ConfigError("--N must be nonnegative")
    header = ["n", "slice_count", "kraft_partial", "ratio_logn", "ratio_log46"]
    rows = []
    partial = Fraction(0)
    prev = 0
    for n in range(1, upto + 1):
        slice_count = counting.cumulative_count(n, gf)
        assert slice_count >= prev
        prev = slice_count
        partial += Fraction(slice_count, 2**n)
        rows.append(
            [
                n,
                slice_count,
                partial,
                _density_ratio(slice_count, n, 1),
                _density_ratio(slice_count, n, 46),
            ]
        )
    if args.format == "json":
        _emit(_dump_json([dict(zip(header, r)) for r in rows]), args.out)
    else:
        _emit(_csv(rows, header), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verdict(check: str, params: dict, passed: bool, lhs=None, rhs=None) -> dict:
    return {
        "check": check,
        "params": params,
        "lhs_log2": lhs,
        "rhs_log2": rhs,
        "pass": bool(passed),
    }


def _log2_or_none(x: int) -> Optional[float]:
    return log2_int(x) if x > 0 else None


def _suite_convolution(args, gf) -> list[dict]:
    out = []
    for n in _parse_range(args.n or "2..16"):
        total = counting.family_path_count(n, gf)
        p = counting.prefix_counts(n, gf)
        q = counting.suffix_counts(n, gf)
        conv = sum(v * q[k] for k, v in p.counts.items())
        out.append(
            _verdict("convolution", {"n": n, "gf": gf.mode}, conv == total,
                     _log2_or_none(total), _log2_or_none(conv))
        )
    return out


def _suite_catalan(args, gf) -> list[dict]:
    out = []
    for n in _parse_range(args.n or "2..12"):
        dp = counting.family_path_count(n, GrowthFunction.zero())
        cf = families.ballot_closed_form(n)
        out.append(_verdict("catalan", {"n": n}, dp == cf, _log2_or_none(dp), _log2_or_none(cf)))
    return out


def _suite_oracle(args, gf) -> list[dict]:
    out = []
    for n in _parse_range(args.n or "1..8"):
        spec = families.FamilySpec(gf=gf, n=n)
        brute = len(families.enumerate_family(spec))
        dp = counting.family_path_count(n, gf)
        out.append(
            _verdict("oracle", {"n": n, "gf": gf.mode}, brute == dp,
                     _log2_or_none(brute), _log2_or_none(dp))
        )
    return out


def _suite_cycle(args, gf, max_n: int) -> list[dict]:
    stats = cycle.exhaustive_suite(max_n)
    return [_verdict(f"cycle-exhaustive-{max_n}", stats, True)]


def _suite_band_mass(args, gf) -> list[dict]:
    out = []
    for n in _parse_range(args.n or "256"):
        table = counting.prefix_counts(n, gf)
        band = walks.bandwidth(n)
        total = sum(table[k] for k in band.k_range)
        out.append(
            _verdict("band-mass", {"n": n, "A": band.value}, total >= 2 ** (n - 1),
                     _log2_or_none(total), float(n - 1))
        )
    return out


def _suite_completion_min(args, gf) -> list[dict]:
    out = []
    for n in _parse_range(args.n or "512"):
        table = counting.suffix_counts(n, gf)
        band = walks.bandwidth(n)
        smallest = min(table[k] for k in band.k_range)
        rhs = n - math.log2(n) - 46 * math.log2(math.log(n))
        out.append(
            _verdict("completion-min", {"n": n}, walks.completion_min_check(n, gf),
                     _log2_or_none(smallest), rhs)
        )
    return out


def _suite_completion_chain(args, gf) -> list[dict]:
    return [
        _verdict("completion-chain", {"n": n}, walks.completion_chain_check(n, gf))
        for n in _parse_range(args.n or "512")
    ]


def _suite_family_size(args, gf) -> list[dict]:
    out = []
    for n in _parse_range(args.n or "512"):
        cnt = counting.family_path_count(n, gf)
        rhs = 2 * n - math.log2(2 * n) - 46 * math.log2(math.log(n))
        out.append(
            _verdict("family-size", {"n": n}, walks.family_size_check(n, gf),
                     _log2_or_none(cnt), rhs)
        )
    return out


def _suite_chernoff(args, gf) -> list[dict]:
    out = []
    for n in _parse_range(args.n or "100"):
        out.append(_verdict("chernoff", {"n": n, "C": "3"}, walks.chernoff_tail_check(n, Fraction(3))))
    return out


def _suite_dyadic(args, gf) -> list[dict]:
    bound = walks.dyadic_sum(Fraction(3), 10**6)
    return [_verdict("dyadic", {"C": "3", "terms": 10**6, "bound": bound}, bound <= 0.5)]


def _suite_crossing(args, gf) -> list[dict]:
    n = int(args.n) if args.n else 20000
    prob = walks.crossing_probability_exact(n, Fraction(3), 100)
    if prob > 0:
        lhs = log2_int(prob.numerator) - log2_int(prob.denominator)
    else:
        lhs = None
    return [
        _verdict(
            "crossing", {"N": n, "C": "3", "offset": 100, "probability": float(prob)},
            prob <= Fraction(1, 2), lhs, -1.0,
        )
    ]


def _suite_mc_agreement(args, gf) -> list[dict]:
    exact = walks.crossing_probability_exact(100, Fraction(0), 2)
    est, _radius = walks.crossing_probability_mc(100, Fraction(0), 2, args.trials, args.seed)
    sigma = math.sqrt(float(exact * (1 - exact)) / args.trials)
    ok = abs(est - float(exact)) <= 4 * sigma
    return [
        _verdict(
            "mc-agreement",
            {"N": 100, "C": "0", "offset": 2, "trials": args.trials, "seed": args.seed,
             "estimate": est, "exact": float(exact)},
            ok,
        )
    ]


def _suite_kraft(args, gf) -> list[dict]:
    up_to = int(args.n) if args.n else 16
    family = _slice_family(gf, up_to)
    partial = kraft.antichain_partial_sum(family, up_to)
    words = [kraft.word_for_set(a) for a in family if len(a) > 0]
    ksum = kraft.kraft_sum(words)
    ok = partial <= 2 and kraft.is_prefix_free(words) and ksum <= 1
    return [
        _verdict(
            "kraft",
            {"N": up_to, "gf": gf.mode, "members": len(family),
             "partial_sum": partial, "kraft_sum": ksum},
            ok,
        )
    ]


def _slice_family(gf: GrowthFunction, up_to: int) -> list[SubsetMask]:
    """All members, over every size parameter, that fit inside [up_to]."""
    out = []
    for m in range(1, up_to + 1):
        spec = families.FamilySpec(gf=gf, n=m)
        if spec.cardinality > min(2 * m, up_to):
            continue
        if 2 * m <= up_to:
            out.extend(families.enumerate_family(spec))
        else:
            for a in families.enumerate_family(spec):
                if a.max_element() <= up_to:
                    out.append(a)
    return out


_SUITES = {
    "convolution": _suite_convolution,
    "catalan": _suite_catalan,
    "oracle": _suite_oracle,
    "band-mass": _suite_band_mass,
    "completion-min": _suite_completion_min,
    "completion-chain": _suite_completion_chain,
    "family-size": _suite_family_size,
    "chernoff": _suite_chernoff,
    "dyadic": _suite_dyadic,
    "crossing": _suite_crossing,
    "mc-agreement": _suite_mc_agreement,
    "kraft": _suite_kraft,
}


_PAPER_DEFAULT_SUITES = {"band-mass", "completion-min", "completion-chain", "family-size"}


def cmd_verify(args) -> int:
    if args.gf is None and args.suite in _PAPER_DEFAULT_SUITES:
        gf = GrowthFunction.paper()
    else:
        gf = _load_gf(args.gf)
    name = args.suite
    if name.startswith("cycle-exhaustive-"):
        try:
            max_n = int(name.rsplit("-", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad suite name {name!r}") from exc
        verdicts = _suite_cycle(args, gf, max_n)
    elif name in _SUITES:
        verdicts = _SUITES[name](args, gf)
    else:
        known = ", ".join(sorted(_SUITES) + ["cycle-exhaustive-N"])
        raise ConfigError(f"unknown suite {name!r}; known: {known}")
    _emit(_dump_json(verdicts), args.out)
    failed = [v for v in verdicts if not v["pass"]]
    for v in failed:
        print(f"FAILED: {v['check']} {v['params']}", file=sys.stderr)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# heads / simulate / render
# ---------------------------------------------------------------------------


def cmd_heads(args) -> int:
    x = cycle.CircularSequence.from_string(args.sequence)
    mu = _parse_mu(args.mu)
    report = cycle.heads(x, mu)
    payload = {
        "sequence": args.sequence,
        "mu": mu,
        "p": x.p,
        "q": x.q,
        "bound": report.bound,
        "positions": list(report.positions),
    }
    try:
        payload["constructed"] = cycle.construct_heads(x, mu)
    except ValueError as exc:
        payload["constructed"] = None
        payload["construction_error"] = str(exc)
    if args.format == "csv":
        rows = [[r, r in (payload["constructed"] or [])] for r in report.positions]
        _emit(_csv(rows, ["position", "constructed"]), args.out)
    else:
        _emit(_dump_json(payload), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    coeff = _parse_mu(args.C)
    est, radius = walks.crossing_probability_mc(args.N, coeff, args.offset, args.trials, args.seed)
    payload = {
        "N": args.N,
        "C": coeff,
        "offset": args.offset,
        "trials": args.trials,
        "seed": args.seed,
        "estimate": est,
        "radius": radius,
    }
    if args.with_exact:
        exact = walks.crossing_probability_exact(args.N, coeff, args.offset)
        payload["exact"] = float(exact)
    if args.format == "csv":
        header = sorted(payload)
        _emit(_csv([[payload[k] for k in header]], header), args.out)
    else:
        _emit(_dump_json(payload), args.out)
    return EXIT_OK


def render_path(heights: list[int], boundary: dict[int, int]) -> str:
    """Character grid of a walk: 'o' marks the walk, '=' the boundary values,
    '#' both at once; x runs left to right, one column per abscissa."""
    ys = heights + list(boundary.values())
    top, bot = max(ys), min(ys)
    lines = []
    for y in range(top, bot - 1, -1):
        cells = []
        for x in range(len(heights)):
            on_path = heights[x] == y
            on_bound = boundary.get(x) == y
            cells.append("#" if on_path and on_bound else "o" if on_path else "=" if on_bound else " ")
        lines.append(f"{y:>5} |" + "".join(cells).rstrip())
    lines.append("      +" + "-" * len(heights))
    return "\n".join(lines) + "\n"


def cmd_render(args) -> int:
    gf = _load_gf(args.gf)
    if args.set is not None:
        if args.n is None:
            raise ConfigError("--set needs --n")
        try:
            elements = [int(t) for t in args.set.split(",") if t.strip()]
            a = SubsetMask.from_elements(elements)
        except ValueError as exc:
            raise ConfigError(f"bad set: {exc}") from exc
        try:
            path = set_to_path(a, args.n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    elif args.path is not None:
        table = {"+": 1, "-": -1}
        try:
            steps = tuple(table[ch] for ch in args.path.strip())
        except KeyError as exc:
            raise ConfigError(f"path characters must be '+' or '-': {exc}") from exc
        from .model import LatticePath

        path = LatticePath(steps=steps)
    else:
        raise ConfigError("render needs --set or --path")
    heights = path.heights()
    length = len(path)
    boundary = {x: 2 * gf.value(x // 2) for x in range(0, length + 1) if x % 2 == 0 and 0 < x < length}
    _emit(render_path(heights, boundary), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antichains",
        description="Exact counting and verification for boundary-constrained set families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--gf", default=None, help="'zero', 'paper', inline JSON, or a file path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="write data here instead of stdout")

    p = sub.add_parser("count", help="family sizes |F_n|, optionally per-height leg tables")
    common(p)
    p.add_argument("--n", required=True, help="N or LO..HI")
    p.add_argument("--per-k", choices=("p", "q"), default=None, help="emit first/second leg tables")
    p.add_argument("--backend", choices=("exact", "logfloat"), default="exact")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("profile", help="cumulative slice counts and density ratios up to N")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("verify", help="run a named check suite, exit 1 on failure")
    common(p)
    p.set_defaults(format="json")
    p.add_argument("--suite", required=True)
    p.add_argument("--n", default=None, help="N or LO..HI, suite dependent")
    p.add_argument("--trials", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("heads", help="head positions of a circular +- sequence")
    p.add_argument("--sequence", required=True, help="string over {+,-}")
    p.add_argument("--mu", required=True, help="slope num/den")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_heads)

    p = sub.add_parser("simulate", help="Monte Carlo boundary-crossing estimate")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--C", default="3", help="boundary coefficient, num/den")
    p.add_argument("--offset", type=int, default=100)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--with-exact", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("render", help="text drawing of a walk against its boundary")
    common(p)
    p.add_argument("--set", default=None, help="comma-separated elements")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--path", default=None, help="string over {+,-}")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GuardError as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except AmbiguityError as exc:
        print(f"numeric guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
