"""Command-line interface: one subcommand per library operation.

Exit codes: 0 success, 1 validation error, 2 capacity or budget error.  CSV
output is deterministic for fixed inputs; metadata lines are prefixed '#'.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import census as census_mod
from . import cycle as cycle_mod
from . import dynsys, polignac, refvalues, survival
from .census import Constellation
from .primal import CapacityError, is_prime, next_prime, phi_i, primes_in

CACHE_ENV = "GAPSIEVE_CACHE_DIR"
PRINT_LIMIT = 100_000  # refuse to dump larger cycles to stdout


def _cache_dir() -> Path | None:
    d = os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def load_or_build_cycle(p: int) -> cycle_mod.GapCycle:
    """Build the stage-p cycle, round-tripping through the cache dir if set."""
    d = _cache_dir()
    if d is not None:
        d.mkdir(parents=True, exist_ok=True)
        path = d / f"g{p}.gapc"
        if path.exists():
            return cycle_mod.read_cache(str(path))
        cycle = cycle_mod.build_primorial_cycle(p)
        cycle_mod.write_cache(str(path), cycle)
        return cycle
    return cycle_mod.build_primorial_cycle(p)


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _require_prime(p: int, what: str = "prime") -> int:
    if not is_prime(p):
        raise ValueError(f"{what} {p} is not prime")
    return p


def _parse_targets(gaps: list[int] | None, constellation: str | None):
    targets: list[Constellation | int] = []
    if gaps:
        for g in gaps:
            Constellation((g,))  # validates even and positive
            targets.append(g)
    if constellation:
        targets.append(Constellation.parse(constellation))
    if not targets:
        raise ValueError("no targets: pass --gap and/or --constellation")
    return targets


def cmd_build(args) -> int:
    p = _require_prime(args.prime)
    if args.stream and not args.out:
        raise ValueError("--stream writes to disk; pass --out FILE")
    if args.out and args.stream:
        cycle = cycle_mod.build_primorial_cycle_streaming(p, args.out)
    else:
        cycle = cycle_mod.build_primorial_cycle(p)
        if args.out:
            cycle_mod.write_cache(args.out, cycle)
    if args.out:
        print(f"wrote {cycle.gap_count} gaps (modulus {cycle.modulus}) to {args.out}")
    else:
        if cycle.gap_count > PRINT_LIMIT:
            raise ValueError(
                f"{cycle.gap_count} gaps is too large to print; use --out FILE"
            )
        print(cycle_mod.render_compact(cycle))
    return 0


def cmd_verify(args) -> int:
    cycle = cycle_mod.read_cache(args.cycle)
    report = cycle_mod.verify_cycle(cycle, oracle=args.oracle)
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


def cmd_census(args) -> int:
    cycle = cycle_mod.read_cache(args.cycle)
    if args.constellation:
        s = Constellation.parse(args.constellation)
        result = census_mod.driving_terms_for_constellation(cycle, s)
        counts = result.vector(args.max_len or result.max_length)
        print(f"{s}," + ",".join(str(c) for c in counts))
        if args.csv:
            rows = "\n".join(
                f"{s},{j},{c}" for j, c in zip(range(s.length, s.length + len(counts)), counts)
            )
            _write_text(args.csv, f"# census modulus={cycle.modulus}\ntarget,j,count\n{rows}\n")
        return 0
    table = census_mod.census_table(cycle, args.gap, args.max_len or 9)
    for row in table.rows:
        counts = row.counts
        while len(counts) > 1 and counts[-1] == 0:
            counts = counts[:-1]
        flag = " (truncated)" if row.truncated else ""
        print(f"{row.gap}," + ",".join(str(c) for c in counts) + flag)
    if args.csv:
        _write_text(args.csv, table.to_csv(normalize=args.normalize))
    return 0


def cmd_model(args) -> int:
    cycle = cycle_mod.read_cache(args.cycle)
    p0 = cycle.prime
    pk = args.to_prime
    if pk <= p0:
        raise ValueError(f"--to-prime {pk} must exceed the cycle stage {p0}")
    result = census_mod.census_for(cycle, args.gap)
    v = dynsys.PopulationVector.from_census(result)
    ref = phi_i(2, cycle.modulus)
    lines = ["# population model: raw counts and ratios to the gap 2", "prime,j,raw_count,ratio"]

    def emit(p: int, vec: dynsys.PopulationVector, ref_val: int) -> None:
        for i, j in enumerate(range(vec.j1, vec.max_length + 1)):
            raw = vec.entries[i]
            lines.append(f"{p},{j},{raw},{Fraction(raw, ref_val)}")

    emit(p0, v, ref)
    p = p0
    while p < pk:
        p = next_prime(p)
        if p > pk:
            break
        v = dynsys.step(v, p)
        ref *= p - 2
        emit(p, v, ref)
    text = "\n".join(lines) + "\n"
    if args.csv:
        _write_text(args.csv, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_asymptotic(args) -> int:
    if args.constellation:
        if not args.cycle:
            raise ValueError("--constellation needs --cycle FILE for initial conditions")
        s = Constellation.parse(args.constellation)
        cycle = cycle_mod.read_cache(args.cycle)
        if dynsys.validity(s, cycle.prime) is dynsys.Validity.INVALID:
            raise ValueError(
                f"constellation {s} is not valid at stage {cycle.prime}; "
                "an interval sum has a larger prime factor"
            )
        result = census_mod.driving_terms_for_constellation(cycle, s)
        v = dynsys.normalize(dynsys.PopulationVector.from_census(result), cycle.modulus)
        print(dynsys.asymptotic_ratio(v))
        return 0
    if args.gap is None:
        raise ValueError("pass --gap G or --constellation LIST")
    g = args.gap
    if args.at_prime:
        print(polignac.partial_ratio(g, args.at_prime))
    else:
        print(polignac.hl_ratio(g))
    return 0


def cmd_repetition(args) -> int:
    spec = polignac.repetition_weight(args.gap, args.length)
    w_part = polignac.partial_ratio(args.gap, spec.modulus.largest_factor)
    print("g,qbar,w_partial,w_infinity,feasible")
    w_inf = spec.w_infinity if spec.feasible else ""
    print(
        f"{spec.g},{spec.modulus.largest_factor},{w_part},{w_inf},"
        f"{'true' if spec.feasible else 'false'}"
    )
    return 0


def cmd_ajk(args) -> int:
    products = dynsys.eigenvalue_products(args.p0, args.pk, args.jmax)
    print("j,a_j")
    for j in sorted(products):
        print(f"{j},{products[j]:.14f}")
    return 0


def cmd_crossover(args) -> int:
    cycle = cycle_mod.read_cache(args.cycle)
    va = dynsys.normalize(
        dynsys.PopulationVector.from_census(census_mod.census_for(cycle, args.gap_a)),
        cycle.modulus,
    )
    vb = dynsys.normalize(
        dynsys.PopulationVector.from_census(census_mod.census_for(cycle, args.gap_b)),
        cycle.modulus,
    )
    result = dynsys.crossover(va, vb)
    if result is None:
        print("no crossover")
        return 0
    print(f"a2* = {result.root:.6f}")
    if args.map_prime:
        approx = dynsys.approximate_prime_for_decay(result.root, cycle.prime)
        print(f"approximate stage prime ~ {approx:.3e}")
    return 0


def cmd_attrition(args) -> int:
    cycle = cycle_mod.read_cache(args.cycle)
    trace = survival.attrition(cycle)
    print(
        f"stages {trace.sieve_primes[0]}..{trace.sieve_primes[-1]}: "
        f"{len(trace.initial_histogram)} gap sizes, "
        f"{sum(trace.initial_histogram.values())} gaps -> {trace.final_gap_count} gaps, "
        f"max surviving gap {trace.max_surviving_gap}"
    )
    if args.csv:
        _write_text(args.csv, survival.attrition_histograms_csv(trace))
    return 0


def cmd_naive_error(args) -> int:
    targets = _parse_targets(args.gaps, args.constellation)
    stages = [p for p in primes_in(args.pmin, args.pmax)]
    cycles = []
    for p in stages:
        if p > 23 and not args.stream_ok:
            raise CapacityError(f"stage {p} cycle needs streaming; rerun with --stream-ok")
        cycles.append(load_or_build_cycle(p))
    rows = survival.error_report(cycles, targets, budget=args.budget)
    _write_text(args.csv, survival.error_report_csv(rows))
    return 0


def _reproduce_table2() -> list[str]:
    cycle = load_or_build_cycle(13)
    lines = []
    ok_all = True
    for g, expected in refvalues.GAP_CENSUS_13.items():
        got = census_mod.census_for(cycle, g).vector()
        got = got + [0] * (len(expected) - len(got))
        ok = got == expected
        w = polignac.hl_ratio(g)
        ok_w = w == refvalues.GAP_W_INFINITY[g]
        ok_all = ok_all and ok and ok_w
        lines.append(f"gap {g}: counts {'PASS' if ok else 'FAIL ' + str(got)}, "
                     f"w_inf {'PASS' if ok_w else 'FAIL ' + str(w)}")
    lines.append(f"table2: {'PASS' if ok_all else 'FAIL'}")
    return lines


def _reproduce_table5() -> list[str]:
    lines = []
    ok_all = True
    for text, span, j1, top, p0, counts, w_inf in refvalues.CONSTELLATION_CASES:
        s = Constellation.parse(text)
        cycle = load_or_build_cycle(p0)
        result = census_mod.driving_terms_for_constellation(cycle, s)
        got = result.vector()
        v = dynsys.normalize(dynsys.PopulationVector.from_census(result), cycle.modulus)
        w = dynsys.asymptotic_ratio(v)
        ok = (
            s.span == span
            and s.length == j1
            and result.max_length == top
            and got == counts
            and w == w_inf
        )
        ok_all = ok_all and ok
        lines.append(f"constellation {text}: {'PASS' if ok else f'FAIL (counts {got}, w {w})'}")
    lines.append(f"table5: {'PASS' if ok_all else 'FAIL'}")
    return lines


def _reproduce_fig5() -> list[str]:
    cycle = load_or_build_cycle(13)
    trace = survival.attrition(cycle)
    figure_primes = [q for q in trace.sieve_primes if q != refvalues.ATTRITION_13_OMITTED_PRIME]
    figure_trace = survival.attrition(cycle, sieve_primes=figure_primes)
    checks = [
        ("initial gap-2 count 1485", trace.initial_histogram.get(2) == 1485),
        ("initial max gap 22", max(trace.initial_histogram) == refvalues.ATTRITION_13_INITIAL_MAX_GAP),
        (
            f"final count {refvalues.ATTRITION_13_FINAL_COUNT} (full sieve list)",
            trace.final_gap_count == refvalues.ATTRITION_13_FINAL_COUNT,
        ),
        (
            f"figure count {refvalues.ATTRITION_13_FIGURE_COUNT} "
            f"(sieve list omitting {refvalues.ATTRITION_13_OMITTED_PRIME}; see notes)",
            figure_trace.final_gap_count == refvalues.ATTRITION_13_FIGURE_COUNT,
        ),
        ("max surviving gap 52", trace.max_surviving_gap == refvalues.ATTRITION_13_MAX_GAP),
        (
            "gap 52 first created at stage 73",
            trace.first_stage_with_gap(52) == refvalues.ATTRITION_13_MAX_GAP_FIRST_STAGE,
        ),
    ]
    lines = [f"{name}: {'PASS' if ok else 'FAIL'}" for name, ok in checks]
    lines.append(f"fig5: {'PASS' if all(ok for _, ok in checks) else 'FAIL'}")
    return lines


def _reproduce_g7() -> list[str]:
    cycle = load_or_build_cycle(7)
    built_ok = cycle.gaps.astype(int).tolist() == refvalues.CYCLE_7_GAPS
    trace = survival.attrition(cycle)
    folded = survival.fold_confirmed_front(trace).astype(int).tolist()
    fold_ok = folded == refvalues.ATTRITION_7_FOLDED
    tail_ok = trace.final_gaps[-5:].astype(int).tolist() == [10, 2, 4, 2, 12]
    lines = [
        f"stage-7 cycle: {'PASS' if built_ok else 'FAIL'}",
        f"attrition folded sequence: {'PASS' if fold_ok else 'FAIL'}",
        f"attrition tail 10,2,4,2,12: {'PASS' if tail_ok else 'FAIL'}",
        f"g7-attrition: {'PASS' if built_ok and fold_ok and tail_ok else 'FAIL'}",
    ]
    return lines


def _reproduce_table3(long_run: bool) -> list[str]:
    if not long_run:
        raise ValueError("table3 sieves to ~1e12 (hours); rerun with --long")
    products = dynsys.eigenvalue_products(13, refvalues.EIGENVALUE_PRODUCTS_PK, 9)
    lines = []
    ok_all = True
    for j, expected in refvalues.EIGENVALUE_PRODUCTS_1E12.items():
        got = products[j]
        ok = abs(got - expected) <= 1e-11
        ok_all = ok_all and ok
        lines.append(f"a_{j}: {got:.14f} vs {expected:.14f} {'PASS' if ok else 'FAIL'}")
    # late-stage ratios of the gaps 6 and 30 implied by these products
    cycle = load_or_build_cycle(13)
    for g, expected_w in ((6, 1.912), (30, 1.579)):
        v = dynsys.normalize(
            dynsys.PopulationVector.from_census(census_mod.census_for(cycle, g)).padded(9),
            cycle.modulus,
        )
        coeffs = dynsys.polynomial_approx(v)
        w = float(coeffs[0]) + sum(
            (-1) ** m * float(coeffs[m]) * products[m + 1] for m in range(1, len(coeffs))
        )
        ok = abs(w - expected_w) <= 5e-3
        ok_all = ok_all and ok
        lines.append(f"w_{g} at 1e12: {w:.3f} vs {expected_w} {'PASS' if ok else 'FAIL'}")
    lines.append(f"table3: {'PASS' if ok_all else 'FAIL'}")
    return lines


def cmd_reproduce(args) -> int:
    table = {
        "table2": lambda: _reproduce_table2(),
        "table3": lambda: _reproduce_table3(args.long),
        "table5": lambda: _reproduce_table5(),
        "fig5": lambda: _reproduce_fig5(),
        "g7-attrition": lambda: _reproduce_g7(),
    }
    lines = table[args.target]()
    for line in lines:
        print(line)
    return 0 if not any("FAIL" in line for line in lines) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gapsieve",
        description="Cycles of gaps in Eratosthenes sieve: censuses, population models, asymptotics, survival.",
    )
    ap.add_argument("--threads", type=int, default=1, metavar="N",
                    help="worker threads for chunked scans (reserved; default 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build the cycle of gaps at a sieve stage")
    p.add_argument("--prime", type=int, required=True, help="sieve stage (prime)")
    p.add_argument("--out", help="cache file to write (.gapc)")
    p.add_argument("--stream", action="store_true",
                   help="stream the final stage to --out instead of holding it in memory")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="validate a cycle cache file's structure")
    p.add_argument("--cycle", required=True, help="cycle cache file")
    p.add_argument("--oracle", action="store_true",
                   help="also rebuild by direct coprime scan and compare")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="count gaps/constellations and their driving terms")
    p.add_argument("--cycle", required=True)
    p.add_argument("--gap", type=int, action="append", default=[], metavar="G")
    p.add_argument("--constellation", metavar="LIST", help="comma list, e.g. 2,10,2")
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--csv", metavar="OUT")
    p.add_argument("--normalize", action="store_true", help="add ratio column to CSV")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("model", help="run the population model from a cycle's censused counts")
    p.add_argument("--cycle", required=True)
    p.add_argument("--gap", type=int, required=True)
    p.add_argument("--to-prime", type=int, required=True)
    p.add_argument("--csv", metavar="OUT")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("asymptotic", help="asymptotic ratio of a gap or constellation")
    p.add_argument("--gap", type=int)
    p.add_argument("--at-prime", type=int, help="partial product attained by this stage")
    p.add_argument("--constellation", metavar="LIST")
    p.add_argument("--cycle", help="cycle file for constellation initial conditions")
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("repetition", help="feasibility and weight of a repeated gap")
    p.add_argument("--gap", type=int, required=True)
    p.add_argument("--length", type=int, required=True, help="repetition length")
    p.set_defaults(func=cmd_repetition)

    p = sub.add_parser("ajk", help="eigenvalue products over a stage range")
    p.add_argument("--p0", type=int, required=True)
    p.add_argument("--pk", type=int, required=True)
    p.add_argument("--jmax", type=int, required=True)
    p.set_defaults(func=cmd_ajk)

    p = sub.add_parser("crossover", help="where two gaps' populations tie")
    p.add_argument("--gap-a", type=int, required=True)
    p.add_argument("--gap-b", type=int, required=True)
    p.add_argument("--cycle", required=True)
    p.add_argument("--map-prime", action="store_true",
                   help="also estimate the stage prime for the root")
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("attrition", help="sieve a fixed cycle to its surviving gaps")
    p.add_argument("--cycle", required=True)
    p.add_argument("--csv", metavar="OUT", help="per-stage gap histograms")
    p.set_defaults(func=cmd_attrition)

    p = sub.add_parser("naive-error", help="naive estimates vs true prime gaps")
    p.add_argument("--pmin", type=int, required=True)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--gaps", type=int, nargs="*", default=[], metavar="G")
    p.add_argument("--constellation", metavar="LIST")
    p.add_argument("--budget", type=int, default=10**10)
    p.add_argument("--csv", required=True, metavar="OUT")
    p.add_argument("--stream-ok", action="store_true",
                   help="allow stages past 23 (large builds)")
    p.set_defaults(func=cmd_naive_error)

    p = sub.add_parser("reproduce", help="check computed values against reference tables")
    p.add_argument("target", choices=["table2", "table3", "table5", "fig5", "g7-attrition"])
    p.add_argument("--long", action="store_true", help="allow multi-hour targets")
    p.set_defaults(func=cmd_reproduce)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads < 1:
        ap.error("--threads must be >= 1")
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, cycle_mod.CacheFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
