"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 internal invariant violation,
3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .combinatorics import InputError, MonomialIdeal, complement_complex, union_ideal
from .complement import METHODS, MethodMismatch, complement_report, hochster_homology_of_complex
from .dga import build_model, formality_probe
from .homology import InvariantViolation, simplicial_chain_complex
from .milnor import MONODROMY, milnor_polynomial, milnor_report, quasi_homogeneous_weights
from .moment_angle import build_cellular_complex, oracle_homology
from .textio import format_ideal, parse_arrangement_text, parse_generator_lines, parse_ideal_text

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_MISMATCH = 0, 1, 2, 3

# Answer key for the worked example: five codimension-2 coordinate subspaces
# H12, H23, H34, H45, H56 of C^6, their vanishing ideal, the 11-variable
# Milnor polynomial and the integral homology of its Milnor fibre.
EXAMPLE_ARRANGEMENT = [[1, 2], [2, 3], [3, 4], [4, 5], [5, 6]]
EXAMPLE_N = 6
EXAMPLE_GENERATORS = ["x1*x3*x4*x6", "x1*x3*x5", "x2*x3*x5", "x2*x4*x6", "x2*x4*x5"]
EXAMPLE_POLYNOMIAL = "y1x1x3x4x6+y2x1x3x5+y3x2x3x5+y4x2x4x6+y5x2x4x5"
EXAMPLE_HOMOLOGY = {0: 1, 3: 5, 4: 4, 6: 3, 7: 4, 8: 1}


@dataclass
class RunConfig:
    command: str
    text: str | None
    arrangement: bool
    n: int | None
    formula: str
    coefficients: str
    json: bool
    threads: int
    degree_cap: int | None
    dump_dir: str | None
    total_degree: int | None
    weights: list[int] | None

    @property
    def methods(self) -> tuple[str, ...]:
        return METHODS if self.formula == "all" else (self.formula,)


def fixture_text(name: str) -> str:
    path = resources.files("milnor_complement") / "fixtures" / f"{name}.txt"
    if not path.is_file():
        available = sorted(p.name[:-4] for p in (resources.files("milnor_complement") / "fixtures").iterdir())
        raise InputError(f"unknown fixture {name!r}; available: {', '.join(available)}")
    return path.read_text()


def _read_input(args) -> tuple[str | None, bool]:
    arrangement = getattr(args, "arrangement", False)
    if getattr(args, "fixture", None):
        return fixture_text(args.fixture), arrangement or args.fixture.endswith("_arrangement")
    source = getattr(args, "input", None)
    if source is None:
        return None, arrangement
    if source == "-":
        return sys.stdin.read(), arrangement
    if os.path.exists(source):
        return Path(source).read_text(), arrangement
    return source, arrangement


def make_config(args) -> RunConfig:
    text, arrangement = _read_input(args)
    threads = getattr(args, "threads", 1)
    if threads < 1:
        raise InputError("--threads must be at least 1")
    weights = getattr(args, "weights", None)
    if weights:
        try:
            weights = [int(w) for w in weights.split(",")]
        except ValueError as exc:
            raise InputError(f"--weights expects integers: {exc}") from exc
    return RunConfig(
        command=args.command,
        text=text,
        arrangement=arrangement,
        n=getattr(args, "n", None),
        formula=getattr(args, "formula", "hochster"),
        coefficients=getattr(args, "coefficients", "integers"),
        json=getattr(args, "json", False),
        threads=threads,
        degree_cap=getattr(args, "degree_cap", None),
        dump_dir=getattr(args, "dump_matrices", None),
        total_degree=getattr(args, "total_degree", None),
        weights=weights,
    )


def load_ideal(config: RunConfig) -> MonomialIdeal:
    if config.text is None:
        raise InputError("no input given (pass a file, inline generators or --fixture)")
    if config.arrangement:
        subspaces, n = parse_arrangement_text(config.text)
        return union_ideal(subspaces, n)
    return parse_ideal_text(config.text, config.n)


def _emit(config: RunConfig, payload: dict, text: str) -> None:
    if config.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _dump(config: RunConfig, ideal: MonomialIdeal) -> None:
    if not config.dump_dir:
        return
    out = Path(config.dump_dir)
    out.mkdir(parents=True, exist_ok=True)
    K = complement_complex(ideal)
    for d, B in sorted(simplicial_chain_complex(K).boundaries.items()):
        B.dump(out / f"complex_d{d}.txt")
    for d, B in sorted(build_cellular_complex(K).boundaries.items()):
        B.dump(out / f"oracle_d{d}.txt")


def cmd_complement(config: RunConfig) -> int:
    ideal = load_ideal(config)
    _dump(config, ideal)
    report = complement_report(ideal, config.methods, config.threads, config.coefficients)
    _emit(config, report.to_json(), report.text())
    return EXIT_OK


def cmd_milnor(config: RunConfig) -> int:
    if config.text is None:
        raise InputError("no input given")
    if config.arrangement:
        gens = load_ideal(config)
    else:
        lines, header_n = parse_generator_lines(config.text)
        raw = [g for _, g in lines]
        try:
            gens = parse_ideal_text(config.text, config.n)
            # keep the user's generator list (order and multiplicity) for emission
            if len(gens.generators) != len(raw):
                gens = raw
        except InputError:
            gens = raw
        config.n = config.n or header_n
    report = milnor_report(
        gens,
        n=config.n,
        x_weights=config.weights,
        total_degree=config.total_degree,
        methods=config.methods,
        degree_cap=config.degree_cap,
        threads=config.threads,
    )
    _emit(config, report.to_json(), report.text())
    return EXIT_OK


def cmd_union_ideal(config: RunConfig) -> int:
    if config.text is None:
        raise InputError("no input given")
    subspaces, n = parse_arrangement_text(config.text)
    ideal = union_ideal(subspaces, n)
    if ideal.is_unit:
        text = "1  # unit ideal: the arrangement is empty"
    elif ideal.is_zero:
        text = "0  # zero ideal: the arrangement contains the whole space"
    else:
        text = format_ideal(ideal)
    payload = {
        "schema": 1,
        "n": n,
        "arrangement": [sorted(s) for s in subspaces],
        "generators": [str(g) for g in ideal.generators],
        "unit": ideal.is_unit,
        "zero": ideal.is_zero,
    }
    _emit(config, payload, text)
    return EXIT_OK


def cmd_massey(config: RunConfig) -> int:
    ideal = load_ideal(config)
    model = build_model(complement_complex(ideal))
    report = formality_probe(model, config.degree_cap, config.threads)
    payload = {
        "schema": 1,
        "ideal": [str(g) for g in ideal.generators],
        "n": ideal.n,
        "model_dimension": model.size,
        "cohomology_betti": model.betti(),
        "verdict": report.message,
        "degree_cap": report.degree_cap,
        "triples_checked": report.triples_checked,
        "witness": report.witness.to_json(model) if report.witness else None,
    }
    lines = [
        f"ideal: {ideal}",
        f"model dimension: {model.size}",
        "cohomology betti: " + " ".join(map(str, model.betti())),
        f"triples checked: {report.triples_checked} (degree cap {report.degree_cap})",
        f"verdict: {report.message}",
    ]
    if report.witness:
        lines += ["witness:"] + ["  " + s for s in report.witness.text(model).splitlines()]
    _emit(config, payload, "\n".join(lines))
    return EXIT_OK


def cmd_oracle_check(config: RunConfig) -> int:
    ideal = load_ideal(config)
    _dump(config, ideal)
    K = complement_complex(ideal)
    hochster = hochster_homology_of_complex(K, config.threads)
    oracle = oracle_homology(K, config.threads)
    agree = hochster == oracle
    payload = {
        "schema": 1,
        "ideal": [str(g) for g in ideal.generators],
        "n": ideal.n,
        "hochster": hochster.to_json(),
        "oracle": oracle.to_json(),
        "agree": agree,
    }
    text = "\n".join(
        ["hochster:"] + ["  " + s for s in hochster.lines()]
        + ["oracle:"] + ["  " + s for s in oracle.lines()]
        + ["agree" if agree else "MISMATCH"]
    )
    _emit(config, payload, text)
    return EXIT_OK if agree else EXIT_INTERNAL


def verify_example(threads: int = 1) -> list[tuple[str, bool, str]]:
    """Recompute the worked example and compare against the answer key."""
    checks: list[tuple[str, bool, str]] = []
    ideal = union_ideal(EXAMPLE_ARRANGEMENT, EXAMPLE_N)
    got = sorted(str(g) for g in ideal.generators)
    checks.append(("union ideal", got == sorted(EXAMPLE_GENERATORS), ", ".join(got)))

    key_ideal = parse_ideal_text("\n".join(EXAMPLE_GENERATORS), EXAMPLE_N)
    f = milnor_polynomial(key_ideal)
    compact = str(f).replace("*", "").replace(" ", "")
    checks.append(("Milnor polynomial", compact == EXAMPLE_POLYNOMIAL and f.n + f.r == 11, str(f)))
    w = quasi_homogeneous_weights(key_ideal)
    checks.append(("weight system", w.check(f), f"x={w.x_weights} y={w.y_weights} d={w.total_degree}"))

    report = complement_report(key_ideal, METHODS, threads)
    for name, group in report.methods.items():
        ranks = {d: r for d, (r, _) in group.groups.items()}
        ok = ranks == EXAMPLE_HOMOLOGY and not group.has_torsion()
        checks.append((f"homology via {name}", ok, "; ".join(group.lines())))
    checks.append(("simply connected", report.simply_connected.value == "certified-true", report.simply_connected.value))
    model = build_model(complement_complex(key_ideal))
    probe = formality_probe(model, threads=threads)
    detail = probe.message
    if probe.witness:
        detail += f" (degree {probe.witness.degree})"
    checks.append(("non-formal", probe.certified, detail))
    checks.append(("monodromy", MONODROMY == "trivial", MONODROMY))
    return checks


def cmd_verify_example(config: RunConfig) -> int:
    checks = verify_example(config.threads)
    ok = all(passed for _, passed, _ in checks)
    payload = {
        "schema": 1,
        "checks": [{"name": name, "passed": passed, "value": value} for name, passed, value in checks],
        "passed": ok,
    }
    text = "\n".join(f"[{'ok' if passed else 'MISMATCH'}] {name}: {value}" for name, passed, value in checks)
    _emit(config, payload, text)
    return EXIT_OK if ok else EXIT_MISMATCH


COMMANDS = {
    "complement": cmd_complement,
    "milnor": cmd_milnor,
    "union-ideal": cmd_union_ideal,
    "massey": cmd_massey,
    "oracle-check": cmd_oracle_check,
    "verify-example": cmd_verify_example,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milnor-complement",
        description="Invariants of coordinate subspace arrangement complements and their Milnor polynomials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input", nargs="?", help="input file, '-' for stdin, or inline generators separated by ';'")
            p.add_argument("--fixture", help="use a bundled fixture, e.g. path_ideal or rp2_arrangement")
            p.add_argument("--arrangement", action="store_true", help="input lists subspaces, not generators")
            p.add_argument("-n", type=int, help="number of variables (ideal input)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--threads", type=int, default=1, metavar="N")

    p = sub.add_parser("complement", help="homology of the arrangement complement")
    common(p)
    p.add_argument("--formula", choices=[*METHODS, "all"], default="hochster")
    p.add_argument("--coefficients", choices=["integers", "rationals"], default="integers")
    p.add_argument("--dump-matrices", metavar="DIR")

    p = sub.add_parser("milnor", help="Milnor polynomial and Milnor-fibre report")
    common(p)
    p.add_argument("--formula", choices=[*METHODS, "all"], default="hochster")
    p.add_argument("--total-degree", type=int, metavar="D")
    p.add_argument("--weights", help="comma-separated x-weights (default all 1)")
    p.add_argument("--degree-cap", type=int, metavar="D")

    p = sub.add_parser("union-ideal", help="vanishing ideal of a union of coordinate subspaces")
    p.add_argument("input", nargs="?")
    p.add_argument("--fixture")
    common(p, with_input=False)

    p = sub.add_parser("massey", help="search for a nontrivial triple Massey product")
    common(p)
    p.add_argument("--degree-cap", type=int, metavar="D")

    p = sub.add_parser("oracle-check", help="compare Hochster's formula against the cellular oracle")
    common(p)
    p.add_argument("--dump-matrices", metavar="DIR")

    p = sub.add_parser("verify-example", help="reproduce the worked six-variable example")
    common(p, with_input=False)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are input errors here
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        config = make_config(args)
        return COMMANDS[config.command](config)
    except MethodMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
