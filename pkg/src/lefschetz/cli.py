"""Command-line front end: ``lefschetz verify|describe|export``."""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import counterexample, injectivity, kahler, symplectic
from .exterior import Form, form_power, standard_symplectic_form
from .io import FormatError, dumps, form_from_json, load_json, parse_scalar
from .metric import CompatibleTriple, op_Lambda, operator_matrix, identity_matrix
from .report import CheckReport

SUITES = ("kahler", "injectivity", "orbit-span", "large-family", "counterexample", "all")
DEFAULT_N = {
    "kahler": [2, 3, 4],
    "injectivity": [3, 4, 5],
    "orbit-span": [2, 3],
    "large-family": [2, 3],
    "counterexample": [2, 3, 4, 5],
}
DEFAULT_SCALES = [Fraction(2), Fraction(3), Fraction(3, 2)]
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


def max_n() -> int:
    raw = os.environ.get("LEFSCHETZ_MAX_N", "6")
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"LEFSCHETZ_MAX_N must be an integer, got {raw!r}")
    return cap


@dataclass
class SuiteConfig:
    suite: str
    ns: list[int] | None = None
    ks: list[int] | None = None
    scales: list[Fraction] | None = None
    budget: int = 4
    out: str | None = None
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}")
        for name, values in (("n", self.ns), ("k", self.ks), ("scale", self.scales)):
            if values is not None and not values:
                raise ConfigError(f"--{name} needs at least one value")
        if self.ns is not None:
            if any(n < 1 for n in self.ns):
                raise ConfigError("n values must be >= 1")
            cap = max_n()
            if any(n > cap for n in self.ns):
                raise ConfigError(f"n exceeds LEFSCHETZ_MAX_N={cap}")
        if self.budget < 1:
            raise ConfigError("budget must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.scales is not None and any(s <= 1 for s in self.scales):
            raise ConfigError("scales must exceed 1")


# tasks are (function, args) pairs of module-level functions so they pickle


def _task_kahler(n: int) -> list[CheckReport]:
    return kahler.kahler_checks(CompatibleTriple.standard(n))


def _task_injectivity(n: int, k: int) -> list[CheckReport]:
    out = [injectivity.verify_injectivity(n, k)]
    if n >= 3 and k < n:
        out.append(injectivity.proof_certificate_kernel(n, k))
    out.append(injectivity.kernel_chain_check(n, k))
    return out


def default_seeds(n: int) -> list[Form]:
    """Non-degenerate 2-forms not proportional to omega."""
    w = standard_symplectic_form(n)
    return [
        w - Form(n, 2, {(2, n + 2): 2}),
        w + Form(n, 2, {(1, 2): 1}),
        w.scale(2) + Form(n, 2, {(1, n + 2): 1}),
        w + Form(n, 2, {(n + 1, n + 2): 3}),
    ]


def _task_orbit(n: int, seed: int, budget: int) -> list[CheckReport]:
    return [symplectic.orbit_span(default_seeds(n)[seed], budget)]


def _task_span_steps(n: int) -> list[CheckReport]:
    return symplectic.verify_span_steps(n)


def _task_large_family(n: int, budget: int) -> list[CheckReport]:
    return [symplectic.large_family_report(n, budget)]


def _task_counterexample(n: int, s: Fraction, ks: tuple | None) -> list[CheckReport]:
    f = counterexample.counterexample_map(n, s)
    out = [counterexample.verify_volume_preserving(f)]
    out += [counterexample.verify_not_k_preserving(f, k) for k in (ks or range(1, n))]
    out.append(counterexample.scaling_factor_check(n, s))
    return out


def _ns(cfg: SuiteConfig, suite: str) -> list[int]:
    return cfg.ns if cfg.ns is not None else DEFAULT_N[suite]


def build_tasks(cfg: SuiteConfig) -> list[tuple[Callable, tuple]]:
    suites = [s for s in SUITES[:-1]] if cfg.suite == "all" else [cfg.suite]
    tasks: list[tuple[Callable, tuple]] = []
    for suite in suites:
        ns = _ns(cfg, suite)
        if suite == "kahler":
            tasks += [(_task_kahler, (n,)) for n in ns]
        elif suite == "injectivity":
            for n in ns:
                if n < 2:
                    raise ConfigError("injectivity needs n >= 2")
                ks = cfg.ks if cfg.ks is not None else range(1, n + 1)
                for k in ks:
                    if not 1 <= k <= n:
                        raise ConfigError(f"k={k} outside 1..{n}")
                    tasks.append((_task_injectivity, (n, k)))
        elif suite == "orbit-span":
            for n in ns:
                if n < 2:
                    raise ConfigError("orbit-span needs n >= 2")
                tasks += [(_task_orbit, (n, i, cfg.budget)) for i in range(len(default_seeds(n)))]
                tasks.append((_task_span_steps, (n,)))
        elif suite == "large-family":
            for n in ns:
                if n < 2:
                    raise ConfigError("large-family needs n >= 2")
                tasks.append((_task_large_family, (n, cfg.budget)))
        elif suite == "counterexample":
            for n in ns:
                if n < 2:
                    raise ConfigError("counterexample needs n >= 2")
                ks = None
                if cfg.ks is not None:
                    ks = tuple(cfg.ks)
                    if any(not 0 < k < n for k in ks):
                        raise ConfigError(f"k must satisfy 0 < k < {n}")
                for s in cfg.scales or DEFAULT_SCALES:
                    tasks.append((_task_counterexample, (n, s, ks)))
    return tasks


def _call(task):
    fn, args = task
    return fn(*args)


def run_suite(cfg: SuiteConfig) -> tuple[int, list[CheckReport]]:
    """Run the configured checks; reports come back in task order whatever ``jobs`` is."""
    cfg.validate()
    tasks = build_tasks(cfg)
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_call, tasks))
    else:
        results = [_call(t) for t in tasks]
    reports = [r for batch in results for r in batch]
    payload = dumps([r.to_json() for r in reports])
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    status = EXIT_OK if reports and all(r.passed for r in reports) else EXIT_FAIL
    return status, reports


def describe_form(a: Form) -> list[str]:
    lines = [f"degree {a.degree}, n={a.n}, {len(a.terms)} terms"]
    summary = [f"degree {a.degree}", f"{len(a.terms)} terms"]
    if a.degree == 2:
        w = symplectic.weight_decompose(a)
        labels = w.nonzero_labels()
        if labels and not w.E and not w.E_prime:
            summary.append("F-weights only")
        lines.append("weights: " + (", ".join(labels) if labels else "none"))
        nondeg = not form_power(a, a.n).is_zero()
        summary.append("non-degenerate" if nondeg else "degenerate")
    primitive = op_Lambda(a, CompatibleTriple.standard(a.n)).is_zero()
    summary.append("primitive" if primitive else "not primitive")
    lines.insert(0, ", ".join(summary))
    lines.append("form: " + a.pretty())
    return lines


def export_operator(op: str, n: int, k: int) -> tuple[dict, bool]:
    """Operator matrix JSON plus whether its sanity identity held."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    if n > max_n():
        raise ConfigError(f"n exceeds LEFSCHETZ_MAX_N={max_n()}")
    if not 0 <= k <= 2 * n:
        raise ConfigError(f"degree {k} outside 0..{2 * n}")
    t = CompatibleTriple.standard(n)
    if op.startswith("Lpow:"):
        try:
            i = int(op.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad power in {op!r}")
        if i < 0 or k + 2 * i > 2 * n:
            raise ConfigError(f"L^{i} on degree {k} leaves 0..{2 * n}")
    elif op == "L":
        if k + 2 > 2 * n:
            raise ConfigError(f"L on degree {k} leaves 0..{2 * n}")
    elif op == "Lambda":
        if k < 2:
            raise ConfigError("Lambda needs degree >= 2")
    elif op not in ("H", "star"):
        raise ConfigError(f"unknown operator {op!r}")
    m = operator_matrix(op, k, t)
    ok = True
    if op == "star":
        ok = operator_matrix("star", 2 * n - k, t) @ m == identity_matrix(n, k).scale((-1) ** k)
    return m.to_json(), ok


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _scale_list(text: str) -> list[Fraction]:
    try:
        return [parse_scalar(v.strip()) for v in text.split(",") if v.strip()]
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lefschetz", description="Exact exterior-algebra verification suites.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--n", type=_int_list, help="half-dimension(s), comma separated")
    v.add_argument("--k", type=_int_list, help="degree parameter(s), comma separated")
    v.add_argument("--scale", type=_scale_list, help="rational scale(s) > 1, e.g. 2,3/2")
    v.add_argument("--budget", type=int, default=4, help="word-length budget (default 4)")
    v.add_argument("--out", help="write the JSON report array here instead of stdout")
    v.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")

    d = sub.add_parser("describe", help="summarise a Form JSON file")
    d.add_argument("path")

    e = sub.add_parser("export", help="write an operator matrix as JSON")
    e.add_argument("op", help="L, Lambda, H, star or Lpow:i")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--out", help="output path (default stdout)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            cfg = SuiteConfig(args.suite, args.n, args.k, args.scale, args.budget, args.out, args.jobs)
            status, reports = run_suite(cfg)
            if args.out:
                for r in reports:
                    print(r.line())
            else:
                sys.stdout.write(dumps([r.to_json() for r in reports]))
            return status
        if args.command == "describe":
            a = form_from_json(load_json(args.path))
            print("\n".join(describe_form(a)))
            return EXIT_OK
        if args.command == "export":
            data, ok = export_operator(args.op, args.n, args.k)
            text = dumps(data)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            if not ok:
                print("star o star != (-1)^k on export", file=sys.stderr)
                return EXIT_FAIL
            return EXIT_OK
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
