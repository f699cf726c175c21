"""``uqglmn verify <suite>``: run verification suites and emit a JSON or text report."""
from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .gauss_currents import (
    RelationChecker,
    build_currents,
    check_delta_support,
    negative_check_grading_off,
    quasi_minor_decompose,
)
from .graded_tensor import ParityStructure
from .hopf_symbolic import (
    check_counit_degeneration,
    check_hopf_axioms,
    check_homomorphism_gl11,
    rep_homomorphism_check,
)
from .report import Status, VerificationOutcome, VerificationReport, matrix_outcome
from .rll_evaluation import check_derived_rll, check_L_coproduct, check_rll, eval_rep, fuse
from .rmatrix import (
    YBEForm,
    build_r,
    build_rtilde,
    check_pt_symmetry,
    check_unitarity,
    check_weight_conservation,
    check_ybe,
    check_ybe_all_forms,
    composite_name,
)
from .rmatrix import _theta_ybe, _three

__all__ = ["SUITES", "RunConfig", "ConfigError", "run", "emit", "main", "sample_values"]

SUITES = ("ybe", "rmatrix-props", "rll", "drinfeld", "serre", "hopf", "negative")
MAX_RANK = 5


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    m: int = 1
    n: int = 1
    trunc: int = 6
    guard: Optional[int] = None
    mode: str = "symbolic"
    seed: int = 0
    grading: bool = True
    suites: Tuple[str, ...] = SUITES
    max_rank: int = MAX_RANK

    @property
    def guard_value(self) -> int:
        return self.trunc if self.guard is None else self.guard

    def validate(self) -> "RunConfig":
        if self.m < 1 or self.n < 1:
            raise ConfigError("m and n must be positive")
        if self.m + self.n > self.max_rank:
            raise ConfigError(f"m+n = {self.m + self.n} exceeds the budget {self.max_rank}")
        if self.trunc < 4:
            raise ConfigError("the window N must be at least 4")
        if self.guard_value < self.trunc:
            raise ConfigError("the guard G must be at least N")
        if self.mode not in ("symbolic", "sampled"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("the seed must be a 64-bit unsigned integer")
        bad = set(self.suites) - set(SUITES)
        if bad or not self.suites:
            raise ConfigError(f"unknown suites {sorted(bad)}")
        return self

    @property
    def ps(self) -> ParityStructure:
        return ParityStructure(self.m, self.n, self.grading)


def sample_values(seed: int) -> Dict[str, Fraction]:
    """Seeded rational q, a, b away from the degenerate loci (q^2 = 1, a/b a small power of q)."""
    rng = random.Random(seed)
    while True:
        q = Fraction(rng.randint(2, 19), rng.randint(1, 7))
        a = Fraction(rng.randint(1, 29), rng.randint(1, 11))
        b = Fraction(rng.randint(1, 29), rng.randint(1, 11))
        if q * q == 1:
            continue
        if any(a == b * q ** k for k in range(-12, 13)):
            continue
        return {"q": q, "a": a, "b": b}


# ---------------------------------------------------------------------------
# suites


Batch = Callable[[], List[VerificationOutcome]]


class _Runner:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.values = sample_values(cfg.seed) if cfg.mode == "sampled" else None
        self._currents = None

    @property
    def graded_ps(self) -> ParityStructure:
        return ParityStructure(self.cfg.m, self.cfg.n)

    def currents(self):
        if self._currents is None:
            self._currents = build_currents(self.cfg.ps, N=self.cfg.trunc, guard=self.cfg.guard_value,
                                            values=self.values)
        return self._currents

    # each suite is a list of batches, run and timed one by one
    def ybe(self) -> List[Batch]:
        ps = self.graded_ps
        if self.cfg.grading:
            return [lambda: check_ybe_all_forms(ps)]
        # the same R with every sign factor dropped
        R = build_r(ps)
        ung = ParityStructure(ps.m, ps.n, False)
        def run():
            lhs, rhs = _theta_ybe(ps, *_three(R), theta_ps=ung)
            return [matrix_outcome("ybe.theta-operator.ungraded", lhs, rhs, composite_name(ps, 3)),
                    check_ybe(build_rtilde(ps), YBEForm.TILDE_PLAIN)]
        return [run]

    def rmatrix_props(self) -> List[Batch]:
        ps = self.graded_ps
        g = self.cfg.grading
        out = []
        for tilde in (False, True):
            R = build_rtilde(ps) if tilde else build_r(ps)
            tag = "rtilde." if tilde else "r."
            out.append(lambda R=R, tag=tag: [o.renamed(tag + o.relation) for o in
                                             [check_pt_symmetry(R), check_unitarity(R, graded=g),
                                              check_weight_conservation(R)]])
        return out

    def rll(self) -> List[Batch]:
        ps = self.graded_ps
        g = self.cfg.grading
        L = eval_rep(ps)
        L2 = fuse(eval_rep(ps, "a"), eval_rep(ps, "b"))
        out = [lambda: check_rll(L, graded=g, values=self.values),
               lambda: [o.renamed(o.relation.replace("D1.rll", "D1.rll.two-point")) for o in
                        check_rll(L2, graded=g, values=self.values)]]
        if g:
            out.append(lambda: check_derived_rll(L, values=self.values))
            if ps.dim <= 3:
                out.append(lambda: check_L_coproduct(ps, values=self.values))
        return out

    def drinfeld(self) -> List[Batch]:
        cfg = self.cfg
        defn = "D2" if (cfg.m, cfg.n) == (1, 1) else "D3"

        def structure():
            C = self.currents()
            out = [C.gauss.check_reconstruction()]
            if cfg.grading:
                g, other = C.gauss, quasi_minor_decompose(C.gauss.L)
                N = cfg.m + cfg.n
                same = all(g.k(j) == other.k(j) for j in range(1, N + 1)) and all(
                    g.e(i) == other.e(i) and g.f(i) == other.f(i) for i in range(1, N))
                out.append(VerificationOutcome("gauss.uniqueness", Status.PASS if same else Status.FAIL))
                out += check_delta_support(C)
            return out

        def rc():
            return RelationChecker(self.currents(), defn)

        return [structure, lambda: rc().kk_rational(), lambda: rc().kk(), lambda: rc().kx(),
                lambda: rc().xx(), lambda: rc().pm()]

    def serre(self) -> List[Batch]:
        if self.cfg.m + self.cfg.n < 3:
            return []
        return [lambda: RelationChecker(self.currents(), "D3").serre()]

    def hopf(self) -> List[Batch]:
        cfg = self.cfg
        ps = cfg.ps
        out = [lambda: check_hopf_axioms(ps)]
        if (cfg.m, cfg.n) == (1, 1):
            out.append(lambda: check_homomorphism_gl11(seed=cfg.seed))
        if cfg.grading:
            out.append(lambda: check_counit_degeneration(ps, N=cfg.trunc, guard=cfg.guard_value, values=self.values))
            out.append(lambda: rep_homomorphism_check(ps, N=cfg.trunc, guard=cfg.guard_value, values=self.values))
        return out

    def negative(self) -> List[Batch]:
        cfg = self.cfg
        return [lambda: negative_check_grading_off(self.graded_ps, N=cfg.trunc, guard=cfg.guard_value,
                                                   values=self.values)]


def run(cfg: RunConfig) -> VerificationReport:
    cfg.validate()
    runner = _Runner(cfg)
    config = {
        "m": cfg.m, "n": cfg.n, "trunc": cfg.trunc, "guard": cfg.guard_value, "mode": cfg.mode,
        "grading": "on" if cfg.grading else "off", "suites": list(s for s in SUITES if s in cfg.suites),
    }
    if cfg.mode == "sampled":
        config["seed"] = cfg.seed
        config["samples"] = {k: str(v) for k, v in runner.values.items()}
        config["note"] = "sampled mode: q, a, b are specialized to seeded rationals"
    report = VerificationReport(config)
    for suite in SUITES:
        if suite not in cfg.suites:
            continue
        for batch in getattr(runner, suite.replace("-", "_"))():
            t0 = time.perf_counter()
            outcomes = batch()
            ms = int((time.perf_counter() - t0) * 1000)
            each = 0 if cfg.mode == "symbolic" else ms // max(1, len(outcomes))
            for o in outcomes:
                report.add(suite, o, millis=each)
    return report


def emit(report: VerificationReport, fmt: str = "json") -> bytes:
    text = report.to_json() if fmt == "json" else report.to_text()
    return text.encode("utf-8")


# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uqglmn", description="Exact verification of U_q[gl(m|n)^(1)] identities.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--m", type=int, default=1)
    v.add_argument("--n", type=int, default=1)
    v.add_argument("--trunc", type=int, default=6, help="window N: N consecutive exponents centred on 0 are compared")
    v.add_argument("--guard", type=int, default=None, help="extra exponents computed beyond the window (default N)")
    v.add_argument("--mode", choices=("symbolic", "sampled"), default="symbolic")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--no-grading", action="store_true", help="forget the Z2 grading (negative run)")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--out", default=None)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    suites = SUITES if args.suite == "all" else (args.suite,)
    cfg = RunConfig(args.m, args.n, args.trunc, args.guard, args.mode, args.seed, not args.no_grading, suites)
    try:
        cfg.validate()
    except ConfigError as exc:
        print(f"uqglmn: error: {exc}", file=sys.stderr)
        return 2
    report = run(cfg)
    data = emit(report, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return report.exit_code()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
