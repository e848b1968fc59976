"""Experiment harness for the Generalized Vanishing Conjecture.

Every check works up to an explicit bound ``M``: "for all m >> 0" is read
as "from the stabilization index through M", and reports say so. Reports
serialize to JSON with the keys ``version``, ``config``, ``field``,
``per_m``, ``stabilization_index``, ``seed`` and ``wall_time_ms``, plus a
``mode``/``bound``/``status``/``details`` block for mode-specific data.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from . import __version__
from .diffop import apply_power, verify_theorem1
from .errors import SoundnessError
from .expr import parse
from .fields import FieldSpec
from .generators import (
    random_constant_free_diffop,
    random_diffop,
    random_polynomial,
)
from .polynomials import DiffOp, Polynomial, Ring
from .reduction import LinearForm, build_extended_product
from .weyl import gvc_expression_as_weyl, in_left_ideal_partials

__all__ = [
    "MODES",
    "ExperimentConfig",
    "GvcReport",
    "MStep",
    "check_hypothesis",
    "find_stabilization",
    "corollary1_instance",
    "theorem3_family_check",
    "frobenius_vanishing_check",
    "weyl_semantics_compare",
    "run_experiment",
    "stabilization_index",
]

MODES = ("hypothesis", "stabilize", "corollary1", "theorem1", "theorem3-family", "charp", "weyl-compare")
DEFAULT_BOUND = 8


@dataclass(frozen=True)
class MStep:
    m: int
    hypothesis: bool | None
    conclusion: bool | None


@dataclass
class GvcReport:
    mode: str
    field: str
    bound: int
    per_m: list[MStep]
    config: dict = dc_field(default_factory=dict)
    seed: int | None = None
    status: str = "ok"
    details: dict = dc_field(default_factory=dict)
    wall_time_ms: float = 0.0
    version: str = __version__

    @property
    def stabilization_index(self) -> int | None:
        return stabilization_index(self.per_m)

    @property
    def hypothesis_holds(self) -> bool:
        return all(s.hypothesis for s in self.per_m if s.hypothesis is not None)

    def conclusions(self) -> list[bool | None]:
        return [s.conclusion for s in self.per_m]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "mode": self.mode,
            "config": self.config,
            "field": self.field,
            "bound": self.bound,
            "per_m": [asdict(s) for s in self.per_m],
            "stabilization_index": self.stabilization_index,
            "status": self.status,
            "details": self.details,
            "seed": self.seed,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def body(self) -> dict:
        """The report without timing, for determinism comparisons."""
        d = self.to_dict()
        d.pop("wall_time_ms")
        return d


def stabilization_index(steps: Sequence[MStep]) -> int | None:
    """Smallest tested ``m0`` with the conclusion true for every tested ``m >= m0``."""
    index = None
    for step in reversed(steps):
        if not step.conclusion:
            break
        index = step.m
    return index


def _powers(f: Polynomial, start: int, stop: int):
    """Yield ``(m, f^m)`` for ``m`` in ``start..stop`` incrementally."""
    current = f ** start
    for m in range(start, stop + 1):
        yield m, current
        current = current * f


def check_hypothesis(L: DiffOp, f: Polynomial, M: int) -> list[bool]:
    """Entry ``m-1`` says whether ``L^m f^m = 0``, for ``m = 1..M``."""
    if M < 1:
        raise ValueError("bound M must be at least 1")
    return [not apply_power(L, m, fm) for m, fm in _powers(f, 1, M)]


def find_stabilization(L: DiffOp, f: Polynomial, g: Polynomial, M: int) -> GvcReport:
    """Per-m hypothesis and conclusion ``L^m (g f^m) = 0`` for ``m = 1..M``.

    If the hypothesis fails for some tested m, the report is flagged with
    the first failing m and no conclusions are computed.
    """
    hyp = check_hypothesis(L, f, M)
    report = GvcReport("stabilize", str(L.field), M, [])
    if not all(hyp):
        report.per_m = [MStep(m, h, None) for m, h in enumerate(hyp, 1)]
        _flag_hypothesis_failure(report, hyp)
        return report
    report.per_m = [MStep(m, True, not apply_power(L, m, g * fm)) for m, fm in _powers(f, 1, M)]
    return report


def _flag_hypothesis_failure(report: GvcReport, hyp: list[bool]) -> None:
    report.status = "hypothesis-failed"
    report.details["first_failing_m"] = hyp.index(False) + 1


def corollary1_instance(L: DiffOp, f: Polynomial, d: int, M: int) -> GvcReport:
    """Conclusion ``L^m f^(m+d) = 0``, cross-checked against ``g = f^d``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    hyp = check_hypothesis(L, f, M)
    report = GvcReport("corollary1", str(L.field), M, [])
    report.details["d"] = d
    if not all(hyp):
        report.per_m = [MStep(m, h, None) for m, h in enumerate(hyp, 1)]
        _flag_hypothesis_failure(report, hyp)
        return report
    report.per_m = [MStep(m, True, not apply_power(L, m, fmd)) for m, fmd in _powers(f, 1 + d, M + d)]
    via_g = find_stabilization(L, f, f ** d, M)
    if via_g.conclusions() != report.conclusions():
        raise SoundnessError("corollary 1 cross-check: f^(m+d) and g = f^d disagree")
    report.details["matches_g_equals_f_power_d"] = True
    return report


def theorem3_family_check(forms: Sequence[LinearForm], f: Polynomial, g: Polynomial, M: int) -> GvcReport:
    """Stabilization for a product of linear forms, computed directly and through the extension.

    The extension route applies ``L* = prod (dy_t + l_t)`` to the embedded
    inputs, and also rewrites both sides in the primed coordinates, where
    ``L*`` becomes ``dy_1' ... dy_N'``. All three must agree for every m.
    """
    forms = list(forms)
    if not forms or any(form.is_zero() for form in forms):
        raise ValueError("need nonzero linear forms")
    ring = f.ring
    L = DiffOp.one(ring)
    for form in forms:
        L = L * form.to_diffop(ring)
    report = find_stabilization(L, f, g, M)
    report.mode = "theorem3-family"

    Lstar, ext = build_extended_product(forms)
    big = ext.ring
    transformed = ext.transform(Lstar)
    if transformed != ext.product_target():
        raise SoundnessError(f"coordinate change gave {transformed}, expected a product of dy'")
    for (m, fm) in _powers(f, 1, M):
        direct = apply_power(L, m, g * fm).embed(big)
        F = (g * fm).embed(big)
        extended = apply_power(Lstar, m, F)
        if extended != direct:
            raise SoundnessError(f"extended operator disagrees with L at m={m}")
        primed = apply_power(transformed, m, ext.to_new_coordinates(F))
        if primed != ext.to_new_coordinates(extended):
            raise SoundnessError(f"primed-coordinate computation disagrees at m={m}")
    report.details.update(
        {
            "operator": str(L),
            "extended_operator": str(Lstar),
            "transformed_operator": str(transformed),
            "N": ext.N,
            "paths_agree": True,
        }
    )
    return report


def frobenius_vanishing_check(
    L: DiffOp, g: Polynomial, samples: int = 0, rng: random.Random | None = None
) -> bool:
    """``L^p g = 0`` over F_p for constant-free ``L``, on the given pair and ``samples`` random ones.

    A failure is impossible for a correct implementation and raises
    :class:`SoundnessError`.
    """
    field = L.field
    if field.kind != "FP":
        raise ValueError("frobenius check needs a prime field")
    if L.constant_term():
        raise ValueError("operator must have zero constant term")
    p = field.p
    rng = rng or random.Random(0)
    pairs = [(L, g)]
    for _ in range(samples):
        ring = Ring(field, rng.randint(1, 3))
        pairs.append(
            (
                random_constant_free_diffop(rng, ring, max_degree=3, max_terms=3),
                random_polynomial(rng, ring, max_degree=4, max_terms=4),
            )
        )
    for op, poly in pairs:
        if apply_power(op, p, poly):
            raise SoundnessError(f"L^p g != 0 over {field}: L={op}, g={poly}")
    return True


@dataclass(frozen=True)
class SemanticsComparison:
    action_zero: bool
    ideal_member: bool

    @property
    def agree(self) -> bool:
        return self.action_zero == self.ideal_member


def weyl_semantics_compare(L: DiffOp, m: int, g: Polynomial, f: Polynomial) -> SemanticsComparison:
    """``L^m (g f^m) = 0`` as an action versus left-ideal membership of ``L^m g f^m``.

    In characteristic zero disagreement raises :class:`SoundnessError`; over
    F_p the two values are only recorded.
    """
    action_zero = not apply_power(L, m, g * f ** m)
    ideal_member = in_left_ideal_partials(gvc_expression_as_weyl(L, m, g, f))
    result = SemanticsComparison(action_zero, ideal_member)
    if L.field.characteristic == 0 and not result.agree:
        raise SoundnessError(f"char-0 semantics disagree for L={L}, m={m}, g={g}, f={f}")
    return result


# configuration and dispatch


@dataclass
class ExperimentConfig:
    field: FieldSpec
    n: int
    mode: str
    operator: str | None = None
    f: str | None = None
    g: str | None = None
    d: int | None = None
    M: int = DEFAULT_BOUND
    seed: int = 0
    forms: list[str] | None = None
    samples: int = 0

    def __post_init__(self):
        if isinstance(self.field, str):
            self.field = FieldSpec.parse(self.field)
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.M < 1:
            raise ValueError("bound M must be at least 1")
        if self.n < 1:
            raise ValueError("dimension n must be at least 1")

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        unknown = set(data) - set(known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**known)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["field"] = str(self.field)
        return d

    @property
    def ring(self) -> Ring:
        return Ring(self.field, self.n)

    def operator_value(self) -> DiffOp:
        if self.operator is None:
            if self.forms:
                L = DiffOp.one(self.ring)
                for form in self.form_values():
                    L = L * form.to_diffop(self.ring)
                return L
            raise ValueError(f"mode {self.mode} needs an operator")
        return parse(self.operator, self.field, self.n, want="op")

    def poly(self, name: str, default: str | None = None) -> Polynomial:
        text = getattr(self, name)
        if text is None:
            text = default
        if text is None:
            raise ValueError(f"mode {self.mode} needs {name}")
        return parse(text, self.field, self.n, want="poly")

    def form_values(self) -> list[LinearForm]:
        if not self.forms:
            raise ValueError("theorem3-family mode needs forms")
        return [LinearForm.from_diffop(parse(t, self.field, self.n, want="op")) for t in self.forms]


def run_experiment(config: ExperimentConfig, out: str | Path | None = None) -> GvcReport:
    """Run one configured experiment and optionally write its JSON report to ``out``."""
    start = time.perf_counter()
    report = _dispatch(config)
    report.config = config.to_dict()
    report.seed = config.seed
    report.mode = config.mode
    report.wall_time_ms = (time.perf_counter() - start) * 1000.0
    if out is not None:
        Path(out).write_text(report.to_json(), encoding="utf-8")
    return report


def _dispatch(c: ExperimentConfig) -> GvcReport:
    field = str(c.field)
    if c.mode == "hypothesis":
        L, f = c.operator_value(), c.poly("f")
        hyp = check_hypothesis(L, f, c.M)
        report = GvcReport(c.mode, field, c.M, [MStep(m, h, None) for m, h in enumerate(hyp, 1)])
        if not all(hyp):
            _flag_hypothesis_failure(report, hyp)
        return report
    if c.mode == "stabilize":
        return find_stabilization(c.operator_value(), c.poly("f"), c.poly("g", "1"), c.M)
    if c.mode == "corollary1":
        return corollary1_instance(c.operator_value(), c.poly("f"), c.d if c.d is not None else 1, c.M)
    if c.mode == "theorem3-family":
        return theorem3_family_check(c.form_values(), c.poly("f"), c.poly("g", "1"), c.M)
    if c.mode == "theorem1":
        return _theorem1_scan(c)
    if c.mode == "charp":
        return _charp(c)
    return _weyl_compare(c)


def _theorem1_scan(c: ExperimentConfig) -> GvcReport:
    """Theorem 1 for ``m = max(d, 1)..M`` with ``f~`` taken from ``f``."""
    L, f_tilde, g = c.operator_value(), c.poly("f"), c.poly("g", "1")
    d = c.d if c.d is not None else max(g.total_degree(), 0)
    steps = []
    for m in range(max(d, 1), c.M + 1):
        r = verify_theorem1(L, f_tilde, g, m, d)
        steps.append(MStep(m, r.hypothesis_holds, r.conclusion_holds))
    report = GvcReport(c.mode, str(c.field), c.M, steps)
    report.details["d"] = d
    return report


def _charp(c: ExperimentConfig) -> GvcReport:
    L = c.operator_value()
    g = c.poly("g", c.f or "1")
    ok = frobenius_vanishing_check(L, g, c.samples, random.Random(c.seed))
    steps = [MStep(m, None, not apply_power(L, m, g)) for m in range(1, c.M + 1)]
    report = GvcReport(c.mode, str(c.field), c.M, steps)
    report.details.update({"p": c.field.p, "frobenius_vanishing": ok, "samples": c.samples})
    return report


def _weyl_compare(c: ExperimentConfig) -> GvcReport:
    L, f, g = c.operator_value(), c.poly("f"), c.poly("g", "1")
    hyp = check_hypothesis(L, f, c.M)
    steps, rows = [], []
    for m, h in enumerate(hyp, 1):
        cmp = weyl_semantics_compare(L, m, g, f)
        steps.append(MStep(m, h, cmp.action_zero))
        rows.append({"m": m, "action_zero": cmp.action_zero, "ideal_member": cmp.ideal_member})
    report = GvcReport(c.mode, str(c.field), c.M, steps)
    rng = random.Random(c.seed)
    disagreements = []
    for k in range(c.samples):
        ring = Ring(c.field, rng.randint(1, 2))
        op = random_diffop(rng, ring, max_degree=2, max_terms=3)
        gg = random_polynomial(rng, ring, max_degree=2, max_terms=3)
        ff = random_polynomial(rng, ring, max_degree=2, max_terms=3)
        m = rng.randint(0, 3)
        cmp = weyl_semantics_compare(op, m, gg, ff)
        if not cmp.agree:
            disagreements.append({"sample": k, "L": str(op), "m": m, "g": str(gg), "f": str(ff)})
    report.details.update({"comparisons": rows, "samples": c.samples, "disagreements": disagreements})
    return report
