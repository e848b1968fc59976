"""Property batteries: randomized, seeded checks of every identity the library relies on.

Each battery returns a :class:`BatteryResult`; none of them raise on a
mathematical failure, so a caller can report all of them. ``verify-suite``
on the command line runs :func:`run_all`.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Callable

from .diffop import apply, apply_power, commutator_action, commutator_decompose, verify_theorem1
from .errors import ParseError, SoundnessError
from .expr import format_expr, parse, parse_ast
from .fields import GF, QQ, QQI, FieldSpec
from .generators import (
    random_constant_free_diffop,
    random_diffop,
    random_invertible_matrix,
    random_linear_form,
    random_polynomial,
    random_weyl,
    theorem1_instance,
)
from .lab import (
    corollary1_instance,
    find_stabilization,
    frobenius_vanishing_check,
    weyl_semantics_compare,
)
from .polynomials import DiffOp, Polynomial, Ring, substitute_linear
from .reduction import (
    PowerSumDecomposition,
    build_extended_operator,
    build_extended_product,
    decompose_power_sums,
    polarize_monomial,
    transform_diffop,
)
from .weyl import (
    WeylElement,
    act,
    fourier_automorphism,
    from_partials_left,
    in_left_ideal_partials,
    reorder_partials_left,
    weyl_mul,
)

FIELDS = (QQ, QQI, GF(5))


@dataclass
class BatteryResult:
    name: str
    checked: int = 0
    failures: list[str] = dc_field(default_factory=list)
    seconds: float = 0.0
    info: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked > 0

    def fail(self, message: str) -> None:
        if len(self.failures) < 20:
            self.failures.append(message)
        else:
            self.failures.append("...")

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", {len(self.failures)} failures" if self.failures else ""
        return f"[{status}] {self.name}: {self.checked} checks{extra} ({self.seconds:.2f}s)"


def _timed(name: str, body: Callable[[BatteryResult], None]) -> BatteryResult:
    result = BatteryResult(name)
    start = time.perf_counter()
    try:
        body(result)
    except SoundnessError as exc:
        result.fail(f"soundness error: {exc}")
    result.seconds = time.perf_counter() - start
    return result


# 1. Theorem 1


def theorem1_soundness(count: int = 200, seed: int = 1) -> BatteryResult:
    """Generated instances over Q and F_5 with the hypothesis forced."""

    def body(r: BatteryResult):
        rng = random.Random(seed)
        hyp_true = 0
        for k in range(count):
            field = QQ if k % 2 == 0 else GF(5)
            L, f_tilde, g, m, d = theorem1_instance(rng, field)
            report = verify_theorem1(L, f_tilde, g, m, d, strict=False)
            r.checked += 1
            if report.hypothesis_holds:
                hyp_true += 1
                if not report.conclusion_holds:
                    r.fail(f"L={L} f~={f_tilde} g={g} m={m} d={d}")
            else:
                r.fail(f"generator did not force the hypothesis: L={L} f~={f_tilde} m={m} d={d}")
        r.info["hypothesis_true"] = hyp_true

    return _timed("theorem1-soundness", body)


# 2. commutator decomposition


def commutator_decomposition(count: int = 200, probes: int = 5, seed: int = 2) -> BatteryResult:
    def body(r: BatteryResult):
        rng = random.Random(seed)
        for k in range(count):
            field = FIELDS[k % len(FIELDS)]
            ring = Ring(field, rng.randint(1, 3))
            L = random_diffop(rng, ring, max_degree=4, max_terms=4)
            g = random_polynomial(rng, ring, max_degree=3, max_terms=4)
            dec = commutator_decompose(L, g)
            bound = g.total_degree() - 1
            if any(poly.total_degree() > bound for _, poly in dec.pairs):
                r.fail(f"degree bound broken for L={L}, g={g}")
            for _ in range(probes):
                f = random_polynomial(rng, ring, max_degree=4, max_terms=4)
                r.checked += 1
                if dec.evaluate(f) != commutator_action(L, g, f):
                    r.fail(f"L={L} g={g} f~={f}")

    return _timed("commutator-decomposition", body)


# 3. Weyl algebra


def weyl_relations(max_n: int = 3) -> BatteryResult:
    def body(r: BatteryResult):
        for field in FIELDS:
            ring = Ring(field, max_n)
            one = WeylElement.one(ring)
            for i, j in product(range(max_n), repeat=2):
                X, D = WeylElement.x, WeylElement.d
                checks = [
                    weyl_mul(D(ring, i), X(ring, j)) - weyl_mul(X(ring, j), D(ring, i))
                    == (one if i == j else WeylElement.zero(ring)),
                    weyl_mul(X(ring, i), X(ring, j)) == weyl_mul(X(ring, j), X(ring, i)),
                    weyl_mul(D(ring, i), D(ring, j)) == weyl_mul(D(ring, j), D(ring, i)),
                ]
                r.checked += len(checks)
                if not all(checks):
                    r.fail(f"relations fail for i={i + 1}, j={j + 1} over {field}")

    return _timed("weyl-relations", body)


def weyl_associativity(count: int = 200, seed: int = 3) -> BatteryResult:
    def body(r: BatteryResult):
        rng = random.Random(seed)
        for k in range(count):
            ring = Ring(FIELDS[k % len(FIELDS)], rng.randint(1, 2))
            a, b, c = (random_weyl(rng, ring, 3, 3) for _ in range(3))
            r.checked += 1
            if weyl_mul(weyl_mul(a, b), c) != weyl_mul(a, weyl_mul(b, c)):
                r.fail(f"({a})({b})({c})")

    return _timed("weyl-associativity", body)


def weyl_action(count: int = 200, seed: int = 4) -> BatteryResult:
    """Module action and the act(E, 1) = 0 <=> ideal membership equivalence, all fields."""

    def body(r: BatteryResult):
        rng = random.Random(seed)
        for k in range(count):
            field = FIELDS[k % len(FIELDS)]
            ring = Ring(field, rng.randint(1, 3))
            E = random_weyl(rng, ring, 3, 4)
            if rng.random() < 0.5:
                # bias towards members: right-multiply by a partial
                E = weyl_mul(E, WeylElement.d(ring, rng.randrange(ring.dim)))
            one = Polynomial.one(ring)
            r.checked += 1
            if in_left_ideal_partials(E) != (not act(E, one)):
                r.fail(f"ideal/action mismatch for {E}")
            E2 = random_weyl(rng, ring, 2, 3)
            f = random_polynomial(rng, ring, 3, 4)
            r.checked += 1
            if act(weyl_mul(E, E2), f) != act(E, act(E2, f)):
                r.fail(f"module action fails for {E}, {E2}, {f}")

    return _timed("weyl-action-ideal", body)


def weyl_fourier(count: int = 100, seed: int = 5) -> BatteryResult:
    def body(r: BatteryResult):
        rng = random.Random(seed)
        for k in range(count):
            ring = Ring(FIELDS[k % len(FIELDS)], rng.randint(1, 2))
            a, b = random_weyl(rng, ring, 2, 3), random_weyl(rng, ring, 2, 3)
            phi = fourier_automorphism
            r.checked += 2
            if phi(weyl_mul(a, b)) != weyl_mul(phi(a), phi(b)):
                r.fail(f"not multiplicative on {a}, {b}")
            if phi(phi(phi(phi(a)))) != a:
                r.fail(f"order is not 4 on {a}")

    return _timed("weyl-fourier", body)


def weyl_reorder(count: int = 200, seed: int = 6) -> BatteryResult:
    def body(r: BatteryResult):
        rng = random.Random(seed)
        for k in range(count):
            ring = Ring(FIELDS[k % len(FIELDS)], rng.randint(1, 3))
            E = random_weyl(rng, ring, 3, 4)
            r.checked += 1
            if from_partials_left(reorder_partials_left(E), ring) != E:
                r.fail(f"round trip fails for {E}")

    return _timed("weyl-reorder-roundtrip", body)


# 4. reduction


def polarization(max_degree: int = 5, max_n: int = 4) -> BatteryResult:
    def body(r: BatteryResult):
        for n in range(1, max_n + 1):
            ring = Ring(QQ, n)
            for alpha in product(range(max_degree + 1), repeat=n):
                if sum(alpha) > max_degree:
                    continue
                psd = polarize_monomial(alpha, QQ)
                r.checked += 1
                if sum(alpha) and psd.reconstruct() != DiffOp.monomial(ring, alpha):
                    r.fail(f"alpha={alpha}")

    return _timed("polarization", body)


def transport(count: int = 100, seed: int = 7) -> BatteryResult:
    """``L*`` agrees with ``L`` on x-only inputs, for both the sum and the product construction."""

    def body(r: BatteryResult):
        rng = random.Random(seed)
        for k in range(count):
            ring = Ring(QQ, rng.randint(1, 3))
            if k % 2 == 0:
                L = random_diffop(rng, ring, max_degree=3, max_terms=3)
                if not L:
                    L = DiffOp.partial(ring, 0)
                Lstar, ext = build_extended_operator(decompose_power_sums(L))
            else:
                forms = [random_linear_form(rng, QQ, ring.n) for _ in range(rng.randint(1, 3))]
                Lstar, ext = build_extended_product(forms)
                L = DiffOp.one(ring)
                for form in forms:
                    L = L * form.to_diffop(ring)
            f = random_polynomial(rng, ring, 3, 3)
            g = random_polynomial(rng, ring, 3, 3)
            m = rng.randint(1, 3)
            h = g * f ** m
            r.checked += 1
            if apply_power(Lstar, m, h.embed(ext.ring)) != apply_power(L, m, h).embed(ext.ring):
                r.fail(f"L={L} f={f} g={g} m={m}")

    return _timed("extension-transport", body)


def coordinate_change(count: int = 50, seed: int = 8) -> BatteryResult:
    """Each ``dy_j + l_j`` becomes ``dy_j'``; ``L*`` becomes ``sum c_t dy_t'^(d_t)``."""

    def body(r: BatteryResult):
        rng = random.Random(seed)
        for _ in range(count):
            ring = Ring(QQ, rng.randint(1, 3))
            N = rng.randint(1, 3)
            summands = tuple(
                (QQ.random_nonzero(rng), random_linear_form(rng, QQ, ring.n), rng.randint(1, 3))
                for _ in range(N)
            )
            psd = PowerSumDecomposition(ring, summands)
            Lstar, ext = build_extended_operator(psd)
            for j in range(ext.N):
                r.checked += 1
                if ext.transform(ext.shifted_form(j)) != DiffOp.partial(ext.ring, ext.n + j):
                    r.fail(f"dy_{j + 1} + l_{j + 1} not straightened for {psd}")
                for t, coord in enumerate(ext.new_coordinates()):
                    expected = 1 if t == ext.n + j else 0
                    if apply(ext.shifted_form(j), coord) != expected:
                        r.fail(f"(dy_{j + 1} + l_{j + 1}) on coordinate {t} is not {expected}")
            r.checked += 1
            if ext.transform(Lstar) != ext.diagonal_target(psd):
                r.fail(f"extended operator not diagonal for {psd}")

    return _timed("coordinate-change", body)


def transform_property(count: int = 20, seed: int = 9) -> BatteryResult:
    def body(r: BatteryResult):
        rng = random.Random(seed)
        for _ in range(count):
            ring = Ring(QQ, rng.randint(1, 3))
            L = random_diffop(rng, ring, 3, 4)
            M = random_invertible_matrix(rng, QQ, ring.dim)
            f = random_polynomial(rng, ring, 4, 4)
            lhs = apply(transform_diffop(L, M), substitute_linear(f, M))
            rhs = substitute_linear(apply(L, f), M)
            r.checked += 1
            if lhs != rhs:
                r.fail(f"L={L} M={M} f={f}")

    return _timed("transform-defining-property", body)


# 5. desk instances


def desk_instances() -> BatteryResult:
    def body(r: BatteryResult):
        L = parse("dx1*dx2", QQ, 2)
        f, g = parse("x1", QQ, 2), parse("x2^3", QQ, 2)
        rep = find_stabilization(L, f, g, 8)
        r.checked += 1
        if rep.stabilization_index != 4 or rep.per_m[2].conclusion:
            r.fail(f"dx1*dx2 instance: index {rep.stabilization_index}")
        L = parse("dx1^2 + dx2^2", QQI, 2)
        f, g = parse("x1 + i*x2", QQI, 2), parse("x1", QQI, 2)
        rep = find_stabilization(L, f, g, 8)
        r.checked += 1
        if not rep.hypothesis_holds or rep.stabilization_index != 2:
            r.fail(f"Laplace instance: index {rep.stabilization_index}")
        for L, f in ((parse("dx1*dx2", QQ, 2), parse("x1", QQ, 2)),
                     (parse("dx1^2 + dx2^2", QQI, 2), parse("x1 + i*x2", QQI, 2))):
            for d in (1, 2, 3):
                r.checked += 1
                corollary1_instance(L, f, d, 8)

    return _timed("gvc-desk-instances", body)


# 6. characteristic p


def frobenius(count: int = 100, primes=(2, 3, 5), seed: int = 10) -> BatteryResult:
    def body(r: BatteryResult):
        for p in primes:
            rng = random.Random(seed + p)
            field = GF(p)
            for _ in range(count):
                ring = Ring(field, rng.randint(1, 3))
                L = random_constant_free_diffop(rng, ring, 3, 3)
                g = random_polynomial(rng, ring, 5, 4)
                r.checked += 1
                frobenius_vanishing_check(L, g, 0)

    return _timed("frobenius-vanishing", body)


# 7. semantics bridge


def semantics_bridge(count: int = 100, field: FieldSpec = QQ, seed: int = 11) -> BatteryResult:
    def body(r: BatteryResult):
        rng = random.Random(seed)
        agreements = 0
        for _ in range(count):
            ring = Ring(field, rng.randint(1, 2))
            L = random_diffop(rng, ring, 2, 3)
            g = random_polynomial(rng, ring, 2, 3)
            f = random_polynomial(rng, ring, 2, 3)
            m = rng.randint(0, 3)
            cmp = weyl_semantics_compare(L, m, g, f)
            r.checked += 1
            agreements += cmp.agree
        r.info["agreements"] = agreements

    return _timed(f"semantics-bridge-{field}", body)


# 8. parser


def _random_value(rng: random.Random, kind: str, field: FieldSpec):
    ring = Ring(field, rng.randint(1, 3), rng.randint(0, 1))
    if kind == "poly":
        return random_polynomial(rng, ring, 4, 5)
    if kind == "op":
        return random_diffop(rng, ring, 4, 5)
    return random_weyl(rng, ring, 2, 4)


def _with_fraction_coefficients(rng: random.Random, value):
    """Divide by a random small integer so rational printing gets exercised."""
    if value.field.kind == "FP":
        return value
    return value.scale(value.field.one / rng.randint(1, 7))


def parser_roundtrip(count: int = 500, seed: int = 12) -> BatteryResult:
    def body(r: BatteryResult):
        rng = random.Random(seed)
        for kind in ("poly", "op", "weyl"):
            for k in range(count):
                field = FIELDS[k % len(FIELDS)]
                v = _with_fraction_coefficients(rng, _random_value(rng, kind, field))
                text = format_expr(v)
                back = parse(text, field, v.ring.n, v.ring.N, want=kind)
                r.checked += 1
                if back != v:
                    r.fail(f"{kind}: {text!r} parsed back as {format_expr(back)!r}")

    return _timed("parser-roundtrip", body)


def parser_fuzz(count: int = 10_000, max_len: int = 64, seed: int = 13) -> BatteryResult:
    """Random byte strings must either parse or raise ParseError carrying an offset."""
    alphabet = b"0123456789+-*^/() xdyi\t" + bytes(range(256))

    def body(r: BatteryResult):
        rng = random.Random(seed)
        accepted = 0
        for _ in range(count):
            raw = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))
            text = raw.decode("utf-8", errors="replace")
            r.checked += 1
            try:
                parse_ast(text)
                parse(text, QQI, 3, 1)
                accepted += 1
            except ParseError as exc:
                if not 0 <= exc.position <= len(text.encode("utf-8")):
                    r.fail(f"offset {exc.position} outside input {raw!r}")
            except Exception as exc:  # noqa: BLE001 - any other exception is a crash
                r.fail(f"{type(exc).__name__} on {raw!r}: {exc}")
        r.info["accepted"] = accepted

    return _timed("parser-fuzz", body)


BATTERIES: dict[str, Callable[..., BatteryResult]] = {
    "theorem1": theorem1_soundness,
    "commutator": commutator_decomposition,
    "weyl-relations": weyl_relations,
    "weyl-associativity": weyl_associativity,
    "weyl-action": weyl_action,
    "weyl-fourier": weyl_fourier,
    "weyl-reorder": weyl_reorder,
    "polarization": polarization,
    "transport": transport,
    "coordinate-change": coordinate_change,
    "transform": transform_property,
    "desk": desk_instances,
    "frobenius": frobenius,
    "bridge": semantics_bridge,
    "parser-roundtrip": parser_roundtrip,
    "parser-fuzz": parser_fuzz,
}


def run_all(only: list[str] | None = None) -> list[BatteryResult]:
    names = only or list(BATTERIES)
    unknown = [n for n in names if n not in BATTERIES]
    if unknown:
        raise ValueError(f"unknown batteries: {', '.join(unknown)}")
    return [BATTERIES[name]() for name in names]
