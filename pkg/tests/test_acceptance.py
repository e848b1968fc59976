"""Acceptance criteria 1-8, each at its stated size and tolerance.

Every criterion prints one PASS/FAIL line. Run directly
(``python tests/test_acceptance.py``) for just the summary.
"""

from __future__ import annotations

import random
import sys
from itertools import product

import pytest

from gvc import (
    GF,
    QQ,
    QQI,
    DiffOp,
    Polynomial,
    Ring,
    WeylElement,
    act,
    apply,
    apply_power,
    build_extended_operator,
    build_extended_product,
    commutator_action,
    commutator_decompose,
    decompose_power_sums,
    fourier_automorphism,
    in_left_ideal_partials,
    parse,
    polarize_monomial,
    reorder_partials_left,
    substitute_linear,
    transform_diffop,
    verify_theorem1,
    weyl_mul,
)
from gvc import suite
from gvc.cli import main
from gvc.generators import (
    random_constant_free_diffop,
    random_diffop,
    random_invertible_matrix,
    random_linear_form,
    random_polynomial,
    random_weyl,
    theorem1_instance,
)
from gvc.lab import corollary1_instance, find_stabilization, frobenius_vanishing_check, weyl_semantics_compare
from gvc.weyl import from_partials_left
from oracles import (
    act_by_words,
    apply_by_derivatives,
    power_apply_by_derivatives,
    rewrite_mul,
    stabilization_by_brute_force,
)

FIELDS = (QQ, QQI, GF(5))


class Criterion:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.checked = 0
        self.failures: list[str] = []

    def check(self, ok: bool, message: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(message)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f"; first failure: {self.failures[0]}" if self.failures else ""
        return f"[{status}] criterion {self.number}: {self.title} ({self.checked} checks{tail})"


def criterion_1() -> Criterion:
    c = Criterion(1, "Theorem 1 soundness, 200 instances over Q and F_5")
    rng = random.Random(1)
    hypothesis_true = 0
    for k in range(200):
        field = QQ if k % 2 == 0 else GF(5)
        L, f_tilde, g, m, d = theorem1_instance(rng, field)
        c.check(L.ring.n <= 3 and g.total_degree() <= 3 and d <= m <= d + 4, f"instance shape {k}")
        report = verify_theorem1(L, f_tilde, g, m, d, strict=False)
        oracle_hyp = not power_apply_by_derivatives(L, m - d, f_tilde)
        c.check(report.hypothesis_holds == oracle_hyp, f"hypothesis disagrees with oracle at {k}")
        if oracle_hyp:
            hypothesis_true += 1
            c.check(bool(report.conclusion_holds), f"conclusion false: L={L} f~={f_tilde} g={g} m={m}")
            c.check(not power_apply_by_derivatives(L, m, g * f_tilde), f"oracle conclusion false at {k}")
    c.check(hypothesis_true == 200, f"only {hypothesis_true}/200 instances satisfy the hypothesis")
    return c


def criterion_2() -> Criterion:
    c = Criterion(2, "commutator decomposition, 200 (L, g) x 5 probes")
    rng = random.Random(2)
    for k in range(200):
        ring = Ring(FIELDS[k % 3], rng.randint(1, 3))
        L = random_diffop(rng, ring, 4, 4)
        g = random_polynomial(rng, ring, 3, 4)
        dec = commutator_decompose(L, g)
        bound = g.total_degree() - 1
        c.check(all(p.total_degree() <= bound for _, p in dec.pairs), f"degree bound, L={L} g={g}")
        for _ in range(5):
            f = random_polynomial(rng, ring, 4, 4)
            direct = apply_by_derivatives(L, g * f) - g * apply_by_derivatives(L, f)
            value = dec.evaluate(f)
            c.check(value == commutator_action(L, g, f) == direct, f"L={L} g={g} f~={f}")
    return c


def criterion_3() -> Criterion:
    c = Criterion(3, "Weyl algebra relations, associativity, ideal, Fourier, reordering")
    for field in FIELDS:
        ring = Ring(field, 3)
        one, zero = WeylElement.one(ring), WeylElement.zero(ring)
        X, D = WeylElement.x, WeylElement.d
        for i, j in product(range(3), repeat=2):
            comm = weyl_mul(D(ring, i), X(ring, j)) - weyl_mul(X(ring, j), D(ring, i))
            c.check(comm == (one if i == j else zero), f"[d{i + 1}, x{j + 1}] over {field}")
            c.check(weyl_mul(X(ring, i), X(ring, j)) == weyl_mul(X(ring, j), X(ring, i)), "x commute")
            c.check(weyl_mul(D(ring, i), D(ring, j)) == weyl_mul(D(ring, j), D(ring, i)), "d commute")

    rng = random.Random(3)
    for k in range(200):
        ring = Ring(FIELDS[k % 3], rng.randint(1, 2))
        a, b, e = (random_weyl(rng, ring, 3, 3) for _ in range(3))
        ab = weyl_mul(a, b)
        c.check(ab == rewrite_mul(a, b), f"product disagrees with rewriting: {a} * {b}")
        c.check(weyl_mul(ab, e) == weyl_mul(a, weyl_mul(b, e)), f"associativity on {a}, {b}, {e}")

    rng = random.Random(4)
    for field in FIELDS:
        for _ in range(200):
            ring = Ring(field, rng.randint(1, 3))
            E = random_weyl(rng, ring, 3, 4)
            if rng.random() < 0.5:
                E = weyl_mul(E, WeylElement.d(ring, rng.randrange(ring.dim)))
            one = Polynomial.one(ring)
            zero_action = not act(E, one)
            c.check(zero_action == (not act_by_words(E, one)), f"act disagrees with oracle on {E}")
            c.check(in_left_ideal_partials(E) == zero_action, f"ideal/action mismatch for {E}")

    rng = random.Random(5)
    phi = fourier_automorphism
    for k in range(100):
        ring = Ring(FIELDS[k % 3], rng.randint(1, 2))
        a, b = random_weyl(rng, ring, 2, 3), random_weyl(rng, ring, 2, 3)
        c.check(phi(weyl_mul(a, b)) == weyl_mul(phi(a), phi(b)), f"phi not multiplicative on {a}, {b}")
        for e in (a, b):
            c.check(phi(phi(phi(phi(e)))) == e, f"phi^4 != id on {e}")
    # order exactly 4: phi^2 sends x1 to -x1
    for field in FIELDS:
        x1 = WeylElement.x(Ring(field, 1), 0)
        c.check(phi(phi(x1)) == -x1 and (field.characteristic == 2 or phi(phi(x1)) != x1), "phi^2 on x1")

    rng = random.Random(6)
    for k in range(200):
        ring = Ring(FIELDS[k % 3], rng.randint(1, 3))
        E = random_weyl(rng, ring, 3, 4)
        pairs = reorder_partials_left(E)
        c.check(from_partials_left(pairs, ring) == E, f"round trip on {E}")
        rebuilt = WeylElement.zero(ring)
        for op, poly in pairs:
            rebuilt = rebuilt + rewrite_mul(WeylElement.from_diffop(op), WeylElement.from_polynomial(poly))
        c.check(rebuilt == E, f"rewriting oracle round trip on {E}")
    return c


def criterion_4() -> Criterion:
    c = Criterion(4, "polarization, transport identity, coordinate change")
    for n in range(1, 5):
        ring = Ring(QQ, n)
        for alpha in product(range(6), repeat=n):
            if not 0 < sum(alpha) <= 5:
                continue
            total = DiffOp.zero(ring)
            for coef, form, d in polarize_monomial(alpha, QQ).summands:
                total = total + (form.to_diffop(ring) ** d).scale(coef)
            c.check(total == DiffOp.monomial(ring, alpha), f"polarization of {alpha}")

    rng = random.Random(7)
    for k in range(100):
        ring = Ring(QQ, rng.randint(1, 3))
        if k % 2 == 0:
            L = random_diffop(rng, ring, 3, 3)
            Lstar, ext = build_extended_operator(decompose_power_sums(L))
        else:
            forms = [random_linear_form(rng, QQ, ring.n) for _ in range(rng.randint(1, 3))]
            Lstar, ext = build_extended_product(forms)
            L = DiffOp.one(ring)
            for form in forms:
                L = L * form.to_diffop(ring)
        f, g = random_polynomial(rng, ring, 3, 3), random_polynomial(rng, ring, 3, 3)
        m = rng.randint(1, 3)
        h = g * f ** m
        lhs = power_apply_by_derivatives(Lstar, m, h.embed(ext.ring))
        c.check(lhs == apply_power(L, m, h).embed(ext.ring), f"transport for L={L}, m={m}")
        for j in range(ext.N):
            c.check(ext.transform(ext.shifted_form(j)) == DiffOp.partial(ext.ring, ext.n + j),
                    f"dy_{j + 1} + l_{j + 1} not mapped to dy_{j + 1}'")

    rng = random.Random(9)
    for _ in range(20):
        ring = Ring(QQ, rng.randint(1, 3))
        L = random_diffop(rng, ring, 3, 4)
        M = random_invertible_matrix(rng, QQ, ring.dim)
        f = random_polynomial(rng, ring, 4, 4)
        lhs = apply_by_derivatives(transform_diffop(L, M), substitute_linear(f, M))
        c.check(lhs == substitute_linear(apply_by_derivatives(L, f), M), f"transform property L={L} M={M}")
    return c


def criterion_5() -> Criterion:
    c = Criterion(5, "GVC desk instances")
    L, f, g = parse("dx1*dx2", QQ, 2), parse("x1", QQ, 2), parse("x2^3", QQ, 2)
    rows, index = stabilization_by_brute_force(L, f, g, 8)
    report = find_stabilization(L, f, g, 8)
    c.check(index == 4 and report.stabilization_index == 4, f"d1d2 index {report.stabilization_index}")
    c.check(report.per_m[2].conclusion is False, "d1d2 conclusion at m = 3 should be false")
    c.check([(s.hypothesis, s.conclusion) for s in report.per_m] == rows, "d1d2 rows vs oracle")

    La, fa, ga = parse("dx1^2 + dx2^2", QQI, 2), parse("x1 + i*x2", QQI, 2), parse("x1", QQI, 2)
    rows, index = stabilization_by_brute_force(La, fa, ga, 8)
    report = find_stabilization(La, fa, ga, 8)
    c.check(all(s.hypothesis for s in report.per_m) and len(report.per_m) == 8, "Laplace hypothesis m <= 8")
    c.check(index == 2 and report.stabilization_index == 2, f"Laplace index {report.stabilization_index}")
    c.check([(s.hypothesis, s.conclusion) for s in report.per_m] == rows, "Laplace rows vs oracle")

    for op, poly in ((L, f), (La, fa)):
        for d in (1, 2, 3):
            cor = corollary1_instance(op, poly, d, 8)
            via_g = find_stabilization(op, poly, poly ** d, 8)
            c.check(cor.conclusions() == via_g.conclusions(), f"corollary 1 cross-check d={d} for {op}")
    return c


def criterion_6() -> Criterion:
    c = Criterion(6, "Frobenius vanishing for p = 2, 3, 5")
    for p in (2, 3, 5):
        rng = random.Random(100 + p)
        field = GF(p)
        for _ in range(100):
            ring = Ring(field, rng.randint(1, 3))
            L = random_constant_free_diffop(rng, ring, 3, 3)
            g = random_polynomial(rng, ring, 6, 4)
            try:
                ok = frobenius_vanishing_check(L, g, 0)
            except AssertionError:
                ok = False
            c.check(ok and not power_apply_by_derivatives(L, p, g), f"p={p} L={L} g={g}")
    return c


def criterion_7() -> Criterion:
    c = Criterion(7, "characteristic-0 semantics bridge, 100 instances over Q")
    rng = random.Random(11)
    for _ in range(100):
        ring = Ring(QQ, rng.randint(1, 2))
        L = random_diffop(rng, ring, 2, 3)
        g = random_polynomial(rng, ring, 2, 3)
        f = random_polynomial(rng, ring, 2, 3)
        m = rng.randint(0, 3)
        try:
            cmp = weyl_semantics_compare(L, m, g, f)
            agree = cmp.agree and cmp.action_zero == (not power_apply_by_derivatives(L, m, g * f ** m))
        except AssertionError:
            agree = False
        c.check(agree, f"L={L} m={m} g={g} f={f}")
    return c


def _cli(argv):
    from contextlib import redirect_stderr, redirect_stdout
    from io import StringIO

    out, err = StringIO(), StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue()


def criterion_8() -> Criterion:
    c = Criterion(8, "parser round trip, CLI examples, fuzzing")
    roundtrip = suite.parser_roundtrip(500)
    c.check(roundtrip.passed and roundtrip.checked == 1500, roundtrip.line())

    code, out = _cli(["--field", "q", "--n", "2", "--op", "dx1*dx2", "--f", "x1", "--g", "x2^3", "--bound", "8"])
    c.check(code == 0 and "stabilization_index: 4" in out, f"gvc example: exit {code}")
    code, out = _cli(["polarize", "--n", "2", "--monomial", "1,1"])
    expected = "dx1*dx2 = 1/2*(dx1 + dx2)^2 - 1/2*(dx1)^2 - 1/2*(dx2)^2"
    c.check(code == 0 and out.strip() == expected, f"polarize example: exit {code}, {out!r}")
    code, out = _cli(["apply", "--n", "1", "--op", "dx1", "--poly", "x1^2"])
    c.check(code == 0 and out.strip() == "2*x1", f"apply example: exit {code}, {out!r}")

    fuzz = suite.parser_fuzz(10_000, 64)
    c.check(fuzz.passed and fuzz.checked == 10_000, fuzz.line())
    return c


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("run", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 9)])
def test_criterion(run, capsys):
    result = run()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()


if __name__ == "__main__":
    results = [run() for run in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
