"""Acceptance suite: thirteen criteria, each reported as one PASS/FAIL line.

Run ``python3 tests/test_acceptance.py`` for the bare report, or through
pytest, where every criterion is its own test and the line is printed to the
terminal as well.
"""
from __future__ import annotations

import random
import sys
import time
from fractions import Fraction

import pytest

from qbailey.bailey import (
    MULTILATERAL,
    UNILATERAL,
    ParamEnv,
    m_entry_verbatim,
    verify_inverse,
    verify_lemma_commutation,
    verify_orbit_invariance,
)
from qbailey.identities import REGISTRY, side_series, verify
from qbailey.jackson import cocycle_sides
from qbailey.partitions import partitions_below, partitions_in_box, weight
from qbailey.qcore import QMono, QSeries, qm, qpow
from qbailey.wfunctions import w_limit_formula, w_staircase


class Outcome:
    def __init__(self):
        self.ok = True
        self.notes: list[str] = []
        self.start = time.perf_counter()

    def need(self, cond: bool, note: str) -> None:
        if not cond:
            self.ok = False
            self.notes.append(note)

    def limit(self, seconds: float, what: str = "total") -> None:
        used = time.perf_counter() - self.start
        self.need(used < seconds, f"{what} runtime {used:.1f}s over {seconds}s")

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start


def run_identity(out: Outcome, name: str, params: dict, T: int, per_run: float | None = None) -> None:
    t0 = time.perf_counter()
    rep = verify(name, params, T)
    used = time.perf_counter() - t0
    out.need(rep.status == "match", f"{name} {params}: {rep.status} {rep.message or rep.first_mismatch}")
    if per_run is not None:
        out.need(used < per_run, f"{name} {params}: {used:.2f}s over {per_run}s")


def grid_points(name: str) -> list[dict]:
    return [dict(g) for g in REGISTRY[name].grid]


def partition_count(T: int, allowed) -> list[int]:
    """Partitions of 0..T into parts from ``allowed``, by the standard coin recurrence."""
    counts = [1] + [0] * T
    for part in range(1, T + 1):
        if allowed(part):
            for m in range(part, T + 1):
                counts[m] += counts[m - part]
    return counts


def coefficients(s: QSeries, T: int) -> list[Fraction]:
    return [s.coefficient(Fraction(e)) for e in range(T + 1)]


# ---------------------------------------------------------------------------
# the criteria
# ---------------------------------------------------------------------------


def criterion_1() -> Outcome:
    out = Outcome()
    points = grid_points("jacobi_triple")
    out.need(len(points) == 10, f"{len(points)} specialisations instead of 10")
    for p in points:
        run_identity(out, "jacobi_triple", p, 40, per_run=1.0)
    return out


def criterion_2() -> Outcome:
    out = Outcome()
    for k, i in [(2, 1), (2, 2), (3, 1), (3, 3)]:
        run_identity(out, "ag_classical", {"k": k, "i": i}, 30, per_run=5.0)
    return out


def criterion_3() -> Outcome:
    out = Outcome()
    choices = {
        UNILATERAL: lambda n: [ParamEnv.general(n, qm(Fraction(2, 3), 1)), ParamEnv.general(n, qm(-3, 2)),
                               ParamEnv.general(n, qpow(Fraction(5, 2)))],
        MULTILATERAL: lambda n: [ParamEnv.special(n, m) for m in (0, 1, 2)],
    }
    for n in (1, 2, 3):
        for norm, envs in choices.items():
            for env in envs(n):
                rep = verify_inverse((3, 3)[:n], env, norm)
                out.need(rep.ok and rep.checked > 0, f"n={n} {norm} b={env.b}: {rep.summary()}")
    out.limit(60)
    return out


def criterion_4() -> Outcome:
    out = Outcome()
    strong = [(qm(2, 1), qm(-1, 4)), (qm(Fraction(1, 3), 3), qm(5, 1)), (qm(2, 1), qm(-1, 2))]
    for n in (1, 2):
        box = (2,) * n
        for sigma, rho in strong:
            env = ParamEnv.general(n, qm(Fraction(2, 3), 1), sigma=sigma, rho=rho)
            rep = verify_lemma_commutation(box, env)
            out.need(rep.ok and rep.checked > 0, f"strong n={n} sigma={sigma} rho={rho}: {rep.summary()}")
        for m in (0, 1):
            rep = verify_lemma_commutation(box, ParamEnv.special(n, m))
            out.need(rep.ok and rep.checked > 0, f"weak n={n} m={m}: {rep.summary()}")
    out.limit(60)
    return out


def criterion_5() -> Outcome:
    out = Outcome()
    points = grid_points("watson_multiple")
    out.need(len(points) == 12, f"{len(points)} grid points instead of 12")
    for p in points:
        run_identity(out, "watson_multiple", p, 0)
    out.limit(120)
    return out


def criterion_6() -> Outcome:
    out = Outcome()
    rng = random.Random(2024)

    def mono() -> QMono:
        return qm(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3])), rng.randint(1, 6))

    for draw in range(10):
        u, v, a, b = mono(), mono(), mono(), mono()
        for n in (1, 2):
            for nu in partitions_in_box((2,) * n):
                for mu in partitions_below(nu):
                    lhs, rhs = cocycle_sides(nu, mu, u, v, a, b)
                    out.need(lhs.equals(rhs), f"draw {draw}: nu={nu} mu={mu}")
    out.limit(60)
    return out


def criterion_7() -> Outcome:
    out = Outcome()
    for n, delta, T in [(1, 0, 40), (1, 1, 40), (2, 0, 16), (2, 1, 16), (3, 0, 10)]:
        run_identity(out, "pentagonal_multiple", {"n": n, "delta": delta}, T)
    # n = 1 against a pentagonal-number oracle built here
    for delta in (0, 1):
        side = side_series("pentagonal_multiple", "lhs", {"n": 1, "delta": delta}, 40)
        euler = [0] * 41
        for m in range(-6, 7):
            e = m * (3 * m - 1) // 2
            if e <= 40:
                euler[e] += (-1) ** (m % 2)
        if delta == 1:
            # (q^2)_inf (1 - q) = (q)_inf
            got = [side.coefficient(e) - (side.coefficient(e - 1) if e else 0) for e in range(41)]
        else:
            got = coefficients(side, 40)
        out.need(got == euler, f"n=1 delta={delta} differs from the pentagonal series")
    out.limit(300)
    return out


def criterion_8() -> Outcome:
    out = Outcome()
    for n, delta, T in [(1, 0, 30), (1, 1, 30), (2, 0, 12), (2, 1, 12)]:
        run_identity(out, "rr_multiple", {"n": n, "delta": delta}, T)
    for delta, residues in [(0, {1, 4}), (1, {2, 3})]:
        rhs = side_series("rr_multiple", "rhs", {"n": 1, "delta": delta}, 30)
        oracle = partition_count(30, lambda part: part % 5 in residues)
        out.need(coefficients(rhs, 30) == oracle, f"delta={delta} product side vs partition counts")
    out.limit(300)
    return out


def criterion_9() -> Outcome:
    out = Outcome()
    for tag in ("b1", "bq"):
        for n in (1, 2):
            for N in (2, 3):
                run_identity(out, f"ag_det_{tag}", {"n": n, "N": N}, 10)
                run_identity(out, f"ag_lattice_{tag}", {"n": n, "N": N}, 10)
        for N in (2, 3):
            # at n = 1 the determinant row also checks the product and Gordon counts
            run_identity(out, f"ag_det_{tag}", {"n": 1, "N": N}, 30)
    out.limit(600)
    return out


def limit_threshold(family: str, mu, delta: int, n: int, T: int) -> int:
    """Smallest K from which the staircase value agrees with the limit through q^T.

    The staircase value carries negative powers of q of size up to
    v |mu| + max(mu), so K must exceed T by that much.
    """
    v = delta + n if family == "a" else 1
    return T + 1 + v * weight(mu) + max(mu)


def criterion_10() -> Outcome:
    out = Outcome()
    T = 10
    short = 0
    for family in ("a", "s_up"):
        for n in (1, 2):
            for delta in (0, 1):
                params = (qpow(delta + n - 1).deformed(1),) if family == "a" else ()
                for mu in partitions_in_box((2,) * n):
                    lim = w_limit_formula(family, mu, delta, n).lower(2 * T)
                    K = limit_threshold(family, mu, delta, n, T)
                    for extra in (0, 1, 2):
                        got = w_staircase(family, (K + extra,) * n, mu, params, 1).lower(2 * T)
                        out.need(got == lim, f"{family} n={n} delta={delta} mu={mu} K={K + extra}")
                    if w_staircase(family, (T + 1,) * n, mu, params, 1).lower(2 * T) != lim:
                        short += 1
    out.notes.append(f"K = T + 1 alone falls short for {short} cases (informational)")
    return out


def criterion_11() -> Outcome:
    out = Outcome()
    rng = random.Random(11)
    for delta in (0, 1):
        env1 = ParamEnv.special(1, delta)
        for _ in range(20):
            lam = (rng.randint(-4, 4),)
            nu = (rng.randint(0, 4),)
            rep = verify_orbit_invariance(nu, lam, env1)
            out.need(rep.ok, f"n=1 verbatim M nu={nu} lam={lam}: {rep.summary()}")
        env2 = ParamEnv.special(2, delta)
        for _ in range(20):
            lam = (rng.randint(-3, 3), rng.randint(-3, 3))
            nu = (3, 2)
            rep = verify_orbit_invariance(nu, lam, env2)
            out.need(rep.ok, f"n=2 M (orbit transport) nu={nu} lam={lam}: {rep.summary()}")
    for n in (1, 2):
        for delta in (0, 1):
            run_identity(out, "summand_symmetry", {"n": n, "delta": delta, "points": 20, "seed": 7}, 0)
    # sanity: the n = 1 verbatim entry is not constant in lam
    env = ParamEnv.special(1, 0)
    out.need(not m_entry_verbatim((3,), (1,), env).equals(m_entry_verbatim((3,), (2,), env)),
             "verbatim n=1 entry is constant, so the check would be vacuous")
    out.notes.append("n=2 M entries are defined by orbit transport, so their invariance holds by construction "
                     "(informational); the summand check is the direct n=2 evidence")
    return out


def criterion_12() -> Outcome:
    out = Outcome()
    for name in ("first_iteration", "second_iteration"):
        for n, T in ((1, 30), (2, 10)):
            for delta in (0, 1):
                for nu in partitions_in_box((3,) if n == 1 else (2, 1)):
                    if weight(nu):
                        run_identity(out, name, {"n": n, "delta": delta, "nu": ",".join(map(str, nu))}, T)
    return out


def criterion_13() -> Outcome:
    out = Outcome()
    rng = random.Random(13)
    for n in (2, 3):
        seen = set()
        while len(seen) < 10:
            c = tuple(rng.randint(-4, 6) for _ in range(n))
            if c in seen:
                continue
            seen.add(c)
            run_identity(out, "det_eval_dn", {"n": n, "c": ",".join(map(str, c))}, 0)
    return out


CRITERIA = {
    1: ("Jacobi triple product, 10 specialisations to q^40", criterion_1),
    2: ("classical Andrews-Gordon sum = product = Gordon counts to q^30", criterion_2),
    3: ("matrix inversion on boxes in (3,3), n <= 3", criterion_3),
    4: ("lemma commutation N M = M S, strong and weak, n <= 2", criterion_4),
    5: ("Watson transformation, n = 2 grid", criterion_5),
    6: ("cocycle identity, 10 random draws", criterion_6),
    7: ("multiple pentagonal identities", criterion_7),
    8: ("multiple Rogers-Ramanujan identities", criterion_8),
    9: ("Andrews-Gordon extreme cases, lattice = determinant", criterion_9),
    10: ("staircase limits at T = 10", criterion_10),
    11: ("hyperoctahedral invariance", criterion_11),
    12: ("first and second iterations", criterion_12),
    13: ("D_n determinant evaluation", criterion_13),
}


def report_line(num: int, out: Outcome) -> str:
    title = CRITERIA[num][0]
    state = "PASS" if out.ok else "FAIL"
    line = f"criterion {num:2d} {state}  {title}  ({out.elapsed:.1f}s)"
    if out.notes:
        line += "  [" + "; ".join(out.notes[:3]) + "]"
    return line


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    out = CRITERIA[num][1]()
    with capsys.disabled():
        print("\n" + report_line(num, out))
    assert out.ok, report_line(num, out)


def test_limit_rule_is_needed():
    # K = T + 1 is not enough once mu is non-empty
    T, mu = 4, (2,)
    params = (qpow(0).deformed(1),)
    lim = w_limit_formula("a", mu, 0, 1).lower(2 * T)
    assert w_staircase("a", (T + 1,), mu, params, 1).lower(2 * T) != lim
    assert w_staircase("a", (limit_threshold("a", mu, 0, 1, T),), mu, params, 1).lower(2 * T) == lim


def main() -> int:
    failed = 0
    for num in sorted(CRITERIA):
        out = CRITERIA[num][1]()
        print(report_line(num, out), flush=True)
        failed += not out.ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
