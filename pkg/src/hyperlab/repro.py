"""Canned experiment suites, one per result reproduced at desk scale.

Each suite returns a :class:`SuiteResult` whose ``checks`` map a short name
to ``(passed, detail)``.  The suites are deterministic: random choices use
``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .constructions import (
    a2_cover,
    angle_grid,
    interleave,
    line_through_origin,
    line_trace_A2,
    make_alpha,
    radial_grid,
    ray_direction,
    sample_A_alpha,
    sample_A_alpha_beta,
    sample_B,
    subspace_trace,
)
from .density import DENSE, NOT_DENSE, PolyDisc, Window, coverage, coverage_in_subspace, density_trend
from .errors import NoNontrivialCanonical, UnknownId
from .io import scalar_to_json
from .linalg import in_subspace_exact, membership_distance, subspace_from_basis
from .semigroup import (
    canonical_invariant_subspace,
    example_dense_spectrum_C2,
    example_G_theta,
    example_R3,
    hypercyclicity_probe,
    is_invariant,
    javaheri_trace,
    line_trace_G_theta,
    log_coverage,
    planted_javaheri,
    subspace_hypercyclicity_probe,
    witness_in_subspace,
)
from .surd import Surd


@dataclass
class SuiteResult:
    id: str
    checks: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def check(self, name: str, ok: bool, detail="") -> None:
        self.checks[name] = (bool(ok), detail)

    def to_json(self) -> dict:
        return {"id": self.id, "passed": self.passed,
                "checks": {k: {"passed": ok, "detail": d} for k, (ok, d) in self.checks.items()},
                "reports": self.reports, "lines": self.lines}


# shared settings for the A_alpha experiments: wide window, matched budget
AMBIENT_WINDOW = Window.cube(2, -2.0, 2.0)
AMBIENT_SCHEDULE = (400, 800, 1600)
LINE_WINDOW = Window((-2.0,), (2.0,))


def random_rational_lines(rng: np.random.Generator, count: int, size: int = 9) -> list[tuple[int, int]]:
    out = []
    while len(out) < count:
        p, q = (int(x) for x in rng.integers(-size, size + 1, 2))
        if (p, q) != (0, 0) and math.gcd(p, q) == 1 and (p, q) not in out and (-p, -q) not in out:
            out.append((p, q))
    return out


SURD_LINES = (
    (Surd(1), Surd.sqrt(2)),
    (Surd.sqrt(3), Surd(1)),
    (Surd(1), Surd.sqrt(2) + Surd.sqrt(3)),
    (Surd.sqrt(6), Surd(-2)),
    (Surd.sqrt(2) - 1, Surd.sqrt(5)),
)


def a_alpha_line_trend(alpha, M, schedule=AMBIENT_SCHEDULE, window=AMBIENT_WINDOW, eps: float = 0.1,
                       mode: str = "float"):
    """Coverage trend of the trace of A_alpha on the line M (M-window of length 4)."""
    def sampler(S):
        tr = subspace_trace(sample_A_alpha(alpha, S, window, mode), M, mode=mode)
        return coverage_in_subspace(tr, M, LINE_WINDOW, eps)
    return density_trend(sampler, LINE_WINDOW, eps, schedule)


def suite_line_traces(seed: int = 0, n_rational: int = 4, n_surd: int = 2) -> SuiteResult:
    res = SuiteResult("thm2.1")
    alpha = make_alpha(2, (2, 3))
    amb = density_trend(lambda S: sample_A_alpha(alpha, S, AMBIENT_WINDOW), AMBIENT_WINDOW, 0.1, AMBIENT_SCHEDULE)
    res.reports["ambient"] = amb.to_json()
    res.check("ambient dense", amb.verdict == DENSE, amb.trend)
    rng = np.random.default_rng(seed)
    lines = [("rational", [p, q]) for p, q in random_rational_lines(rng, n_rational)]
    lines += [("surd", list(v)) for v in SURD_LINES[:n_surd]]
    for kind, v in lines:
        M = subspace_from_basis([v])
        rep = a_alpha_line_trend(alpha, M)
        name = f"{kind} line ({', '.join(str(scalar_to_json(x)) for x in v)})"
        res.reports[name] = rep.to_json()
        res.check(name, rep.verdict == NOT_DENSE, rep.trend)
    return res


def suite_complex_embedding(S: int = 60) -> SuiteResult:
    res = SuiteResult("thm2.4")
    cases = [((2,), (3,)), ((2, 5), (3, 7))]
    for a, b in cases:
        alpha, beta = make_alpha(len(a), a), make_alpha(len(b), b)
        n = len(a)
        win = Window.cube(2 * n, -1.0, 1.0) if n > 1 else AMBIENT_WINDOW
        ab = sample_A_alpha_beta(alpha, beta, S, win, "exact")
        mu = sample_A_alpha(interleave(alpha, beta), S, win, "exact")
        same_exact = ab.exact == mu.exact
        same_float = ab.real_points().tobytes() == mu.points.tobytes()
        res.check(f"phi identity n={n}", same_exact and same_float, {"points": len(mu)})
    alpha, beta = make_alpha(1, (2,)), make_alpha(1, (3,))
    rep = density_trend(lambda S: sample_A_alpha_beta(alpha, beta, S, AMBIENT_WINDOW), AMBIENT_WINDOW, 0.1,
                        AMBIENT_SCHEDULE)
    res.reports["complex n=1"] = rep.to_json()
    res.check("complex set dense", rep.verdict == DENSE, rep.trend)
    return res


def plant_and_recover(rng: np.random.Generator, theta1: float, theta2: float, bound: int = 10):
    """Draw a triple, build a point of its ray, and recover the triple."""
    n1, n2 = (int(x) for x in rng.integers(0, bound + 1, 2))
    rho = float(rng.uniform(0.2, 3.0))
    lam = complex(rng.uniform(0.2, 2.0) * np.exp(2j * np.pi * rng.uniform()))
    u = lam * ray_direction(theta1, theta2, n1, n2, rho)
    phase = n2 * theta2 - n1 * theta1
    k = -math.floor(phase)
    ray = line_trace_A2(theta1, theta2, u, bound, theta=phase + k)
    # the planted ray, normalized like the recovered one
    v = ray_direction(theta1, theta2, n1, n2, abs(u[1]) / abs(u[0]))
    return (n1, n2, k, v), ray


def suite_ray_recovery(seed: int = 0, count: int = 50) -> SuiteResult:
    res = SuiteResult("prop2.5")
    t1, t2 = math.sqrt(2), math.sqrt(3)
    rng = np.random.default_rng(seed)
    good = 0
    for _ in range(count):
        (n1, n2, k, v), ray = plant_and_recover(rng, t1, t2)
        good += (ray.n1, ray.n2, ray.k) == (n1, n2, k) and np.array_equal(ray.v, v) and ray.matches == 1
    res.check("planted triples recovered", good == count, f"{good}/{count}")
    rep = density_trend(lambda S: a2_cover(t1, t2, radial_grid(0.05, 1.0), S, PolyDisc(2, 1.0), 0.25),
                        PolyDisc(2, 1.0), 0.25, (50, 100, 200))
    res.reports["A2 polydisc"] = rep.to_json()
    res.check("A2 dense on the unit polydisc", rep.verdict == DENSE, rep.trend)
    return res


def suite_half_lines(lines: int = 8, k: int = 32) -> SuiteResult:
    res = SuiteResult("prop2.6")
    samp = sample_B(radial_grid(1.0 / k, 1.0), angle_grid(4 * k))
    for j in range(lines):
        phi = Fraction(j, 2 * lines)
        M = line_through_origin(phi)
        tr = subspace_trace(samp, M)
        t = M.coordinates(tr.points)[:, 0]
        cov = coverage(t[:, None], Window((-1.0,), (1.0,)), 0.1).coverage
        ok = len(t) > 0 and bool(np.all(t > 0)) and cov <= 0.5 + 0.05
        res.check(f"line at angle {phi}", ok, {"points": int(len(t)), "coverage": cov})
    return res


def suite_distance_demo(seed: int = 0, n: int = 3, count: int = 5) -> SuiteResult:
    res = SuiteResult("rem2.6")
    basis_Y = [[1 if i == j else 0 for i in range(n)] for j in range(n - 1)]
    Y = subspace_from_basis(basis_Y)
    e = np.zeros(n)
    e[-1] = 2.0
    d = membership_distance(e, Y)
    res.lines.append(f"d(e,Y) = {d:g}")
    res.check("d(e,Y) = 2", d == 2.0, d)
    rng = np.random.default_rng(seed)
    e_exact = [Fraction(0)] * (n - 1) + [Fraction(2)]
    for i in range(count):
        a = [Fraction(int(x), int(rng.integers(1, 10))) for x in rng.integers(-9, 10, n)]
        if a[-1] == 0:
            a[-1] = Fraction(1)
        V = subspace_from_basis(basis_Y + [a])
        da = membership_distance(e, V)
        res.lines.append(f"d(e,Vect{{Y,a}}) = {da:.3g} for a = {[str(x) for x in a]}")
        res.check(f"a{i + 1}", da <= 1e-12 and in_subspace_exact(e_exact, V), da)
    return res


def suite_canonical_subspace(schedule=(10, 20, 40)) -> SuiteResult:
    res = SuiteResult("thm3.1")
    for name, G in (("C2", example_dense_spectrum_C2()), ("R3", example_R3())):
        pr = hypercyclicity_probe(G, schedule=schedule)
        res.reports[f"{name} hypercyclicity"] = pr.report.to_json()
        res.check(f"{name} hypercyclic", pr.report.verdict == DENSE, pr.report.trend)
        M = canonical_invariant_subspace(pr.normal_form)
        inv, err = is_invariant(G, M)
        res.check(f"{name} canonical M invariant", inv, err)
        y, rep = witness_in_subspace(G, M, schedule=schedule)
        res.reports[f"{name} subspace"] = rep.to_json()
        res.check(f"{name} subspace-hypercyclic", y is not None and rep.verdict == DENSE, rep.trend)
    try:
        canonical_invariant_subspace(hypercyclicity_probe(example_G_theta(2, 3, Surd.sqrt(2)),
                                                          schedule=(5, 10, 20)).normal_form)
        res.check("R^2 plane case refused", False)
    except NoNontrivialCanonical as exc:
        res.check("R^2 plane case refused", True, str(exc))
    return res


def suite_g_theta(seed: int = 0, lines: int = 8, schedule=(10, 20, 40)) -> SuiteResult:
    res = SuiteResult("ex4.1")
    theta = Surd.sqrt(2)
    G = example_G_theta(2, 3, theta)
    pr = hypercyclicity_probe(G, schedule=schedule)
    res.reports["hypercyclicity"] = pr.report.to_json()
    res.check("hypercyclic", pr.report.verdict == DENSE, pr.report.trend)
    rng = np.random.default_rng(seed)
    for i in range(lines):
        a = float(rng.uniform(0, math.pi))
        v = np.array([math.cos(a), math.sin(a)])
        M = subspace_from_basis([v])
        rep = subspace_hypercyclicity_probe(G, M, v, schedule=schedule)
        res.reports[f"line {i + 1}"] = rep.to_json()
        res.check(f"line {i + 1} not dense", rep.verdict == NOT_DENSE, rep.trend)
    tr = line_trace_G_theta(2, 3, theta, [1.0, 0.0], 20)
    res.check("trace scalars positive", all(x > 0 for x in tr.scalars), len(tr.scalars))
    res.check("rotation guard positive", tr.guard > 0, tr.guard)
    return res


def suite_non_abelian(L: int = 50, R: float = 2.0, eps: float = 0.05) -> SuiteResult:
    res = SuiteResult("prop5.1")
    G = planted_javaheri(3)
    A, B, Ap, Bp = G.generators[:4]
    e = np.array([Fraction(0), Fraction(0), Fraction(1)], dtype=object)
    ok = True
    for k in range(5):
        for l in range(5):
            W = np.linalg.matrix_power(B.dot(Bp), k).dot(np.linalg.matrix_power(A.dot(Ap), l))
            ok &= list(W.dot(e)) == list(Fraction(1, 3**k) * Fraction(2**l) * e)
    res.check("(BB')^k (AA')^l e_n identity", ok)
    tr, vals = javaheri_trace(G, L, exact=True)
    oracle = {Fraction(2**l, 3**k) for k in range(L + 1) for l in range(L + 1 - k)}
    res.check("trace equals scalar set", {r[-1] for r in tr.exact_rows()} == oracle, len(oracle))
    cov = log_coverage(vals, R, eps).coverage
    res.reports["log coverage"] = {"R": R, "epsilon": eps, "L": L, "coverage": cov}
    res.check("log-window coverage >= 0.9", cov >= 0.9, cov)
    return res


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "thm2.1": suite_line_traces,
    "thm2.4": suite_complex_embedding,
    "prop2.5": suite_ray_recovery,
    "prop2.6": suite_half_lines,
    "rem2.6": suite_distance_demo,
    "thm3.1": suite_canonical_subspace,
    "ex4.1": suite_g_theta,
    "prop5.1": suite_non_abelian,
}


def run_suite(item: str) -> SuiteResult:
    if item not in SUITES:
        raise UnknownId(f"unknown item {item!r}; known: {', '.join(SUITES)}")
    return SUITES[item]()
