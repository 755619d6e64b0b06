"""Brute-force reference values, computed without the hyperlab package.

Every quantity here comes from plain loops over the defining index sets,
with exact integer tests where a boundary could matter.  Run once; the
printed JSON is frozen into the test suite (tests/oracle_values.py) and
saved next to this script as oracles.json.

    python3 scripts/compute_oracles.py
"""

from __future__ import annotations

import json
import math
from decimal import Decimal, getcontext
from fractions import Fraction
from pathlib import Path

import mpmath

getcontext().prec = 60


# A_alpha = N^n + N alpha, alpha_i = -sqrt(p_i) ------------------------------

def in_unit_interval(s1: int, s: int, p: int) -> bool:
    """Exact test of ``0 <= s1 - s sqrt(p) <= 1`` for integers s, s1 >= 0."""
    if s1 * s1 < p * s * s:  # s1 < s sqrt(p)
        return False
    t = s1 - 1  # need t <= s sqrt(p)
    return t < 0 or t * t <= p * s * s


def a_alpha_unit_points_1d(S: int, p: int) -> list[tuple[int, int]]:
    return [(s, s1) for s in range(S + 1) for s1 in range(S + 1) if in_unit_interval(s1, s, p)]


def a_alpha_unit_count_2d(S: int, p=(2, 3)) -> int:
    good = [[s1 for s1 in range(S + 1) if in_unit_interval(s1, s, p[0])] for s in range(S + 1)]
    good2 = [[s2 for s2 in range(S + 1) if in_unit_interval(s2, s, p[1])] for s in range(S + 1)]
    return sum(len(a) * len(b) for a, b in zip(good, good2))


def a_alpha_coverage(S: int, lo: float, hi: float, eps: float, p=(2, 3)) -> tuple[int, int]:
    """Float binning ``floor((x - lo) / eps)`` of ``x_i = s_i + s * (-sqrt(p_i))``.

    Points outside the closed window are dropped, as are points whose index
    is past the last cell.
    """
    a = [-math.sqrt(q) for q in p]
    m = math.ceil((hi - lo) / eps - 1e-9)
    hits = set()
    for s in range(S + 1):
        cols = []
        for ai in a:
            row = []
            for si in range(S + 1):
                x = si + s * ai
                if lo <= x <= hi:
                    k = math.floor((x - lo) / eps)
                    if 0 <= k < m:
                        row.append(k)
            cols.append(row)
        for i in cols[0]:
            for j in cols[1]:
                hits.add((i, j))
    return len(hits), m * m


# Z-module ---------------------------------------------------------------------

def z_module_coverage(bound: int, lo=-2.0, hi=2.0, eps=0.1) -> tuple[int, int]:
    r2, r3 = math.sqrt(2), math.sqrt(3)
    m = math.ceil((hi - lo) / eps - 1e-9)
    hits = set()
    for k1 in range(-bound, bound + 1):
        for k2 in range(-bound, bound + 1):
            x = 0.0 + k1 * 1.0 + k2 * r2
            y = 0.0 + k1 * 0.0 + k2 * r3
            if lo <= x <= hi and lo <= y <= hi:
                i, j = math.floor((x - lo) / eps), math.floor((y - lo) / eps)
                if 0 <= i < m and 0 <= j < m:
                    hits.add((i, j))
    return len(hits), m * m


# A_{alpha,beta} in C, n = 1 -----------------------------------------------

def a_alpha_beta_disc_count(S: int, p: int = 2, q: int = 3) -> int:
    """Points ``s1 + i s2 + s(-sqrt p - i sqrt q)`` with modulus <= 1."""
    rp, rq = Decimal(p).sqrt(), Decimal(q).sqrt()
    count = 0
    for s in range(S + 1):
        for s1 in range(S + 1):
            x = s1 - s * rp
            if abs(x) > 1:
                continue
            for s2 in range(S + 1):
                y = s2 - s * rq
                if x * x + y * y <= 1:
                    count += 1
    return count


# A2 on the unit polydisc ---------------------------------------------------

def a2_polydisc_coverage(S: int, step: float, eps: float, t1: float, t2: float) -> tuple[int, int]:
    """Full 4-D enumeration; a cell counts when its centre lies in the polydisc."""
    kmax = int(math.floor(1.0 / step + 1e-9))
    radii = [step * k for k in range(1, kmax + 1)]
    m = math.ceil(2.0 / eps - 1e-9)

    def cells(theta):
        out = set()
        for n in range(S + 1):
            ang = 2 * math.pi * ((n * theta) % 1.0)
            c, s = math.cos(ang), math.sin(ang)
            for r in radii:
                x, y = r * c, r * s
                if x * x + y * y <= 1.0:
                    i, j = math.floor((x + 1) / eps), math.floor((y + 1) / eps)
                    if 0 <= i < m and 0 <= j < m:
                        out.add((i, j))
        return out

    def centre_ok(i, j):
        cx, cy = -1 + (i + 0.5) * eps, -1 + (j + 0.5) * eps
        return cx * cx + cy * cy <= 1.0

    c1, c2 = cells(t1), cells(t2)
    hits = 0
    for a in c1:
        for b in c2:
            if centre_ok(*a) and centre_ok(*b):
                hits += 1
    valid = sum(centre_ok(i, j) for i in range(m) for j in range(m))
    return hits, valid * valid


# set B -------------------------------------------------------------------------

def b_coverage(k: int, eps: float = 0.1) -> tuple[int, int]:
    """Radii j/k up to sqrt(2), grid angles t = a/(4k); angles in [1/2,1) are
    replaced by 1/2 + ((t - 1/2 + 1/sqrt 2) mod 1/2)."""
    r_max = math.sqrt(2)
    radii = [j / k for j in range(1, int(math.floor(r_max * k + 1e-9)) + 1)]
    inv = Decimal(2).sqrt() / 2
    angles = []
    for a in range(4 * k):
        t = Fraction(a, 4 * k)
        if t < Fraction(1, 2):
            angles.append(float(t))
        else:
            x = Decimal(t.numerator) / Decimal(t.denominator) - Decimal("0.5") + inv
            x = x - Decimal("0.5") * (x / Decimal("0.5")).to_integral_value(rounding="ROUND_FLOOR")
            angles.append(float(Decimal("0.5") + x))
    m = math.ceil(2.0 / eps - 1e-9)
    hits = set()
    for t in angles:
        c, s = math.cos(2 * math.pi * t), math.sin(2 * math.pi * t)
        for r in radii:
            x, y = r * c, r * s
            if -1 <= x <= 1 and -1 <= y <= 1:
                i, j = math.floor((x + 1) / eps), math.floor((y + 1) / eps)
                if 0 <= i < m and 0 <= j < m:
                    hits.add((i, j))
    return len(hits), m * m


# G_theta and rotation guard ------------------------------------------------

def sin_guard(bound: int, digits: int = 50) -> str:
    mpmath.mp.dps = digits
    v = min(abs(mpmath.sin(mpmath.pi * s * mpmath.sqrt(2))) for s in range(1, bound + 1))
    return mpmath.nstr(v, 30)


def g_theta_coverage(K: int, S: int, R: float = 2.0, eps: float = 0.1) -> tuple[int, int]:
    """Cells of [-R, R]^2 hit by (2^k / 3^m) e^{i pi s sqrt 2}, k, m <= K, s <= S."""
    mpmath.mp.dps = 30
    phases = []
    for s in range(S + 1):
        a = mpmath.pi * s * mpmath.sqrt(2)
        phases.append((float(mpmath.cos(a)), float(mpmath.sin(a))))
    mods = {Fraction(2**k, 3**m) for k in range(K + 1) for m in range(K + 1)}
    mods = [float(x) for x in mods if x <= Fraction(3)]
    m_cells = math.ceil(2 * R / eps - 1e-9)
    hits = set()
    for r in mods:
        for c, s in phases:
            x, y = r * c, r * s
            if -R <= x <= R and -R <= y <= R:
                i, j = math.floor((x + R) / eps), math.floor((y + R) / eps)
                if 0 <= i < m_cells and 0 <= j < m_cells:
                    hits.add((i, j))
    return len(hits), m_cells * m_cells


def scalar_log_coverage(L: int, R: float, eps: float) -> tuple[int, int]:
    """Cells of [-log R, log R] hit by log(2^l 3^-k), k + l <= L."""
    lo = -math.log(R)
    m = math.ceil(2 * math.log(R) / eps - 1e-9)
    hits = set()
    for k in range(L + 1):
        for l in range(L + 1 - k):
            x = math.log(Fraction(2**l, 3**k))
            i = math.floor((x - lo) / eps)
            if 0 <= i < m:
                hits.add(i)
    return len(hits), m


def signed_spectrum_coverage(K: int, R: float = 2.0, eps: float = 0.1) -> tuple[int, int]:
    """Cells of [-R, R] hit by +-2^k 3^-m with k, m <= K."""
    m = math.ceil(2 * R / eps - 1e-9)
    hits = set()
    for k in range(K + 1):
        for j in range(K + 1):
            for sign in (1, -1):
                x = sign * Fraction(2**k, 3**j)
                if -R <= x <= R:
                    i = math.floor((x + Fraction(R)) / Fraction(eps))
                    if 0 <= i < m:
                        hits.add(i)
    return len(hits), m


# projection -----------------------------------------------------------------

def projection_oracle() -> list[str]:
    """[1,1,1] projected onto Vect{[1,0,sqrt2],[0,1,sqrt3]} via normal equations."""
    r2, r3 = Decimal(2).sqrt(), Decimal(3).sqrt()
    a = [Decimal(1), Decimal(0), r2]
    b = [Decimal(0), Decimal(1), r3]
    y = [Decimal(1)] * 3
    dot = lambda u, v: sum(x * z for x, z in zip(u, v))  # noqa: E731
    g11, g12, g22 = dot(a, a), dot(a, b), dot(b, b)
    r1, r_2 = dot(a, y), dot(b, y)
    det = g11 * g22 - g12 * g12
    c1 = (g22 * r1 - g12 * r_2) / det
    c2 = (g11 * r_2 - g12 * r1) / det
    return [str(+(c1 * x + c2 * z)) for x, z in zip(a, b)]


def main() -> dict:
    out = {}
    out["A_alpha_n1_S3_unit"] = [list(t) for t in a_alpha_unit_points_1d(3, 2)]
    out["A_alpha_n2_S200_unit_count"] = a_alpha_unit_count_2d(200)
    for S in (50, 100, 200, 400, 800):
        out[f"A_alpha_unit_cover_S{S}"] = a_alpha_coverage(S, 0.0, 1.0, 0.1)
    for S in (400, 800, 1600):
        out[f"A_alpha_wide_cover_S{S}"] = a_alpha_coverage(S, -2.0, 2.0, 0.1)
    for b in (2, 4, 8, 50):
        out[f"Z_module_cover_bound{b}"] = z_module_coverage(b)
    out["A_alpha_beta_disc_count_S50"] = a_alpha_beta_disc_count(50)
    out["A2_polydisc_cover_S100"] = a2_polydisc_coverage(100, 0.05, 0.25, math.sqrt(2), math.sqrt(3))
    out["B_cover_k32"] = b_coverage(32)
    out["sin_guard_100"] = sin_guard(100)
    out["sin_guard_200"] = sin_guard(200)
    out["G_theta_cover_K25_S200"] = g_theta_coverage(25, 200)
    out["scalar_log_cover_L40"] = scalar_log_coverage(40, 2.0, 0.05)
    out["scalar_log_cover_L50"] = scalar_log_coverage(50, 2.0, 0.05)
    out["signed_spectrum_cover_K40"] = signed_spectrum_coverage(40)
    out["projection_111"] = projection_oracle()
    return out


if __name__ == "__main__":
    values = main()
    text = json.dumps(values, indent=1)
    (Path(__file__).with_name("oracles.json")).write_text(text + "\n")
    print(text)
