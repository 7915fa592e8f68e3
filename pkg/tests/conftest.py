"""Shared multiprecision reference oracles.

mpmath is used only here and in the tests: the package itself must
stand on double precision.  Inputs are converted to mpf once, exactly
(every Python float is a dyadic rational), so the oracles evaluate the
same mathematical object the package does with no decimal round trip.
"""
import mpmath as mp
import numpy as np
import pytest


def mp_F(sigma, a, b, x, dps: int = 30) -> float:
    """High-precision F(sigma, (a); (b); -x) via mpmath's hyper."""
    with mp.workdps(dps):
        val = mp.hyper([mp.mpf(sigma)] + [mp.mpf(v) for v in a],
                       [mp.mpf(v) for v in b], -mp.mpf(x))
        return float(val)


def mp_2f1(a, b, c, z, dps: int = 30) -> float:
    with mp.workdps(dps):
        return float(mp.hyp2f1(mp.mpf(a), mp.mpf(b), mp.mpf(c),
                               mp.mpf(z)))


def ref3f2_unit(a, b, c, d, e, dps: int = 30, head: int = 20000,
                nfit: int = 5):
    """Unit-argument 3F2 with terms decaying like n^(-1-m), summed by
    an exact-arithmetic head plus a zeta-function tail.

    The tail n > head is Sum c_j zeta(1+m+j, head+1) with the c_j
    fitted to the computed terms at nfit marks; this stays accurate
    down to very small positive m where generic convergence
    acceleration fails.  Returns a float.
    """
    with mp.workdps(dps + 15):
        am, bm, cm, dm, em = (mp.mpf(v) for v in (a, b, c, d, e))
        m = dm + em - am - bm - cm
        if not m > 0:
            raise ValueError("needs d + e - a - b - c > 0")
        marks = sorted({head - j * (head // 16) for j in range(nfit)})
        term = mp.mpf(1)
        total = mp.mpf(1)
        at_marks = {}
        for n in range(1, head + 1):
            term *= (am + n - 1) * (bm + n - 1) * (cm + n - 1) \
                / ((dm + n - 1) * (em + n - 1) * n)
            total += term
            if n in at_marks or n in marks:
                at_marks[n] = term
        # fit term_n * n^(1+m) = c_0 + c_1/n + ... on the marks
        rows = []
        rhs = []
        for n in marks:
            nn = mp.mpf(n)
            rows.append([nn ** (-j) for j in range(len(marks))])
            rhs.append(at_marks[n] * nn ** (1 + m))
        coef = mp.lu_solve(mp.matrix(rows), mp.matrix(rhs))
        tail = mp.mpf(0)
        for j in range(len(marks)):
            tail += coef[j] * mp.zeta(1 + m + j, head + 1)
        return float(total + tail)


def mp_g_q2(a1, a2, b1, b2, s, dps: int = 25) -> float:
    """q=2 density g by its defining single integral, evaluated
    directly: int_s^1 (1 - s/t)^(b1-a1-1) t^(a2-a1-1) (1-t)^(b2-a2-1)
    dt, with no use of the package's closed form."""
    with mp.workdps(dps):
        a1m, a2m, b1m, b2m, sm = (mp.mpf(v) for v in (a1, a2, b1, b2, s))

        def f(t):
            return (1 - sm / t) ** (b1m - a1m - 1) \
                * t ** (a2m - a1m - 1) * (1 - t) ** (b2m - a2m - 1)

        return float(mp.quad(f, [sm, 1]))


def mp_g_q3(a, b, s, dps: int = 20) -> float:
    """q=3 density g by its defining double integral over the region
    t2 t3 > s inside the unit square."""
    with mp.workdps(dps):
        a1, a2, a3 = (mp.mpf(v) for v in a)
        b1, b2, b3 = (mp.mpf(v) for v in b)
        sm = mp.mpf(s)

        def inner(t2):
            # quadrature nodes can round exactly onto the boundary,
            # where negative-exponent factors blow up; the measure
            # there is zero, so return 0 instead
            if t2 >= 1 or t2 <= sm:
                return mp.mpf(0)
            lo = sm / t2
            if lo >= 1:
                return mp.mpf(0)

            def f(t3):
                if t3 >= 1 or t3 <= lo:
                    return mp.mpf(0)
                base = 1 - sm / (t2 * t3)
                if base <= 0:
                    return mp.mpf(0)
                return base ** (b1 - a1 - 1) \
                    * t2 ** (a2 - a1 - 1) * (1 - t2) ** (b2 - a2 - 1) \
                    * t3 ** (a3 - a1 - 1) * (1 - t3) ** (b3 - a3 - 1)

            return mp.quad(f, [lo, (1 + lo) / 2, 1])

        return float(mp.quad(inner, [sm, 1]))


def draw_pairwise(rng, q: int, sigma_range=(0.3, 2.5),
                  a_range=(0.3, 2.5), gap_range=(0.2, 1.5)):
    """Random spec tuple (sigma, a, b) with b_k > a_k > 0 pairwise."""
    a = tuple(float(v) for v in rng.uniform(*a_range, size=q))
    b = tuple(ai + float(g) for ai, g in
              zip(a, rng.uniform(*gap_range, size=q)))
    sigma = float(rng.uniform(*sigma_range))
    return sigma, a, b


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)
