"""Parameter bundles and result records.

The central object is `HypSpec`, holding the parameters of
F(sigma, (a); (b); -x) = sum_n (sigma)_n (a_1)_n ... (a_q)_n /
((b_1)_n ... (b_q)_n n!) (-x)^n together with validity flags that
downstream evaluators and bound checkers consult.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import InvalidSpec


class Method(enum.Enum):
    Series = "series"
    ContinuedFraction = "cf"
    StieltjesQuadrature = "stieltjes"
    Asymptotic = "asymptotic"


def _is_nonpositive_integer(x: float, tol: float = 1e-12) -> bool:
    return x < 0.5 and abs(x - round(x)) < tol and round(x) <= 0


@dataclass(frozen=True)
class HypSpec:
    """Parameters (sigma, (a_q); (b_q)) of the hypergeometric function.

    The flags classify the spec once at construction:

    - ``stieltjes_valid``: the a's and b's can be paired so that
      b_k > a_k > 0 for every k (sorted pairing; if any pairing works,
      the sorted one does).  The integral-representation evaluator and
      most bound families require this.
    - ``thm2_valid``: pairable with b_k > a_k > 1 throughout and
      sigma == 1, the regime of the two-sided product-form bounds.
    - ``q2_relaxed_valid``: q == 2 relaxed regime: sum(b) > sum(a),
      both a's positive, and min(a) < min(b).  The representation and
      the monotone-ratio statement survive under these weaker
      conditions even when a pairwise b_k > a_k fails.
    """

    sigma: float
    a: tuple[float, ...]
    b: tuple[float, ...]
    stieltjes_valid: bool = field(init=False)
    thm2_valid: bool = field(init=False)
    q2_relaxed_valid: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "sigma", float(self.sigma))
        if len(self.a) != len(self.b) or len(self.a) < 1:
            raise InvalidSpec("need len(a) == len(b) >= 1")
        for v in self.a + self.b + (self.sigma,):
            if not math.isfinite(v):
                raise InvalidSpec("parameters must be finite")
        for bk in self.b:
            if _is_nonpositive_integer(bk):
                raise InvalidSpec(f"denominator parameter {bk} is a "
                                  "non-positive integer")
        asorted = sorted(self.a)
        bsorted = sorted(self.b)
        stq = all(bk > ak > 0.0 for ak, bk in zip(asorted, bsorted))
        thm2 = (self.sigma == 1.0
                and all(bk > ak > 1.0 for ak, bk in zip(asorted, bsorted)))
        relaxed = (len(self.a) == 2
                   and sum(self.b) > sum(self.a)
                   and min(self.a) > 0.0
                   and min(self.a) < min(self.b))
        object.__setattr__(self, "stieltjes_valid", stq)
        object.__setattr__(self, "thm2_valid", thm2)
        object.__setattr__(self, "q2_relaxed_valid", relaxed)

    @property
    def q(self) -> int:
        return len(self.a)

    def shifted(self, delta: float) -> "HypSpec":
        """Same sigma with all a's and b's shifted by delta."""
        return HypSpec(self.sigma,
                       tuple(v + delta for v in self.a),
                       tuple(v + delta for v in self.b))

    def with_sigma(self, sigma: float) -> "HypSpec":
        return HypSpec(sigma, self.a, self.b)

    def numerator_params(self) -> tuple[float, ...]:
        return (self.sigma,) + self.a


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_err_estimate: float
    method: Method
    effort: int

    def __post_init__(self):
        if not (self.abs_err_estimate >= 0.0
                and math.isfinite(self.abs_err_estimate)):
            raise InvalidSpec("error estimate must be finite, >= 0")
        if self.effort < 1:
            raise InvalidSpec("effort must be >= 1")


@dataclass(frozen=True)
class GammaRatioSpec:
    numerator: tuple[float, ...]
    denominator: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "numerator",
                           tuple(float(v) for v in self.numerator))
        object.__setattr__(self, "denominator",
                           tuple(float(v) for v in self.denominator))


class BoundSource(enum.Enum):
    Thm2 = "thm2"
    Thm3Jensen = "thm3"
    Thm4Jensen = "thm4"
    Q1NegX = "q1neg"
    Carlson = "carlson"
    LukeSigma = "luke"
    Convergents = "convergents"


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float
    source: BoundSource
    valid: bool
    lower_valid: bool = True
    upper_valid: bool = True


@dataclass(frozen=True)
class RatioPoint:
    x: float
    f_value: float


@dataclass(frozen=True)
class DensitySample:
    s: float
    g_value: float
    weight_value: float


@dataclass(frozen=True)
class AppellF3Spec:
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    gamma: float
    z1: float
    z2: float

    def __post_init__(self):
        if _is_nonpositive_integer(self.gamma):
            raise InvalidSpec("gamma is a non-positive integer")


@dataclass(frozen=True)
class ThomaeInstance:
    a: float
    b: float
    c: float
    d: float
    e: float

    @property
    def margin(self) -> float:
        """Unit-argument convergence margin d + e - a - b - c."""
        return self.d + self.e - self.a - self.b - self.c

    def __post_init__(self):
        if self.margin <= 0:
            raise InvalidSpec("series at unit argument diverges: "
                              f"margin {self.margin} <= 0")
        for v in (self.d, self.e):
            if _is_nonpositive_integer(v):
                raise InvalidSpec(f"denominator parameter {v} is a "
                                  "non-positive integer")
