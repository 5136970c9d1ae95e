"""Catalog of test functions on [-2, 2].

Each entry carries its regularity class and, where it is known in closed
form, the limiting variance ``V_GUE[f]``. Functions are evaluated on the
whole real line: polynomial entries use their natural extension, every
other entry is held constant outside [-2, 2].
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import chebyshev

SERIES_TRUNCATION = 2000
DEFAULT_HOELDER_ALPHA = 0.75


class Regularity(str, enum.Enum):
    ANALYTIC = "analytic"
    SMOOTH = "smooth"
    LIPSCHITZ = "lipschitz"
    HOELDER = "hoelder"
    CONTINUOUS = "continuous"
    BOUNDED_VARIATION_JUMP = "bounded_variation_jump"
    CONTINUOUS_DIVERGENT = "continuous_divergent"


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A bounded real function with metadata used by the quadrature layer.

    ``breakpoints`` are points where ``f`` or a low derivative is not
    smooth; finite-n grids put panel edges there. ``graded`` points also
    get geometric panel refinement. ``polynomial`` entries are evaluated
    as-is off [-2, 2]; the rest are clamped to the boundary values.
    ``bandwidth`` is the highest Chebyshev order present (0 if unknown or
    small); finite-n grids resolve at least that many oscillations.
    """

    __test__ = False  # not a pytest class

    id: str
    func: Callable[[np.ndarray], np.ndarray]
    regularity: Regularity
    alpha: Optional[float] = None
    known_v: Optional[float] = None
    known_v_source: Optional[str] = None
    breakpoints: tuple = ()
    graded: tuple = ()
    polynomial: bool = False
    bandwidth: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.regularity is Regularity.HOELDER and not (self.alpha is not None and 0 < self.alpha < 1):
            raise ValueError("hoelder functions need 0 < alpha < 1")

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if not self.polynomial:
            x = np.clip(x, -2.0, 2.0)
        return np.asarray(self.func(x), dtype=np.float64) + np.zeros_like(x)

    def scaled(self, c):
        """``c * f`` with ``known_v`` scaled by ``c^2``."""
        kv = None if self.known_v is None else c * c * self.known_v
        return TestFunction(f"{c!r}*{self.id}", lambda x: c * self.func(x), self.regularity,
                            self.alpha, kv, self.known_v_source, self.breakpoints,
                            self.graded, self.polynomial, self.bandwidth)

    def shifted(self, c):
        """``f + c``; the limiting variance is unchanged."""
        return TestFunction(f"{self.id}+{c!r}", lambda x: self.func(x) + c, self.regularity,
                            self.alpha, self.known_v, self.known_v_source, self.breakpoints,
                            self.graded, self.polynomial, self.bandwidth)


def _bump(x):
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (1.0 - xi * xi))
    return out


def series_coefficients(coeff_rule, K=SERIES_TRUNCATION):
    """``c_0..c_K`` with ``c_k = coeff_rule(k)`` for ``k >= 2`` and zeros below."""
    if K < 2:
        raise ValueError("K must be >= 2")
    c = np.zeros(K + 1)
    for k in range(2, K + 1):
        c[k] = coeff_rule(k)
    return c


def series_variance_class(coeff_rule, K=SERIES_TRUNCATION, *, id="series", regularity=Regularity.CONTINUOUS):
    """Build ``f(2 cos t) = sum_{k=2}^K c_k cos(k t)`` and its variance partial sums.

    Returns ``(f, partial_sums)`` where ``partial_sums[j]`` is
    ``(1/4) sum_{k=2}^{j+2} k c_k^2``.
    """
    c = series_coefficients(coeff_rule, K)
    k = np.arange(K + 1)
    terms = 0.25 * k * c * c
    partial = np.cumsum(terms[2:])
    f = TestFunction(id, lambda x: chebyshev.chebval(x / 2.0, c), regularity,
                     known_v=None, bandwidth=K, meta={"coeffs": c})
    return f, partial


def _cheb(k):
    coeffs = np.zeros(k + 1)
    coeffs[k] = 1.0
    return TestFunction(f"cheb_{k}", lambda x: chebyshev.chebval(x / 2.0, coeffs),
                        Regularity.ANALYTIC, known_v=k / 4.0,
                        known_v_source="analytic: cosine series (1/4) k c_k^2",
                        polynomial=True, bandwidth=k)


def _hoelder(alpha):
    if not 0 < alpha < 1:
        raise ValueError("hoelder exponent must be in (0, 1)")
    return TestFunction(f"hoelder_{alpha:g}", lambda x: np.abs(x) ** alpha, Regularity.HOELDER,
                        alpha=alpha, breakpoints=(0.0,), graded=(0.0,))


def _fixed():
    return {
        "identity": TestFunction("identity", lambda x: x, Regularity.ANALYTIC, known_v=1.0,
                                 known_v_source="analytic: quotient is 1", polynomial=True),
        "square": TestFunction("square", lambda x: x * x, Regularity.ANALYTIC, known_v=2.0,
                               known_v_source="analytic: moment expansion", polynomial=True),
        "constant": TestFunction("constant", lambda x: np.ones_like(x), Regularity.ANALYTIC,
                                 known_v=0.0, known_v_source="analytic: quotient is 0",
                                 polynomial=True),
        "step": TestFunction("step", lambda x: (x > 0).astype(np.float64),
                             Regularity.BOUNDED_VARIATION_JUMP, breakpoints=(0.0,)),
        "bump": TestFunction("bump", _bump, Regularity.SMOOTH, breakpoints=(-1.0, 1.0)),
    }


_SERIES = {
    "series_convergent": (lambda k: 1.0 / (k * math.log(k)), Regularity.CONTINUOUS),
    "series_divergent": (lambda k: 1.0 / (k * math.sqrt(math.log(k))), Regularity.CONTINUOUS_DIVERGENT),
}

_CACHE: dict = {}


def catalog_ids():
    """Ids accepted by :func:`builtin` (parametric families shown by pattern)."""
    return sorted(_fixed()) + sorted(_SERIES) + ["cheb_<k>", "hoelder_alpha", "hoelder_<alpha>"]


def builtin(id) -> TestFunction:
    """Look up a catalog function by id.

    Besides the fixed names, ``cheb_<k>`` gives ``T_k(x/2)`` and
    ``hoelder_<alpha>`` gives ``|x|^alpha`` (``hoelder_alpha`` uses 0.75).
    """
    if id in _CACHE:
        return _CACHE[id]
    fixed = _fixed()
    if id in fixed:
        f = fixed[id]
    elif id in _SERIES:
        rule, reg = _SERIES[id]
        f, _ = series_variance_class(rule, SERIES_TRUNCATION, id=id, regularity=reg)
    elif id == "hoelder_alpha":
        f = _hoelder(DEFAULT_HOELDER_ALPHA)
    elif (m := re.fullmatch(r"cheb_(\d+)", id)) and 1 <= int(m.group(1)) <= 10_000:
        f = _cheb(int(m.group(1)))
    elif m := re.fullmatch(r"hoelder_([0-9]*\.?[0-9]+)", id):
        f = _hoelder(float(m.group(1)))
    else:
        raise KeyError(f"unknown test function {id!r}; known: {', '.join(catalog_ids())}")
    _CACHE[id] = f
    return f
