"""Generalized cross entropy between a fair and an observed distribution.

For a fair distribution ``pf`` and a performance distribution ``p`` over the
same categories the measure is::

    I = 1 / (alpha * (1 - alpha)) * (sum_j pf_j**alpha * p_j**(1 - alpha) - 1)

with the Kullback-Leibler limits ``-KL(pf || p)`` at ``alpha -> 1`` and
``-KL(p || pf)`` at ``alpha -> 0``. Named members of the family: Neyman's
chi-square (alpha = -1), Hellinger (1/2), Pearson's chi-square (2).

The value is never positive; smaller magnitude means closer to the fair
distribution. Both the signed value and its magnitude are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import Distribution, GceParams
from .errors import DomainError, SchemaError

# Distance from 0 or 1 below which the analytic KL limit replaces the formula.
LIMIT_EPS = 1e-9

INFINITE_DIVERGENCE = "InfiniteDivergence"
FINITE = "finite"

NEYMAN_CHI2 = -1.0
HELLINGER = 0.5
PEARSON_CHI2 = 2.0


@dataclass(frozen=True)
class GceResult:
    alpha: float
    signed_value: float
    absolute_value: float
    fair_label: str = ""

    @property
    def status(self) -> str:
        return INFINITE_DIVERGENCE if math.isinf(self.signed_value) else FINITE

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.signed_value)

    def value(self, absolute: bool = True) -> float:
        return self.absolute_value if absolute else self.signed_value


def _check_pair(pf: Distribution, p: Distribution):
    if pf.categories != p.categories:
        raise SchemaError(
            f"category mismatch: fair {list(pf.categories)} vs observed {list(p.categories)}"
        )
    if any(w <= 0 for w in pf.weights):
        raise DomainError("fair distribution must give every category positive mass")


def kl_divergence(p: Sequence[float], q: Sequence[float]) -> float:
    """KL(p || q) in nats, with 0 * log(0 / q) = 0 and inf when q_j = 0 < p_j."""
    terms = []
    for pj, qj in zip(p, q):
        if pj == 0:
            continue
        if qj == 0:
            return math.inf
        terms.append(pj * math.log(pj / qj))
    return math.fsum(terms)


def _gce_value(pf: Sequence[float], p: Sequence[float], alpha: float) -> float:
    if abs(alpha - 1.0) <= LIMIT_EPS:
        return -kl_divergence(pf, p)
    if abs(alpha) <= LIMIT_EPS:
        return -kl_divergence(p, pf)
    # sum_j pf^a p^(1-a) - 1 = sum_j p_j expm1(a log(pf_j / p_j)) + (sum_j p_j - 1)
    # keeps full relative precision when alpha sits near 0 or 1.
    terms = []
    for fj, pj in zip(pf, p):
        if pj == 0:
            if alpha > 1:
                return -math.inf
            # pf^a * 0^(1-a) = 0 for a < 1, so this category only drops its p_j
            continue
        terms.append(pj * math.expm1(alpha * math.log(fj / pj)))
    terms.append(math.fsum(p) - 1.0)
    return math.fsum(terms) / (alpha * (1.0 - alpha))


def gce(pf: Distribution, p: Distribution, params: GceParams | float = GceParams(),
        fair_label: str = "") -> GceResult:
    """Generalized cross entropy of ``p`` against the fair distribution ``pf``.

    Args:
        pf: fair distribution; every category must carry positive mass.
        p: observed performance distribution over the same ordered categories.
            Zero-mass categories are allowed.
        params: ``GceParams`` or a bare alpha.
        fair_label: name of ``pf`` carried into the result.

    Returns:
        GceResult. When ``p`` has an empty category and ``alpha >= 1`` the
        divergence is infinite; ``signed_value`` is then ``-inf`` and
        ``status`` is ``InfiniteDivergence``.

    Raises:
        SchemaError: category labels or order differ.
        DomainError: ``pf`` has a zero weight, or alpha is not finite.
    """
    if not isinstance(params, GceParams):
        params = GceParams(alpha=float(params))
    _check_pair(pf, p)
    signed = _gce_value(pf.weights, p.weights, params.alpha)
    return GceResult(params.alpha, signed, abs(signed), fair_label)


def gce_sweep(fair_set: Mapping[str, Distribution] | Iterable[tuple[str, Distribution]],
              p: Distribution, alphas: Sequence[float]) -> list[GceResult]:
    """Evaluate every (fair distribution, alpha) pair, fair-major order."""
    if isinstance(fair_set, Mapping):
        fair_set = fair_set.items()
    return [
        gce(pf, p, GceParams(alpha=float(a)), fair_label=label)
        for label, pf in fair_set
        for a in alphas
    ]
