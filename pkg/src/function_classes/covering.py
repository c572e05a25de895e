"""Covering-number bound for two-layer networks, evaluated in the log domain."""

from __future__ import annotations

import math

from scipy.special import gammaln

from src.common.errors import ArgumentError


def shallow_net_log_covering_bound(
    d0: int,
    d1: int,
    B: float,
    Bx: float,
    l_sigma: float,
    eps: float,
) -> float:
    """Natural log of the sup-norm covering number bound for a width-d1 network.

    The bound is (16 B^2 (Bx + 1) sqrt(d0) d1 / eps)^(d0 d1 + 2 d1 + 1)
    * l_sigma^(d0 d1 + d1) / d1!, which overflows as a float for moderate d1.
    """

    if eps <= 0:
        raise ArgumentError(f"eps must be positive, got {eps}")
    for name, value in (("d0", d0), ("d1", d1), ("B", B), ("Bx", Bx), ("l_sigma", l_sigma)):
        if value <= 0:
            raise ArgumentError(f"{name} must be positive, got {value}")

    base = 16.0 * B * B * (Bx + 1.0) * math.sqrt(d0) * d1 / eps
    exponent = d0 * d1 + 2 * d1 + 1
    return exponent * math.log(base) + (d0 * d1 + d1) * math.log(l_sigma) - float(gammaln(d1 + 1))


__all__ = ["shallow_net_log_covering_bound"]
