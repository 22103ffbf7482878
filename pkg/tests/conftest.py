"""Shared high-precision oracles for the test suite.

The oracles evaluate the defining formulas with mpmath at 60 digits and
stay independent of the library's double-precision code paths.
"""

from __future__ import annotations

from mpmath import mp

mp.dps = 60


def mp_distance(r1, phi1, r2, phi2):
    """Distance from the defining formula, at high precision."""
    arg = mp.cosh(r1) * mp.cosh(r2) - mp.sinh(r1) * mp.sinh(r2) * mp.cos(
        mp.mpf(phi1) - mp.mpf(phi2)
    )
    if arg < 1:
        arg = mp.mpf(1)
    return mp.acosh(arg)


def mp_theta(r, y, R):
    """Threshold angle from the defining formula, at high precision."""
    arg = (mp.cosh(y) * mp.cosh(r) - mp.cosh(R)) / (mp.sinh(y) * mp.sinh(r))
    if arg > 1:
        return mp.mpf(0)
    if arg < -1:
        return mp.pi
    return mp.acos(arg)
