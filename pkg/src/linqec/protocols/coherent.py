"""Stokes statistics and distinguishability of linearly polarized coherent states."""
from __future__ import annotations

import math

import numpy as np


def rotated_coherent(alpha: complex, theta: float) -> tuple[complex, complex]:
    """Amplitudes of R(theta)|alpha, 0> = |alpha cos(theta), alpha sin(theta)>."""
    return alpha * math.cos(theta), alpha * math.sin(theta)


def stokes_from_amplitudes(a_h: complex, a_v: complex) -> tuple[np.ndarray, np.ndarray]:
    """Stokes means and variances of the two-mode coherent state |a_h, a_v>.

    Means follow from normal ordering; for a coherent state every Stokes
    variance equals the total mean photon number.
    """
    cross = a_h.conjugate() * a_v
    means = np.array([abs(a_h) ** 2 - abs(a_v) ** 2, 2 * cross.real, 2 * cross.imag])
    n = abs(a_h) ** 2 + abs(a_v) ** 2
    return means, np.full(3, n)


def stokes_parameters(alpha: complex, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """(means, variances) of (S1, S2, S3) for R(theta)|alpha, 0>."""
    return stokes_from_amplitudes(*rotated_coherent(alpha, theta))


def coherent_overlap(a: complex, b: complex) -> complex:
    """<a|b> for single-mode coherent states."""
    return complex(np.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + a.conjugate() * b))


def distinguishability_paper(alpha: complex, theta: float) -> float:
    """Closed-form approximation exp(-2|alpha|^2 sin^2(theta)).

    Kept verbatim for comparison; it is not the exact overlap (see
    :func:`distinguishability_exact`).
    """
    return math.exp(-2 * abs(alpha) ** 2 * math.sin(theta) ** 2)


def distinguishability_exact(alpha: complex, theta: float) -> float:
    """|<alpha, 0| R(theta) |alpha, 0>|^2 = exp(-2|alpha|^2 (1 - cos(theta)))."""
    return math.exp(-2 * abs(alpha) ** 2 * (1 - math.cos(theta)))
