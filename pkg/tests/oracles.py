"""Independent numerical oracles used by the tests.

These deliberately avoid the code paths they check: the quadrature oracle
integrates pointwise samples of the real-space pattern over the smooth
pieces of the cell (it never touches the analytic Fourier series), the
folding oracle enumerates free-space parabolas, and the high-precision
oracle re-derives the closed-form orbital parameters with mpmath.
"""
import math

import numpy as np

from phczeeman import derive_params, phase_pattern
from phczeeman.constants import C, HBAR


def quadrature_fourier_coefficient(lattice, m, n, order=40):
    """(1/A) * integral of pattern * exp(-i G.r) over the unit cell.

    The cell is split along the pixel edges into nine boxes on which the
    integrand is smooth; each box is integrated with tensor Gauss-Legendre.
    """
    pitch = lattice.pitch
    half = 0.5 * pitch
    a_half = 0.5 * pitch * math.sqrt(lattice.fill_factor)
    cuts = [-half, -a_half, a_half, half]
    nodes, weights = np.polynomial.legendre.leggauss(order)
    gx = 2.0 * math.pi * m / pitch
    gy = 2.0 * math.pi * n / pitch
    total = 0.0 + 0.0j
    for ix in range(3):
        xa, xb = cuts[ix], cuts[ix + 1]
        x = 0.5 * (xb - xa) * nodes + 0.5 * (xb + xa)
        wx = 0.5 * (xb - xa) * weights
        for iy in range(3):
            ya, yb = cuts[iy], cuts[iy + 1]
            y = 0.5 * (yb - ya) * nodes + 0.5 * (yb + ya)
            wy = 0.5 * (yb - ya) * weights
            xx, yy = np.meshgrid(x, y, indexing="ij")
            vals = phase_pattern(lattice, xx, yy) * np.exp(
                -1j * (gx * xx + gy * yy)
            )
            total += wx @ vals @ wy
    return total / pitch**2


def folded_free_bands(lattice, kx, ky, halfwidth, n_bands):
    """Empty-lattice bands: free-space parabolas folded over the windows."""
    dp = derive_params(lattice)
    vals = []
    for m in range(-halfwidth, halfwidth + 1):
        for n in range(-halfwidth, halfwidth + 1):
            gx = 2.0 * math.pi * m / lattice.pitch
            gy = 2.0 * math.pi * n / lattice.pitch
            vals.append(
                dp.omega0
                + HBAR * ((kx + gx) ** 2 + (ky + gy) ** 2) / (2.0 * dp.m0)
            )
    return np.sort(np.array(vals))[:n_bands]


def mp_closed_form_total(lattice, dps=40):
    """Arbitrary-precision re-derivation of the total orbital parameter M.

    Returns (m_plus, m_minus, m_total) as floats computed at ``dps`` digits.
    """
    import mpmath as mp

    with mp.workdps(dps):
        lam = mp.mpf(repr(lattice.lambda_vac))
        n = mp.mpf(repr(lattice.n_refr))
        pitch = mp.mpf(repr(lattice.pitch))
        ff = mp.mpf(repr(lattice.fill_factor))
        dphi = mp.mpf(repr(lattice.dphi))
        hbar = mp.mpf(repr(HBAR))
        c = mp.mpf(repr(C))
        k_z = 2 * mp.pi * n / lam
        l_z = lam / n
        m0 = n * hbar * k_z / c
        p = hbar * mp.pi / (mp.sqrt(2) * pitch)
        s = mp.sin(mp.pi * mp.sqrt(ff)) / (mp.pi * mp.sqrt(ff))
        pref = 2 * n * l_z * p**2 / (hbar * m0 * c * ff * dphi)
        m_plus = pref / (s * (1 + s))
        m_minus = pref / (s * (1 - s))
        return float(m_plus), float(m_minus), float(m_plus + m_minus)
