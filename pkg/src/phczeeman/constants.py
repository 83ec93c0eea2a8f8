"""Physical constants (CODATA), fixed in one place for reproducibility.

All internal computation is in SI units; output layers convert to GHz / mm
where a column declares it.
"""

HBAR = 1.054571817e-34  # J s
C = 2.99792458e8        # m / s
