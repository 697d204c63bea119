"""
Canonical configurations of the reference experiments.
"""
from typing import List, Optional

# Density runs (2-, 3- and 4-coupled runs use a prefix of this vector)
DENSITY_X0 = (0.330000013113, 0.338756413113, 0.331353442113, 0.333213583113)

# Correlation and sampling runs
CANONICAL_X0 = (0.330, 0.3387564, 0.50492331, 0.0)

# Seed scans: x_{0,k}^j = base_j + stride * multiplier_j * k
SEED_SCAN_BASE = (-0.92712, -0.9183636, -0.92576657, -0.92390643)
SEED_SCAN_MULTIPLIERS = (1, 7, 13, 17)
SEED_SCAN_STRIDE_4 = 1e-7
SEED_SCAN_STRIDE_3 = 1e-6

SAMPLING_THRESHOLD = 0.998
MIXING_THRESHOLDS = (0.998, 0.9987, 0.9994)


def default_x0(p: int) -> Optional[List[float]]:
    """
    Initial vector used when none is given.

    p = 4 uses the correlation/sampling vector, p < 4 a prefix of the density
    vector. Larger systems have no canonical start.
    """
    if p == 4:
        return list(CANONICAL_X0)
    if p < 4:
        return list(DENSITY_X0[:p])
    return None
