"""Size limits for the brute-force computations.

The limits can be lowered through the environment, never raised:

    PC_MAX_GROUND        largest ground set a Matroid may have (default 16)
    PC_INSTANCE_TIMEOUT  wall-time guard per suite instance in seconds
                         (default 30, 0 disables the guard)
"""

import os

DEFAULT_MAX_GROUND = 16
DEFAULT_INSTANCE_TIMEOUT = 30.0

# Exhaustive challenger sweeps run only when
# sum(tactic counts) * log2(|F|) stays below this many bits.
CHALLENGER_BITS_CAP = 16


def max_ground() -> int:
    """Return the bitmask cap for ground sets."""
    raw = os.getenv("PC_MAX_GROUND", "").strip()
    if not raw:
        return DEFAULT_MAX_GROUND
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_GROUND
    if value < 1:
        return DEFAULT_MAX_GROUND
    return min(value, DEFAULT_MAX_GROUND)


def instance_timeout() -> float:
    """Return the per-instance wall-time guard in seconds (0 = disabled)."""
    raw = os.getenv("PC_INSTANCE_TIMEOUT", "").strip()
    if not raw:
        return DEFAULT_INSTANCE_TIMEOUT
    try:
        value = float(raw)
    except ValueError:
        return DEFAULT_INSTANCE_TIMEOUT
    return max(value, 0.0)
