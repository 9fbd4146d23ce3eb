import os


def tolerance(default: float) -> float:
    """Claim tolerance, overridable globally through ``MOMENTKIT_TOL``."""
    raw = os.environ.get("MOMENTKIT_TOL")
    if raw is None or not raw.strip():
        return default
    value = float(raw)
    if not value >= 0.0:
        raise ValueError(f"MOMENTKIT_TOL must be a non-negative number, got {raw!r}")
    return value
