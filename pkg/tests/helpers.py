import math


def ulps(a: float, b: float) -> float:
    """Distancia entre a y b en ulps del mayor."""
    if a == b:
        return 0.0
    return abs(a - b) / math.ulp(max(abs(a), abs(b)))
