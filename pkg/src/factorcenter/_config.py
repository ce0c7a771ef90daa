"""Runtime knobs read from the environment."""

import os

DEFAULT_MAX_GROUP_ORDER = 10080
DEFAULT_MAX_SEARCH_DEGREE = 12
DEFAULT_MAX_SUBGROUP_CLASSES = 5000
DEFAULT_MAX_SUBGROUPS = 250000


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def max_group_order() -> int:
    return _env_int("FACTORCENTER_MAX_GROUP_ORDER", DEFAULT_MAX_GROUP_ORDER)


def max_search_degree() -> int:
    return _env_int("FACTORCENTER_MAX_SEARCH_DEGREE", DEFAULT_MAX_SEARCH_DEGREE)


def max_subgroup_classes() -> int:
    return _env_int("FACTORCENTER_MAX_SUBGROUP_CLASSES", DEFAULT_MAX_SUBGROUP_CLASSES)


def max_subgroups() -> int:
    return _env_int("FACTORCENTER_MAX_SUBGROUPS", DEFAULT_MAX_SUBGROUPS)


def numba_disabled() -> bool:
    """True when FACTORCENTER_DISABLE_NUMBA asks for the pure numpy kernels."""
    raw = os.environ.get("FACTORCENTER_DISABLE_NUMBA", "")
    return raw.strip().lower() not in ("", "0", "false", "no")
