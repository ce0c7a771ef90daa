"""Inner loops with a numba implementation and a pure numpy fallback.

The numba versions are used when numba imports cleanly and the
environment variable FACTORCENTER_DISABLE_NUMBA is unset (or "0").
Both variants are always importable so tests can compare them.
"""

import itertools

import numpy as np

from ._config import numba_disabled

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# subgroup closure


def closure_numpy(mult: np.ndarray, start: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Mask of the smallest set containing ``start`` closed under right
    multiplication by ``gens``. For a finite group and start containing the
    identity this is the subgroup generated by ``gens`` and ``start``."""
    mask = np.zeros(mult.shape[0], dtype=bool)
    frontier = np.unique(np.asarray(start, dtype=np.int64))
    mask[frontier] = True
    gens = np.asarray(gens, dtype=np.int64)
    if gens.size == 0:
        return mask
    while frontier.size:
        nxt = mult[frontier[:, None], gens[None, :]].ravel()
        nxt = np.unique(nxt[~mask[nxt]])
        mask[nxt] = True
        frontier = nxt
    return mask


def _closure_loop(mult, start, gens):
    n = mult.shape[0]
    mask = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    tail = 0
    for s in start:
        if not mask[s]:
            mask[s] = True
            queue[tail] = s
            tail += 1
    head = 0
    while head < tail:
        x = queue[head]
        head += 1
        for g in gens:
            y = mult[x, g]
            if not mask[y]:
                mask[y] = True
                queue[tail] = y
                tail += 1
    return mask


# ---------------------------------------------------------------------------
# conjugates of a subset


def conjugates_numpy(mult: np.ndarray, inv: np.ndarray, members: np.ndarray) -> np.ndarray:
    """Row x holds x^-1 * m * x for every m in ``members``."""
    members = np.asarray(members, dtype=np.int64)
    xs = np.arange(mult.shape[0])
    left = mult[inv[:, None], members[None, :]]
    return mult[left, xs[:, None]].astype(np.int64)


def _conjugates_loop(mult, inv, members):
    n = mult.shape[0]
    m = members.shape[0]
    out = np.empty((n, m), dtype=np.int64)
    for x in range(n):
        xi = inv[x]
        for t in range(m):
            out[x, t] = mult[mult[xi, members[t]], x]
    return out


# ---------------------------------------------------------------------------
# bounded lattice scan


def box_scan_numpy(r: int, bound: int, t: int, s: int) -> np.ndarray:
    """All (a, b_1..b_r) with entries in [-bound, bound], 3a - sum(b) = t and
    a^2 - sum(b^2) = s. Rows come out in lexicographic order."""
    vals = np.arange(-bound, bound + 1, dtype=np.int64)
    n_b = r
    n_suffix = min(n_b, 4)
    n_prefix_b = n_b - n_suffix
    if n_suffix:
        grid = np.array(list(itertools.product(vals, repeat=n_suffix)), dtype=np.int64)
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    g_sum = grid.sum(axis=1)
    g_sq = (grid * grid).sum(axis=1)
    found = []
    for prefix in itertools.product(vals, repeat=1 + n_prefix_b):
        a = prefix[0]
        pb = prefix[1:]
        need_sum = 3 * a - t - sum(pb)
        need_sq = a * a - s - sum(x * x for x in pb)
        hit = (g_sum == need_sum) & (g_sq == need_sq)
        if hit.any():
            rows = grid[hit]
            head = np.broadcast_to(np.array(prefix, dtype=np.int64), (rows.shape[0], len(prefix)))
            found.append(np.hstack([head, rows]))
    if not found:
        return np.zeros((0, r + 1), dtype=np.int64)
    return np.vstack(found)


def _box_scan_loop(r, bound, t, s):
    # odometer over (a, b_1..b_{r-1}); the sum equation then fixes b_r
    width = 2 * bound + 1
    n = r + 1
    free = n - 1 if r > 0 else 1
    total = width ** free
    cur = np.full(n, -bound, dtype=np.int64)
    out = np.empty((1024, n), dtype=np.int64)
    count = 0
    for _ in range(total):
        a = cur[0]
        sb = 0
        sq = 0
        for i in range(1, free):
            sb += cur[i]
            sq += cur[i] * cur[i]
        ok = False
        if r == 0:
            ok = 3 * a == t and a * a == s
        else:
            last = 3 * a - t - sb
            if -bound <= last <= bound and a * a - sq - last * last == s:
                cur[n - 1] = last
                ok = True
        if ok:
            if count == out.shape[0]:
                bigger = np.empty((2 * count, n), dtype=np.int64)
                bigger[:count] = out[:count]
                out = bigger
            out[count] = cur
            count += 1
        k = free - 1
        while k >= 0:
            cur[k] += 1
            if cur[k] <= bound:
                break
            cur[k] = -bound
            k -= 1
    return out[:count].copy()


# ---------------------------------------------------------------------------
# dispatch

if HAVE_NUMBA:
    closure_numba = numba.njit(cache=True)(_closure_loop)
    conjugates_numba = numba.njit(cache=True)(_conjugates_loop)
    box_scan_numba = numba.njit(cache=True)(_box_scan_loop)
else:  # pragma: no cover
    closure_numba = conjugates_numba = box_scan_numba = None


def backend() -> str:
    """Name of the active kernel backend: "numba" or "numpy"."""
    if HAVE_NUMBA and not numba_disabled():
        return "numba"
    return "numpy"


def closure(mult, start, gens):
    start = np.asarray(start, dtype=np.int64)
    gens = np.asarray(gens, dtype=np.int64)
    if backend() == "numba":
        return closure_numba(mult, start, gens)
    return closure_numpy(mult, start, gens)


def conjugates(mult, inv, members):
    members = np.asarray(members, dtype=np.int64)
    if backend() == "numba":
        return conjugates_numba(mult, inv, members)
    return conjugates_numpy(mult, inv, members)


def box_scan(r: int, bound: int, t: int, s: int) -> np.ndarray:
    if backend() == "numba":
        return box_scan_numba(int(r), int(bound), int(t), int(s))
    return box_scan_numpy(r, bound, t, s)
