import itertools

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def brute_closure(gens, degree):
    """All products of the generators, by plain tuple BFS."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(degree))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def brute_classes(elements):
    """Conjugacy classes of a set of permutation tuples."""
    n = len(next(iter(elements)))
    elements = sorted(elements)

    def mul(p, q):  # apply p then q
        return tuple(q[p[i]] for i in range(n))

    def inv(p):
        out = [0] * n
        for i, x in enumerate(p):
            out[x] = i
        return tuple(out)

    left = set(elements)
    classes = []
    for g in elements:
        if g not in left:
            continue
        cls = {mul(mul(inv(x), g), x) for x in elements}
        left -= cls
        classes.append(cls)
    return classes


def all_subsets_generated(elements, max_gens=2):
    """Every subgroup generated by at most max_gens elements, as frozensets."""
    n = len(next(iter(elements)))
    subs = set()
    for k in range(max_gens + 1):
        for gens in itertools.combinations(sorted(elements), k):
            subs.add(frozenset(brute_closure(gens, n)))
    return subs
