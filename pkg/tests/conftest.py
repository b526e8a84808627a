"""Shared randomized-input helpers and the acceptance summary hook."""

import random
import re
from math import gcd

from hypothesis import HealthCheck, settings

settings.register_profile(
    "exact",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("exact")

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion, visible in every run."""
    outcomes = {}
    for status, ok in (("passed", True), ("failed", False), ("error", False)):
        for rep in terminalreporter.stats.get(status, ()):
            m = _CRITERION.search(getattr(rep, "nodeid", "") or "")
            if m is None:
                continue
            n = int(m.group(1))
            outcomes[n] = outcomes.get(n, True) and ok
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcomes):
        word = "PASS" if outcomes[n] else "FAIL"
        terminalreporter.write_line("ACCEPTANCE %d: %s" % (n, word))


def rand_unimodular(rng: random.Random, n: int, steps: int = 14):
    """Product of elementary integer row operations; det is +-1."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        op = rng.randrange(3)
        i, j = rng.randrange(n), rng.randrange(n)
        if op == 0 and i != j:
            k = rng.randint(-3, 3)
            for c in range(n):
                m[i][c] += k * m[j][c]
        elif op == 1 and i != j:
            m[i], m[j] = m[j], m[i]
        elif op == 2:
            m[i] = [-x for x in m[i]]
    return m


def rand_even_symmetric(rng: random.Random, n: int, bound: int = 6):
    """Random symmetric integer matrix with even diagonal, entries in
    [-bound, bound]."""
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 2 * rng.randint(-(bound // 2), bound // 2)
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = rng.randint(-bound, bound)
    return m


def find_positive_ray(gram, radius: int = 14):
    """First primitive integer vector of positive square, scanning outward
    by |x| + |y|; None if the box holds none."""
    for s in range(1, 2 * radius + 1):
        for x in range(-s, s + 1):
            rest = s - abs(x)
            for y in (rest, -rest) if rest else (0,):
                if gcd(x, y) != 1:
                    continue
                val = (
                    gram[0][0] * x * x
                    + 2 * gram[0][1] * x * y
                    + gram[1][1] * y * y
                )
                if val > 0:
                    return (x, y)
    return None


def rand_sig11_gram(rng: random.Random, bound: int = 6):
    """Random even rank-2 Gram matrix of signature (1, 1) together with a
    primitive positive ray."""
    while True:
        g = rand_even_symmetric(rng, 2, bound)
        det = g[0][0] * g[1][1] - g[0][1] ** 2
        if det >= 0:
            continue
        ray = find_positive_ray(g)
        if ray is not None:
            return g, ray
