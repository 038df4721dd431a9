"""
Upper bounds on trajectory lengths and the rendezvous cost bound.

The starred quantities bound the exact lengths from above and are only
used to evaluate the cost bound; routes use the exact calculus.
"""

import collections

from rest_framework import exceptions as drf_exceptions

from . import trajectories

STARRED = ('X', 'Q', 'Y', 'Z', 'A', 'B', 'K', 'Omega', 'T')

CostBound = collections.namedtuple(
    'CostBound', ['n', 'm', 'ell', 'N', 'pi', 'table'])


class StarredBounds(object):
    """
    Memoized starred recurrences for one length function.
    """

    def __init__(self, length):
        self.P = length
        self._memo = {}

    def _cached(self, name, k, compute):
        key = (name, k)
        if key not in self._memo:
            self._memo[key] = compute(k)
        return self._memo[key]

    def _running_sum(self, name, term, k):
        done = k
        while done > 0 and (name, done) not in self._memo:
            done -= 1
        total = self._memo[(name, done)] if done else 0
        for i in range(done + 1, k + 1):
            total += term(i)
            self._memo[(name, i)] = total
        return self._memo[(name, k)]

    def X(self, k):
        return self._cached('X', k, lambda k: 2 * self.P(k) + 1)

    def Q(self, k):
        return self._running_sum('Q', self.X, k)

    def Y(self, k):
        return self._cached('Y', k, lambda k: 2 * self.P(k) * self.Q(k))

    def Z(self, k):
        return self._running_sum('Z', self.Y, k)

    def A(self, k):
        return self._cached('A', k, lambda k: 2 * self.P(k) * self.Z(k))

    def B(self, k):
        return self._cached('B', k, lambda k: 2 * self.A(8 * k) * self.Y(k))

    def K(self, k):
        return self._cached('K', k, lambda k: 2 * self.B(8 * k) * self.X(k))

    def Omega(self, k):
        return self._cached(
            'Omega', k, lambda k: (2 * k - 1) * self.K(k) * self.X(k))

    def T(self, k, N):
        return N * (2 * self.A(4 * k) + 2 * self.B(2 * k) + self.K(k))

    def row(self, k, N):
        row = collections.OrderedDict([('k', k)])
        for name in STARRED[:-1]:
            row[name] = getattr(self, name)(k)
        row['T'] = self.T(k, N)
        return row


def horizon(n, m):
    """
    ``(l, N)`` for graph size ``n`` and label length ``m``.
    """
    if n < 1 or m < 1:
        raise drf_exceptions.ValidationError(
            {'n': ['graph size and label length must be positive']})
    ell = 2 * m + 2
    return ell, 2 * (n + ell) + 1


def compute_pi(n, m, length, bounds=None, with_table=False):
    """
    Sum of ``T*_k + Omega*_k`` over ``k = 1 .. N``, as an exact integer.

    Pass a shared ``StarredBounds`` to reuse work across calls.
    """
    ell, N = horizon(n, m)
    bounds = bounds or StarredBounds(length)
    pi = 0
    table = []
    for k in range(1, N + 1):
        pi += bounds.T(k, N) + bounds.Omega(k)
        if with_table:
            table.append(bounds.row(k, N))
    if with_table:
        return CostBound(n, m, ell, N, pi, table)
    return pi


def pi_for_labels(n, first, second, length, bounds=None):
    """
    The bound for two labels: ``m`` is the shorter binary length.
    """
    m = min(trajectories.label_length(first), trajectories.label_length(second))
    return compute_pi(n, m, length, bounds=bounds)
