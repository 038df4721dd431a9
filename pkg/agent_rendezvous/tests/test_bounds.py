"""
Starred recurrences and the rendezvous cost bound.
"""

from rest_framework import exceptions as drf_exceptions

from agent_rendezvous import bounds
from agent_rendezvous import tests
from agent_rendezvous import uxs


class StarredBoundsTest(tests.SimulationTestCase):
    """
    Hand-computed starred values.
    """

    def setUp(self):
        """
        Starred bounds under ``P(k) = 1``.
        """
        super(StarredBoundsTest, self).setUp()
        self.bounds = bounds.StarredBounds(self.provider.length)

    def test_small_values(self):
        """
        ``X* = 3``, ``Q*_2 = 6`` and ``Y*_2 = 12`` when ``P = 1``.
        """
        self.assertEqual(self.bounds.X(4), 3, 'Wrong X*')
        self.assertEqual(self.bounds.Q(2), 6, 'Wrong Q*_2')
        self.assertEqual(self.bounds.Y(2), 12, 'Wrong Y*_2')
        self.assertEqual(self.bounds.Z(2), 18, 'Wrong Z*_2')
        self.assertEqual(self.bounds.A(1), 12, 'Wrong A*_1')

    def test_composite_values(self):
        """
        The powered bounds follow their recurrences.
        """
        self.assertEqual(
            self.bounds.B(1), 2 * self.bounds.A(8) * self.bounds.Y(1),
            'Wrong B*_1')
        self.assertEqual(
            self.bounds.Omega(2), 3 * self.bounds.K(2) * self.bounds.X(2),
            'Wrong Omega*_2')
        self.assertEqual(
            self.bounds.T(1, 5),
            5 * (2 * self.bounds.A(4) + 2 * self.bounds.B(2) +
                 self.bounds.K(1)), 'Wrong T*_1')

    def test_row(self):
        """
        Table rows list every starred quantity in order.
        """
        row = self.bounds.row(1, 13)
        self.assertEqual(
            list(row), ['k'] + list(bounds.STARRED), 'Wrong row columns')
        self.assertEqual(row['T'], self.bounds.T(1, 13), 'Wrong T column')


class CostBoundTest(tests.SimulationTestCase):
    """
    The horizon and the summed bound.
    """

    def test_horizon(self):
        """
        ``l = 2m + 2`` and ``N = 2(n + l) + 1``.
        """
        self.assertEqual(bounds.horizon(2, 1), (4, 13), 'Wrong horizon')
        self.assertEqual(bounds.horizon(5, 3), (8, 27), 'Wrong horizon')
        with self.assertRaises(drf_exceptions.ValidationError):
            bounds.horizon(0, 1)

    def test_table_sums_to_pi(self):
        """
        The bound is the sum of ``T* + Omega*`` over the table.
        """
        bound = bounds.compute_pi(
            2, 1, self.provider.length, with_table=True)
        self.assertEqual(bound.N, 13, 'Wrong horizon')
        self.assertEqual(len(bound.table), 13, 'One row per index')
        self.assertEqual(
            bound.pi, sum(row['T'] + row['Omega'] for row in bound.table),
            'The bound is not the table sum')
        self.assertEqual(
            bound.pi, bounds.compute_pi(2, 1, self.provider.length),
            'Tables do not change the bound')

    def test_grows_with_size(self):
        """
        Larger graphs and longer labels raise the bound.
        """
        length = uxs.toy_length_function('linear')
        shared = bounds.StarredBounds(length)
        small = bounds.compute_pi(2, 1, length, bounds=shared)
        self.assertLess(
            small, bounds.compute_pi(3, 1, length, bounds=shared),
            'The bound must grow with n')
        self.assertLess(
            small, bounds.compute_pi(2, 2, length, bounds=shared),
            'The bound must grow with m')
        self.assertEqual(
            small, bounds.compute_pi(2, 1, length),
            'Sharing memoized bounds changed the value')

    def test_shorter_label_decides(self):
        """
        Two labels use the shorter binary length.
        """
        length = self.provider.length
        self.assertEqual(
            bounds.pi_for_labels(2, 12, 1, length),
            bounds.compute_pi(2, 1, length), 'Wrong label length')
        self.assertEqual(
            bounds.pi_for_labels(2, 12, 13, length),
            bounds.compute_pi(2, 4, length), 'Wrong label length')
