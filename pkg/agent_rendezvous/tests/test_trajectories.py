"""
Modified labels and the trajectory length calculus.
"""

from rest_framework import exceptions as drf_exceptions

from agent_rendezvous import exceptions
from agent_rendezvous import tests
from agent_rendezvous import trajectories
from agent_rendezvous import uxs


class ModifiedLabelTest(tests.SimulationTestCase):
    """
    Doubled label bits with the ``01`` suffix.
    """

    def test_bits(self):
        """
        Every bit is doubled and ``01`` appended.
        """
        self.assertEqual(
            trajectories.ModifiedLabel(5).bits, '11001101', 'Wrong bits for 5')
        self.assertEqual(
            str(trajectories.modified_label(1)), '1101', 'Wrong bits for 1')
        self.assertEqual(
            len(trajectories.ModifiedLabel(12)), 10, 'Wrong length for 12')

    def test_one_based_bits(self):
        """
        Bits are read from the left starting at 1.
        """
        label = trajectories.ModifiedLabel(5)
        self.assertEqual(
            [label.bit(index) for index in range(1, 9)],
            [1, 1, 0, 0, 1, 1, 0, 1], 'Wrong bit access')

    def test_prefix_free(self):
        """
        No modified label is a prefix of another.
        """
        codes = [trajectories.ModifiedLabel(label).bits for label in range(1, 40)]
        for first in codes:
            for second in codes:
                if first != second:
                    self.assertFalse(
                        second.startswith(first),
                        '{0} prefixes {1}'.format(first, second))

    def test_positive_labels(self):
        """
        Labels start at 1.
        """
        with self.assertRaises(drf_exceptions.ValidationError):
            trajectories.ModifiedLabel(0)

    def test_label_length(self):
        """
        The binary length of the original label.
        """
        self.assertEqual(trajectories.label_length(1), 1, 'Wrong length of 1')
        self.assertEqual(trajectories.label_length(12), 4, 'Wrong length of 12')


class LengthCalculusTest(tests.SimulationTestCase):
    """
    Exact node counts of the named forms.
    """

    def setUp(self):
        """
        Calculi for the linear and constant length functions.
        """
        super(LengthCalculusTest, self).setUp()
        self.linear = trajectories.LengthCalculus(
            uxs.toy_length_function('linear'))
        self.constant = trajectories.LengthCalculus(self.provider.length)

    def test_small_forms(self):
        """
        Hand-computed lengths under ``P(k) = k``.
        """
        self.assertEqual(self.linear.X(2), 5, 'Wrong X(2)')
        self.assertEqual(self.linear.Q(2), 7, 'Wrong Q(2)')
        self.assertEqual(self.linear.Y(1), 11, 'Wrong Y(1)')
        self.assertEqual(self.linear.Y(2), 41, 'Wrong Y(2)')
        self.assertEqual(self.linear.Z(2), 51, 'Wrong Z(2)')
        self.assertEqual(self.linear.moves('X', 2), 4, 'Wrong X(2) moves')

    def test_constant_forms(self):
        """
        Hand-computed lengths under ``P(k) = 1``.
        """
        self.assertEqual(self.constant.X(5), 3, 'Wrong X(5)')
        self.assertEqual(self.constant.Q(2), 5, 'Wrong Q(2)')
        self.assertEqual(self.constant.Y(2), 19, 'Wrong Y(2)')
        self.assertEqual(self.constant.A(1), 43, 'Wrong A(1)')

    def test_expressions_agree_with_closed_forms(self):
        """
        Measuring the expression trees gives the named lengths.
        """
        for form in ('X', 'Q', 'Y', 'Z', 'A'):
            for k in (1, 2, 3):
                self.assertEqual(
                    self.linear.length(
                        trajectories.named(form, k, self.linear)),
                    self.linear.named(form, k),
                    'Wrong length of {0}({1})'.format(form, k))

    def test_powers(self):
        """
        ``c`` repetitions of an ``l``-node trajectory share the junctions.
        """
        self.assertEqual(self.linear.power(5, 3), 13, 'Wrong power length')
        self.assertEqual(
            self.constant.B(1),
            self.constant.power(
                self.constant.Y(1), 2 * self.constant.A(4)),
            'Wrong B(1)')

    def test_large_index(self):
        """
        Large sums fill in iteratively without deep recursion.
        """
        self.assertEqual(
            self.constant.Q(5000), 2 * 5000 + 1, 'Wrong Q(5000)')

    def test_unbounded_repeat(self):
        """
        Endless repetition has no length.
        """
        with self.assertRaises(exceptions.SimulationError):
            self.linear.length(
                trajectories.Repeat(trajectories.R(1), None))

    def test_table(self):
        """
        Debug tables render lengths as decimal strings.
        """
        table = self.linear.table(2, forms=('X', 'Q'))
        self.assertEqual(
            table, [{'k': 1, 'X': '3', 'Q': '3'}, {'k': 2, 'X': '5', 'Q': '7'}],
            'Wrong length table')


class ExpressionTest(tests.SimulationTestCase):
    """
    Trajectory expression trees.
    """

    def test_mirror_is_its_own_reverse(self):
        """
        Palindromes reverse to themselves.
        """
        form = trajectories.X(3)
        self.assertIs(form.reversed(), form, 'X(3) should reverse to itself')

    def test_concat_reverse(self):
        """
        Concatenations reverse part by part in the opposite order.
        """
        expression = trajectories.Q(2)
        self.assertEqual(
            expression.reversed().body.parts,
            (trajectories.X(2), trajectories.X(1)), 'Wrong reversed parts')

    def test_open_walks_need_a_mirror(self):
        """
        A bare walk cannot be reversed or raised to a power.
        """
        with self.assertRaises(exceptions.SimulationError):
            trajectories.R(2).reversed()
        with self.assertRaises(drf_exceptions.ValidationError):
            trajectories.Power(trajectories.R(2), 3)

    def test_to_dict(self):
        """
        Debug dumps nest the children.
        """
        self.assertEqual(
            trajectories.X(1).to_dict(),
            {'form': 'X', 'k': 1, 'children': [
                {'form': 'mirror', 'children': [{'form': 'R', 'k': 1}]}]},
            'Wrong expression dump')
