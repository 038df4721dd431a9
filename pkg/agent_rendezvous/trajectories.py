"""
Trajectory calculus: modified labels, trajectory expressions and their
exact node counts.

Lengths count nodes with multiplicity, so a trajectory of ``t`` moves has
length ``t + 1`` and concatenation shares the junction node.
"""

from rest_framework import exceptions as drf_exceptions

from . import exceptions


class ModifiedLabel(object):
    """
    Label bits doubled with a ``01`` suffix, so no label's code prefixes
    another's.
    """

    def __init__(self, original):
        if original < 1:
            raise drf_exceptions.ValidationError(
                {'label': ['labels are positive integers']})
        self.original = original
        self.bits = ''.join(bit * 2 for bit in bin(original)[2:]) + '01'

    def __len__(self):
        return len(self.bits)

    def bit(self, index):
        """
        One-based bit access, as in the algorithm's loop.
        """
        return int(self.bits[index - 1])

    def __str__(self):
        return self.bits

    def __repr__(self):
        return '<ModifiedLabel {0} -> {1}>'.format(self.original, self.bits)


def modified_label(label):
    return ModifiedLabel(label)


def label_length(label):
    """
    Length of the binary representation, the ``m`` of the cost bound.
    """
    return int(label).bit_length()


class Trajectory(object):
    """
    Base trajectory expression; ``closed`` expressions end where they start.
    """

    closed = True
    form = None

    def children(self):
        return ()

    def reversed(self):
        """
        The expression whose execution retraces this one backwards.
        """
        raise exceptions.SimulationError(
            'Reversing {0!r} needs the recorded walk; wrap it in a '
            'Mirror.'.format(self))

    def to_dict(self):
        data = {'form': self.form}
        data.update(self._parameters())
        children = [child.to_dict() for child in self.children()]
        if children:
            data['children'] = children
        return data

    def _parameters(self):
        return {}

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()

    def __repr__(self):
        return '{0}({1})'.format(
            type(self).__name__, ', '.join(repr(part) for part in self._key()))


class R(Trajectory):
    """
    The exploration walk of size ``k``.
    """

    closed = False
    form = 'R'

    def __init__(self, k):
        self.k = k

    def _key(self):
        return (self.k,)

    def _parameters(self):
        return {'k': self.k}


class Interleave(Trajectory):
    """
    Walk ``R(k)`` and run the closed ``detour`` at every node of it.
    """

    closed = False
    form = 'interleave'

    def __init__(self, k, detour):
        self.k = k
        self.detour = detour

    def children(self):
        return (self.detour,)

    def _key(self):
        return (self.k, self.detour)

    def _parameters(self):
        return {'k': self.k}


class Mirror(Trajectory):
    """
    ``T`` followed by its reverse; a palindrome, hence its own reverse.
    """

    form = 'mirror'

    def __init__(self, child):
        self.child = child

    def children(self):
        return (self.child,)

    def reversed(self):
        return self

    def _key(self):
        return (self.child,)


class Concat(Trajectory):
    form = 'concat'

    def __init__(self, *parts):
        self.parts = tuple(parts)
        self.closed = all(part.closed for part in self.parts)

    def children(self):
        return self.parts

    def reversed(self):
        return Concat(*[part.reversed() for part in reversed(self.parts)])

    def _key(self):
        return self.parts


class Power(Trajectory):
    """
    A closed trajectory repeated ``count`` times; ``None`` repeats forever.
    """

    form = 'power'

    def __init__(self, child, count):
        if not child.closed:
            raise drf_exceptions.ValidationError(
                {'child': ['only closed trajectories can be raised to a power']})
        self.child = child
        self.count = count

    def children(self):
        return (self.child,)

    def reversed(self):
        return Power(self.child.reversed(), self.count)

    def _key(self):
        return (self.child, self.count)

    def _parameters(self):
        return {'count': None if self.count is None else str(self.count)}


class Repeat(Trajectory):
    """
    Restart a possibly open trajectory from wherever the last run ended.
    """

    closed = False
    form = 'repeat'

    def __init__(self, child, count):
        self.child = child
        self.count = count

    def children(self):
        return (self.child,)

    def _key(self):
        return (self.child, self.count)

    def _parameters(self):
        return {'count': str(self.count)}


class Reverse(Trajectory):
    form = 'reverse'

    def __init__(self, child):
        self.child = child
        self.closed = child.closed

    def children(self):
        return (self.child,)

    def reversed(self):
        return self.child

    def resolve(self):
        return self.child.reversed()

    def _key(self):
        return (self.child,)


class Named(Trajectory):
    """
    One of the named forms, kept for annotations and debug dumps.
    """

    def __init__(self, form, k, body):
        self.form = form
        self.k = k
        self.body = body
        self.closed = body.closed

    def children(self):
        return (self.body,)

    def reversed(self):
        body = self.body.reversed()
        if body == self.body:
            return self
        return Named(self.form, self.k, body)

    def _key(self):
        return (self.form, self.k, self.body)

    def _parameters(self):
        return {'k': self.k}

    def __repr__(self):
        return '{0}({1})'.format(self.form, self.k)


NAMED_FORMS = ('X', 'Q', 'Y', 'Z', 'A', 'B', 'K', 'Omega')


class LengthCalculus(object):
    """
    Exact node counts of the named forms for one length function.

    Sums over ``1 .. k`` are filled in bottom-up, so large indices never
    recurse deeply.
    """

    def __init__(self, length):
        self.P = length
        self._memo = {}

    def _cached(self, name, k, compute):
        key = (name, k)
        if key not in self._memo:
            self._memo[key] = compute(k)
        return self._memo[key]

    def _prefix_sum(self, name, term, k):
        """
        ``sum(term(i) for i in 1..k) - (k - 1)``, memoized for every ``i``.
        """
        done = k
        while done > 0 and (name, done) not in self._memo:
            done -= 1
        total = self._memo[(name, done)] if done else None
        for i in range(done + 1, k + 1):
            total = term(i) if total is None else total + term(i) - 1
            self._memo[(name, i)] = total
        return self._memo[(name, k)]

    def power(self, length, count):
        return count * (length - 1) + 1

    def R(self, k):
        return self.P(k) + 1

    def X(self, k):
        return self._cached('X', k, lambda k: 2 * self.P(k) + 1)

    def Q(self, k):
        return self._prefix_sum('Q', self.X, k)

    def Y_prime(self, k):
        return self._cached('Y_prime', k, lambda k: (self.P(k) + 1) * self.Q(k))

    def Y(self, k):
        return self._cached('Y', k, lambda k: 2 * self.Y_prime(k) - 1)

    def Z(self, k):
        return self._prefix_sum('Z', self.Y, k)

    def A_prime(self, k):
        return self._cached('A_prime', k, lambda k: (self.P(k) + 1) * self.Z(k))

    def A(self, k):
        return self._cached('A', k, lambda k: 2 * self.A_prime(k) - 1)

    def B_exponent(self, k):
        return 2 * self.A(4 * k)

    def B(self, k):
        return self._cached(
            'B', k, lambda k: self.power(self.Y(k), self.B_exponent(k)))

    def K_exponent(self, k):
        return 2 * (self.B(4 * k) + self.A(8 * k))

    def K(self, k):
        return self._cached(
            'K', k, lambda k: self.power(self.X(k), self.K_exponent(k)))

    def Omega_exponent(self, k):
        return (2 * k - 1) * self.K(k)

    def Omega(self, k):
        return self._cached(
            'Omega', k, lambda k: self.power(self.X(k), self.Omega_exponent(k)))

    def named(self, form, k):
        return getattr(self, form)(k)

    def moves(self, form, k):
        return self.named(form, k) - 1

    def length(self, expression):
        """
        Node count of an arbitrary expression tree.
        """
        if isinstance(expression, Named):
            return self.length(expression.body)
        if isinstance(expression, R):
            return self.R(expression.k)
        if isinstance(expression, Mirror):
            return 2 * self.length(expression.child) - 1
        if isinstance(expression, Interleave):
            return (self.P(expression.k) + 1) * self.length(expression.detour)
        if isinstance(expression, Concat):
            return sum(
                self.length(part) for part in expression.parts
            ) - (len(expression.parts) - 1)
        if isinstance(expression, (Power, Repeat)):
            if expression.count is None:
                raise exceptions.SimulationError(
                    'Unbounded repetitions have no length.')
            return self.power(self.length(expression.child), expression.count)
        if isinstance(expression, Reverse):
            return self.length(expression.child)
        raise TypeError('Not a trajectory: {0!r}'.format(expression))

    def table(self, max_k, forms=NAMED_FORMS):
        """
        Length table for the debug dump, decimal strings for big integers.
        """
        return [
            dict([('k', k)] + [(form, str(self.named(form, k))) for form in forms])
            for k in range(1, max_k + 1)]


def exact_length(expression, length):
    return LengthCalculus(length).length(expression)


def X(k):
    return Named('X', k, Mirror(R(k)))


def Q(k):
    return Named('Q', k, Concat(*[X(i) for i in range(1, k + 1)]))


def Y(k):
    return Named('Y', k, Mirror(Interleave(k, Q(k))))


def Z(k):
    return Named('Z', k, Concat(*[Y(i) for i in range(1, k + 1)]))


def A(k):
    return Named('A', k, Mirror(Interleave(k, Z(k))))


def B(k, calculus):
    return Named('B', k, Power(Y(k), calculus.B_exponent(k)))


def K(k, calculus):
    return Named('K', k, Power(X(k), calculus.K_exponent(k)))


def Omega(k, calculus):
    return Named('Omega', k, Power(X(k), calculus.Omega_exponent(k)))


def named(form, k, calculus):
    """
    Build a named form; the powered forms need the calculus for exponents.
    """
    builders = {'X': X, 'Q': Q, 'Y': Y, 'Z': Z, 'A': A}
    if form in builders:
        return builders[form](k)
    return {'B': B, 'K': K, 'Omega': Omega}[form](k, calculus)
