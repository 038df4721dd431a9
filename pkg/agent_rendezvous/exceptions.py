"""
Domain errors raised by the simulator, in the DRF exception idiom.
"""

from rest_framework import exceptions


class SimulationError(exceptions.APIException):
    """
    Base class for errors signalled by the simulation layers.
    """
    default_detail = 'Simulation error.'
    default_code = 'simulation_error'


class InvalidPort(SimulationError):
    """
    A route program asked for a port the current node does not have.
    """
    default_detail = 'Exit port is not a port of the current node.'
    default_code = 'invalid_port'


class BudgetExhausted(SimulationError):
    default_detail = 'Search budget exhausted before a sequence was found.'
    default_code = 'budget_exhausted'


class UndefinedLength(SimulationError):
    default_detail = 'The length function is undefined at a needed index.'
    default_code = 'undefined_length'


class HaltedAgent(SimulationError):
    """
    The scheduler tried to move an agent that has halted.
    """
    default_detail = 'Halted agents cannot move.'
    default_code = 'halted_agent'


class HypothesisExhausted(SimulationError):
    default_detail = 'No map hypothesis is consistent with the observations.'
    default_code = 'hypothesis_exhausted'


class ProtocolViolation(SimulationError):
    default_detail = 'Protocol invariant violated.'
    default_code = 'protocol_violation'


class GraphParseError(exceptions.ParseError):
    """
    Malformed graph, corpus or sequence text, with the offending position.
    """
    default_code = 'graph_parse_error'

    def __init__(self, detail=None, line=None, column=None, code=None):
        self.line = line
        self.column = column
        if line is not None:
            detail = 'line {0}, column {1}: {2}'.format(
                line, column or 1, detail or self.default_detail)
        super(GraphParseError, self).__init__(detail=detail, code=code)
