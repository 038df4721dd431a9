"""
DRF serializers describing the trace, report and table formats.
"""

import collections
import fractions
import operator

from rest_framework import exceptions
from rest_framework import serializers

from . import engine
from . import graphs
from . import routes

HEADER_KINDS = ('rendezvous', 'tunnel', 'sgl')


def flatten_error_details(data, source=''):
    """
    Recursively flatten nested error details into ``(source, detail)`` pairs.

    Based on `rest_framework.exceptions._get_error_details()`.
    """
    if isinstance(data, list):
        for idx, item in enumerate(data):
            if isinstance(item, exceptions.ErrorDetail):
                # Don't index multiple errors for the same source
                item_source = source
            else:
                item_source = '{0}/{1}'.format(source, idx)
            for recursed_source, recursed_item in flatten_error_details(
                    item, source=item_source):
                yield (recursed_source, recursed_item)
    elif isinstance(data, dict):
        for key, value in sorted(data.items(), key=operator.itemgetter(0)):
            for recursed_source, recursed_value in flatten_error_details(
                    value, source='{0}/{1}'.format(source, key)):
                yield (recursed_source, recursed_value)
    else:
        yield source, data


def format_errors(detail):
    """
    One ``source: message`` line per error, for command diagnostics.
    """
    return '\n'.join(
        '{0}: {1}'.format(source or '/', message)
        for source, message in flatten_error_details(detail))


class FractionField(serializers.Field):
    """
    An exact rational as ``"p/q"``, or ``"p"`` when integral.
    """

    default_error_messages = {
        'invalid': 'Not a fraction: {value!r}.',
    }

    def to_representation(self, value):
        return str(value)

    def to_internal_value(self, data):
        try:
            return fractions.Fraction(str(data))
        except (ValueError, ZeroDivisionError):
            self.fail('invalid', value=data)


class BigIntegerField(serializers.Field):
    """
    Integers of any size, written as decimal strings.
    """

    default_error_messages = {
        'invalid': 'Not an integer: {value!r}.',
    }

    def to_representation(self, value):
        return str(value)

    def to_internal_value(self, data):
        try:
            return int(str(data))
        except ValueError:
            self.fail('invalid', value=data)


class EdgeField(serializers.ListField):
    """
    An edge as ``[origin, origin_port, end, end_port]``.
    """

    child = serializers.IntegerField(min_value=0)

    def __init__(self, **kwargs):
        kwargs.setdefault('min_length', 4)
        kwargs.setdefault('max_length', 4)
        super(EdgeField, self).__init__(**kwargs)

    def to_representation(self, value):
        return list(value)

    def to_internal_value(self, data):
        return graphs.Edge(*super(EdgeField, self).to_internal_value(data))


class PointField(serializers.Field):
    """
    ``{"node": v}`` or ``{"edge": [...], "position": "p/q"}``.
    """

    default_error_messages = {
        'invalid': 'A point needs either a node or an edge and a position.',
    }

    def to_representation(self, value):
        if isinstance(value, graphs.NodePoint):
            return collections.OrderedDict([('node', value.node)])
        return collections.OrderedDict([
            ('edge', list(value.edge)), ('position', str(value.position))])

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            self.fail('invalid')
        if 'node' in data:
            return graphs.NodePoint(serializers.IntegerField(
                min_value=0).run_validation(data['node']))
        if 'edge' not in data or 'position' not in data:
            self.fail('invalid')
        return graphs.EdgePoint(
            EdgeField().run_validation(data['edge']),
            FractionField().run_validation(data['position']))


class LabelMapField(serializers.DictField):
    """
    A mapping keyed by agent label; JSON keys are the labels as strings.
    """

    child = serializers.IntegerField()

    def to_representation(self, value):
        return collections.OrderedDict(
            (str(label), self.child.to_representation(item))
            for label, item in value.items())

    def to_internal_value(self, data):
        value = super(LabelMapField, self).to_internal_value(data)
        try:
            return collections.OrderedDict(
                (int(label), item) for label, item in value.items())
        except ValueError:
            raise serializers.ValidationError('Labels must be integers.')


class AnnotationField(serializers.DictField):
    """
    A structural annotation of the element a move belongs to.
    """

    def to_representation(self, value):
        return collections.OrderedDict(value._asdict())

    def to_internal_value(self, data):
        value = super(AnnotationField, self).to_internal_value(data)
        try:
            return routes.StructuralAnnotation(**value)
        except TypeError:
            raise serializers.ValidationError(
                'Annotations have the fields {0}.'.format(
                    ', '.join(routes.StructuralAnnotation._fields)))


class MeetingSerializer(serializers.Serializer):
    """
    Agents found co-located by one sweep.
    """

    point = PointField(
        help_text='where the agents met, a node or an exact edge point')
    mover = serializers.IntegerField(
        help_text='label of the agent whose sweep caused the meeting')
    agents = serializers.ListField(
        child=serializers.IntegerField(),
        help_text='sorted labels of every agent at the point')
    same_direction = serializers.ListField(
        child=serializers.IntegerField(), allow_null=True,
        help_text='in-edge meetings: labels traversing the edge the '
        "mover's way")

    def create(self, validated_data):
        same = validated_data['same_direction']
        return engine.Meeting(
            validated_data['point'], validated_data['mover'],
            tuple(validated_data['agents']),
            None if same is None else tuple(same))


class EventSerializer(serializers.Serializer):
    """
    One trace line: a wake-up or a sweep, what it met and the cost totals.
    """

    event_index = serializers.IntegerField(source='index', min_value=0)
    kind = serializers.ChoiceField(choices=('wake', 'move'))
    agent = serializers.IntegerField()
    forced = serializers.BooleanField(
        help_text='liveness decisions taken by the engine, not the scheduler')
    edge = EdgeField(allow_null=True)
    from_fraction = FractionField(
        allow_null=True, help_text="from the edge's canonical origin")
    to_fraction = FractionField(allow_null=True)
    requested = FractionField(
        allow_null=True,
        help_text="the scheduler's target, from the mover's side")
    capped = serializers.BooleanField(
        help_text='the move budget completed the traversal')
    meetings = MeetingSerializer(many=True)
    transitions = serializers.ListField(child=serializers.DictField())
    cost_totals = LabelMapField(source='costs')
    annotation = AnnotationField(allow_null=True)

    def create(self, validated_data):
        meetings = MeetingSerializer(many=True).create(
            validated_data['meetings'])
        return engine.Event(
            validated_data['index'], validated_data['kind'],
            validated_data['agent'], validated_data['forced'],
            validated_data['edge'], validated_data['from_fraction'],
            validated_data['to_fraction'], tuple(meetings),
            tuple(validated_data['transitions']), validated_data['costs'],
            validated_data['annotation'], validated_data['requested'],
            validated_data['capped'])


class AgentSerializer(serializers.Serializer):
    """
    Label, start node and initial value of one agent.
    """

    label = serializers.IntegerField(min_value=1)
    start = serializers.IntegerField(min_value=0)
    value = serializers.JSONField()


class TraceHeaderSerializer(serializers.Serializer):
    """
    The run configuration heading every trace and report.

    Run parameters beyond the common fields are carried through unchanged.
    """

    kind = serializers.ChoiceField(choices=HEADER_KINDS)
    graph = serializers.CharField(trim_whitespace=False)
    graph_hash = serializers.CharField()
    provider = serializers.DictField()
    scheduler = serializers.CharField()
    seed = serializers.IntegerField(allow_null=True)
    engine = serializers.DictField()
    agents = AgentSerializer(many=True)

    def to_representation(self, instance):
        return collections.OrderedDict(instance)

    def to_internal_value(self, data):
        validated = super(TraceHeaderSerializer, self).to_internal_value(data)
        return collections.OrderedDict(
            (key, validated.get(key, value)) for key, value in data.items())

    def validate_graph(self, text):
        try:
            graphs.parse(text)
        except exceptions.ParseError as exc:
            raise serializers.ValidationError(exc.detail)
        return text


def trace_lines(trace):
    """
    The JSON lines of a trace: header, events, then the termination footer.
    """
    yield collections.OrderedDict([
        ('header', TraceHeaderSerializer(trace.header).data)])
    for event in trace.events:
        yield EventSerializer(event).data
    yield collections.OrderedDict([
        ('terminated', trace.terminated), ('events', len(trace))])


def load_trace(lines):
    """
    A ``SimTrace`` from parsed trace lines, validating every line.
    """
    lines = list(lines)
    if len(lines) < 2 or 'header' not in lines[0] or (
            'terminated' not in lines[-1]):
        raise serializers.ValidationError(
            {'trace': ['a trace needs a header line and a footer line']})
    header = TraceHeaderSerializer(data=lines[0]['header'])
    header.is_valid(raise_exception=True)
    events = []
    for index, line in enumerate(lines[1:-1], 1):
        serializer = EventSerializer(data=line)
        if not serializer.is_valid():
            raise serializers.ValidationError({str(index): serializer.errors})
        events.append(serializer.save())
    footer = lines[-1]
    if footer.get('events') != len(events):
        raise serializers.ValidationError(
            {'events': ['the footer counts {0} events, found {1}'.format(
                footer.get('events'), len(events))]})
    return engine.SimTrace(
        header.validated_data, events, bool(footer['terminated']))


class ProblemOutputsSerializer(serializers.Serializer):
    """
    Team size, leader, new name and gossip output by one agent.
    """

    team_size = serializers.IntegerField(min_value=2)
    leader = serializers.IntegerField(min_value=1)
    new_name = serializers.IntegerField(min_value=1)
    gossip = serializers.ListField(child=serializers.JSONField())


class SGLReportSerializer(serializers.Serializer):
    """
    Outputs, correctness and costs of one SGL run.
    """

    header = TraceHeaderSerializer(source='trace.header')
    terminated = serializers.BooleanField(source='trace.terminated')
    correct = serializers.BooleanField()
    outputs = serializers.SerializerMethodField()
    total_cost = serializers.IntegerField()
    costs = LabelMapField()
    phase_costs = LabelMapField(child=serializers.DictField(
        child=serializers.IntegerField()))
    elided = LabelMapField(
        child=BigIntegerField(),
        help_text='Phase 2 traversals skipped once every agent was awake '
        'and no traveller was left')
    witness = serializers.DictField(child=serializers.IntegerField())
    cost_bound = BigIntegerField(
        help_text='per-agent bound on the cost of every agent')

    def get_outputs(self, instance):
        return collections.OrderedDict(
            (str(label),
             None if outputs is None
             else ProblemOutputsSerializer(outputs).data)
            for label, outputs in instance.outputs.items())


class RendezvousRowSerializer(serializers.Serializer):
    """
    One row of the rendezvous cost table.
    """

    graph_id = serializers.CharField()
    n = serializers.IntegerField()
    L1 = serializers.IntegerField()
    L2 = serializers.IntegerField()
    scheduler = serializers.CharField()
    seed = serializers.IntegerField(allow_null=True)
    met = serializers.BooleanField()
    total_cost = serializers.IntegerField()
    pi_bound_exceeded = serializers.BooleanField()


class SGLRowSerializer(serializers.Serializer):
    """
    One row of the SGL sweep table.
    """

    graph_id = serializers.CharField()
    n = serializers.IntegerField()
    k = serializers.IntegerField()
    labels = serializers.CharField()
    scheduler = serializers.CharField()
    seed = serializers.IntegerField(allow_null=True)
    terminated = serializers.BooleanField()
    correct = serializers.BooleanField()
    total_cost = serializers.IntegerField()
    elided = BigIntegerField()


class ProbeRowSerializer(serializers.Serializer):
    """
    One row of the probe table.
    """

    graph_id = serializers.CharField()
    claim = serializers.CharField()
    scheduler = serializers.CharField()
    seed = serializers.IntegerField(allow_null=True)
    status = serializers.CharField()
    checkpoint = serializers.IntegerField(allow_null=True)
    detail = serializers.JSONField()


class BoundRowSerializer(serializers.Serializer):
    """
    The starred quantities of one index ``k``.
    """

    k = serializers.IntegerField()
    X = BigIntegerField()
    Q = BigIntegerField()
    Y = BigIntegerField()
    Z = BigIntegerField()
    A = BigIntegerField()
    B = BigIntegerField()
    K = BigIntegerField()
    Omega = BigIntegerField()
    T = BigIntegerField()
