"""Open knot diagrams: crossings with segment roles, turnbacks, regions.

A crossing is described by its sign and the four segments in the roles of
the labeled picture::

    2 ---\   /--> 2'
          \ /
           X          strand 1 runs s1 -> s1p, strand 2 runs s2 -> s2p
          / \
    1 ---/   \--> 1'

Both strands run left to right, so the counterclockwise order of the four
ends around every crossing is (s2p, s1, s2, s1p). A document may give a
different order per crossing in its ``rotation``. Regions are the faces of
the closed diagram obtained by joining boundary_out to boundary_in, traced
with those orders.
"""
import enum
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from holoknot.core.memento import Memento
from holoknot.diagram.diagram_error import (DiagramError, IncidenceError,
                                            PlanarityError, NotAKnotError)

logger = logging.getLogger(__name__)

SegmentId = str


class Role(enum.Enum):
    S1 = 's1'
    S2 = 's2'
    S1P = 's1p'
    S2P = 's2p'

    @property
    def incoming(self) -> bool:
        return self in (Role.S1, Role.S2)

    @property
    def partner(self) -> 'Role':
        """The other end of the same strand."""
        return _PARTNER[self]


_PARTNER = {Role.S1: Role.S1P, Role.S1P: Role.S1, Role.S2: Role.S2P, Role.S2P: Role.S2}

#: Counterclockwise order of the crossing ends in the labeled picture.
ROTATION = (Role.S2P, Role.S1, Role.S2, Role.S1P)


class TurnbackKind(enum.Enum):
    CUP_POS = 'cup_pos'
    CUP_NEG = 'cup_neg'
    CAP_POS = 'cap_pos'
    CAP_NEG = 'cap_neg'

    @property
    def sigma(self) -> int:
        return _SIGMA[self]


_SIGMA = {TurnbackKind.CUP_POS: 0, TurnbackKind.CUP_NEG: 0,
          TurnbackKind.CAP_POS: 1, TurnbackKind.CAP_NEG: -1}


@dataclass(frozen=True)
class CrossingSite:
    id: str
    sign: int
    s1: SegmentId
    s2: SegmentId
    s1p: SegmentId
    s2p: SegmentId
    weight: int = 1

    def segment(self, role: Role) -> SegmentId:
        return getattr(self, role.value)

    def roles(self):
        return [(role, self.segment(role)) for role in Role]

    @property
    def over_roles(self) -> Tuple[Role, Role]:
        """Ends of the over strand: strand 1 for positive crossings."""
        return (Role.S1, Role.S1P) if self.sign > 0 else (Role.S2, Role.S2P)

    @property
    def under_roles(self) -> Tuple[Role, Role]:
        return (Role.S2, Role.S2P) if self.sign > 0 else (Role.S1, Role.S1P)


@dataclass(frozen=True)
class Turnback:
    """A turnback on ``segment`` passed on the way into ``crossing`` at ``role``."""
    kind: TurnbackKind
    segment: SegmentId
    crossing: str
    role: Role

    @property
    def sigma(self) -> int:
        return self.kind.sigma

    def shift(self, N: Optional[int] = None) -> float:
        """Quantum shift sigma (1 - 1/N), or the classical shift sigma when N is None."""
        if N is None:
            return float(self.sigma)
        return self.sigma * (1.0 - 1.0 / N)


@dataclass(frozen=True)
class Region:
    id: str
    darts: Tuple[Tuple[str, Role], ...]
    above_of: Tuple[SegmentId, ...] = field(default=())
    below_of: Tuple[SegmentId, ...] = field(default=())


@dataclass(frozen=True)
class Visit:
    crossing: str
    role_in: Role
    role_out: Role
    segment_in: SegmentId
    segment_out: SegmentId
    over: bool


class OpenDiagram(Memento):
    """A validated open diagram. Instances are immutable after construction."""

    def __init__(self, name, crossings, turnbacks, boundary_in, boundary_out,
                 internal_segments, rotation):
        self.name = name
        self.crossings = tuple(crossings)
        self.turnbacks = tuple(turnbacks)
        self.boundary_in = boundary_in
        self.boundary_out = boundary_out
        self.internal_segments = tuple(internal_segments)
        self.rotation = {key: tuple(value) for key, value in rotation.items()}

        self._by_id = {crossing.id: crossing for crossing in self.crossings}
        self._head = {}
        self._tail = {}
        for crossing in self.crossings:
            for role, segment in crossing.roles():
                (self._head if role.incoming else self._tail)[segment] = (crossing.id, role)

        self._regions = None
        self._above = {}
        self._below = {}

    @property
    def cr(self) -> int:
        return len(self.crossings)

    @property
    def E(self) -> Tuple[SegmentId, ...]:
        return self.internal_segments

    def index(self, segment: SegmentId) -> int:
        return self.internal_segments.index(segment)

    def crossing(self, crossing_id: str) -> CrossingSite:
        return self._by_id[crossing_id]

    def is_boundary(self, segment: SegmentId) -> bool:
        return segment in (self.boundary_in, self.boundary_out)

    def head(self, segment: SegmentId) -> Tuple[str, Role]:
        """Crossing end where the segment runs into a crossing."""
        if segment == self.boundary_out:
            return self._head[self.boundary_in]
        return self._head[segment]

    def tail(self, segment: SegmentId) -> Tuple[str, Role]:
        """Crossing end where the segment leaves a crossing."""
        if segment == self.boundary_in:
            return self._tail[self.boundary_out]
        return self._tail[segment]

    def occurrence_sigma(self, crossing_id: str, role: Role) -> int:
        return sum(turnback.sigma for turnback in self.turnbacks
                   if turnback.crossing == crossing_id and turnback.role == role)

    def occurrence_shift(self, crossing_id: str, role: Role, N: Optional[int] = None) -> float:
        """Total turnback shift of the variable at one crossing end."""
        return sum(turnback.shift(N) for turnback in self.turnbacks
                   if turnback.crossing == crossing_id and turnback.role == role)

    def traversal(self) -> List[Visit]:
        """Crossing visits along the knot starting from boundary_in."""
        visits = []
        segment = self.boundary_in
        while segment != self.boundary_out:
            crossing_id, role = self._head[segment]
            crossing = self._by_id[crossing_id]
            out_role = role.partner
            visits.append(Visit(crossing_id, role, out_role, segment,
                                crossing.segment(out_role),
                                role in crossing.over_roles))
            segment = crossing.segment(out_role)
        return visits

    def arcs(self) -> Dict[str, Tuple[SegmentId, ...]]:
        """Wirtinger over-arcs of the closure, keyed by their first segment.

        Arcs break where the knot passes under a crossing. The arc through
        the boundary contains both boundary segments.
        """
        groups = [[self.boundary_in]]
        for visit in self.traversal():
            if visit.over:
                groups[-1].append(visit.segment_out)
            else:
                groups.append([visit.segment_out])

        if len(groups) > 1:
            groups[0] = groups[0] + groups.pop()
        return {group[0]: tuple(group) for group in groups}

    def arc_of(self, segment: SegmentId) -> str:
        for name, segments in self.arcs().items():
            if segment in segments:
                return name
        raise KeyError(segment)

    # Regions

    def _other_end(self, crossing_id: str, role: Role) -> Tuple[str, Role]:
        segment = self._by_id[crossing_id].segment(role)
        return self.tail(segment) if role.incoming else self.head(segment)

    def regions(self) -> List[Region]:
        if self._regions is None:
            self._regions = compute_regions(self)
        return self._regions

    def above(self, segment: SegmentId) -> str:
        self.regions()
        return self._above[segment]

    def below(self, segment: SegmentId) -> str:
        self.regions()
        return self._below[segment]

    # Memento

    def create_memento(self):
        return serialize(self)

    @classmethod
    def from_memento(cls, memento):
        return parse_diagram(memento)

    def __eq__(self, other):
        if not isinstance(other, OpenDiagram):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.name, self.crossings, self.turnbacks))

    def __repr__(self):
        return 'OpenDiagram({0!r}, cr={1}, |E|={2})'.format(self.name, self.cr, len(self.E))


def compute_regions(D: OpenDiagram) -> List[Region]:
    """Faces of the closed diagram, with above/below incidence of every segment.

    Faces are traced by always leaving a crossing through the next end of
    its rotation. With the labeled order (s2p, s1, s2, s1p) this keeps the
    face on the right of every traversed edge: leaving through an outgoing
    end the face is below the segment, leaving through an incoming end it is
    above. Reversing the rotation at every crossing draws the mirror image,
    which exchanges above and below.
    """
    successor = {crossing_id: {order[i]: order[(i + 1) % 4] for i in range(4)}
                 for crossing_id, order in D.rotation.items()}
    unvisited = [(crossing.id, role) for crossing in D.crossings for role in D.rotation[crossing.id]]
    visited = set()
    regions = []
    D._above.clear()
    D._below.clear()

    for start in unvisited:
        if start in visited:
            continue
        region_id = 'r{0}'.format(len(regions))
        darts, above_of, below_of = [], [], []
        dart = start
        while dart not in visited:
            visited.add(dart)
            darts.append(dart)
            crossing_id, role = dart
            segment = D.crossing(crossing_id).segment(role)
            segments = (D.boundary_in, D.boundary_out) if D.is_boundary(segment) else (segment,)
            for item in segments:
                side = D._above if role.incoming else D._below
                if item in side and side[item] != region_id:
                    raise PlanarityError('segment {0} borders two faces on one side'.format(item))
                side[item] = region_id
                (above_of if role.incoming else below_of).append(item)
            arrived_crossing, arrived_role = D._other_end(crossing_id, role)
            dart = (arrived_crossing, successor[arrived_crossing][arrived_role])
        if dart != start:
            raise PlanarityError('face tracing did not close at {0}'.format(start))
        regions.append(Region(region_id, tuple(darts), tuple(above_of), tuple(below_of)))

    vertices, edges, faces = D.cr, len(D.E) + 1, len(regions)
    if vertices - edges + faces != 2:
        raise PlanarityError('Euler characteristic V - E + F = {0} - {1} + {2} != 2'.format(
            vertices, edges, faces))

    for segment in D.E + (D.boundary_in, D.boundary_out):
        if D._above.get(segment) == D._below.get(segment):
            raise PlanarityError('segment {0} has the same region on both sides'.format(segment))

    logger.debug('%s: %d regions', D.name, len(regions))
    return regions


def _require(document, key, kind):
    if key not in document:
        raise DiagramError('missing field "{0}"'.format(key))
    value = document[key]
    if not isinstance(value, kind):
        raise DiagramError('field "{0}" has the wrong type'.format(key))
    return value


def parse_diagram(document) -> OpenDiagram:
    """Validate a diagram document and build the :class:`OpenDiagram`.

    :raises DiagramError: on any structural problem, with the specific
        subclasses for incidence, planarity and link closures.
    """
    if not isinstance(document, dict):
        raise DiagramError('diagram document must be an object')

    name = str(document.get('name', 'unnamed'))
    raw_crossings = _require(document, 'crossings', list)
    if not raw_crossings:
        raise DiagramError('diagrams without crossings are not supported')

    crossings = []
    for position, raw in enumerate(raw_crossings):
        if not isinstance(raw, dict):
            raise DiagramError('crossing #{0} must be an object'.format(position))
        crossing_id = str(raw.get('id', 'c{0}'.format(position + 1)))
        sign = raw.get('sign')
        if sign not in (1, -1):
            raise DiagramError('crossing {0}: sign must be +1 or -1'.format(crossing_id))
        weight = raw.get('weight', 1)
        if weight not in (1, -1):
            raise DiagramError('crossing {0}: weight must be +1 or -1'.format(crossing_id))
        try:
            segments = {role: str(raw[role.value]) for role in Role}
        except KeyError as error:
            raise DiagramError('crossing {0}: missing role {1}'.format(crossing_id, error))
        crossings.append(CrossingSite(crossing_id, sign, segments[Role.S1], segments[Role.S2],
                                      segments[Role.S1P], segments[Role.S2P], weight))

    ids = [crossing.id for crossing in crossings]
    if len(set(ids)) != len(ids):
        raise DiagramError('duplicate crossing ids')

    boundary = _require(document, 'boundary', dict)
    boundary_in, boundary_out = str(boundary.get('in', '')), str(boundary.get('out', ''))
    if not boundary_in or not boundary_out or boundary_in == boundary_out:
        raise DiagramError('boundary needs distinct "in" and "out" segments')

    heads, tails, order = {}, {}, []
    for crossing in crossings:
        for role, segment in crossing.roles():
            (heads if role.incoming else tails).setdefault(segment, []).append((crossing.id, role))
            if segment not in order:
                order.append(segment)

    for segment in order:
        n_heads, n_tails = len(heads.get(segment, ())), len(tails.get(segment, ()))
        if segment == boundary_in:
            expected = (1, 0)
        elif segment == boundary_out:
            expected = (0, 1)
        else:
            expected = (1, 1)
        if (n_heads, n_tails) != expected:
            raise IncidenceError('segment {0} enters {1} and leaves {2} crossing ends'.format(
                segment, n_heads, n_tails))
    for segment in (boundary_in, boundary_out):
        if segment not in order:
            raise IncidenceError('boundary segment {0} is not used by any crossing'.format(segment))

    internal = [segment for segment in order if segment not in (boundary_in, boundary_out)]
    if 'segments' in document:
        listed = [str(segment) for segment in _require(document, 'segments', list)]
        if sorted(listed) != sorted(internal):
            raise DiagramError('"segments" does not list the internal segments')
        internal = listed

    if 2 * len(crossings) != len(internal) + 1:
        raise IncidenceError('2 cr(D) = {0} but |E| + 1 = {1}'.format(
            2 * len(crossings), len(internal) + 1))

    by_id = {crossing.id: crossing for crossing in crossings}
    turnbacks = []
    for raw in document.get('turnbacks', []):
        turnbacks.append(_parse_turnback(raw, by_id, heads, tails, boundary_in, boundary_out))

    rotation = {}
    for crossing_id, order_names in document.get('rotation', {}).items():
        if crossing_id not in ids:
            raise PlanarityError('rotation given for unknown crossing {0}'.format(crossing_id))
        try:
            darts = tuple(Role(value) for value in order_names)
        except ValueError:
            raise PlanarityError('rotation of {0} must list the roles s1, s2, s1p, s2p'.format(
                crossing_id))
        if not _is_transverse(darts):
            raise PlanarityError('rotation of {0} must list each role once, with the two ends of '
                                 'a strand opposite'.format(crossing_id))
        rotation[crossing_id] = darts
    for crossing_id in ids:
        rotation.setdefault(crossing_id, ROTATION)

    diagram = OpenDiagram(name, crossings, turnbacks, boundary_in, boundary_out,
                          internal, rotation)

    visits = _checked_traversal(diagram)
    if len(visits) != 2 * diagram.cr:
        raise NotAKnotError('closure of {0} is a link: the strand from {1} visits {2} of {3} '
                            'crossing ends'.format(name, boundary_in, len(visits), 2 * diagram.cr))

    diagram.regions()
    return diagram


def _parse_turnback(raw, crossings, heads, tails, boundary_in, boundary_out) -> Turnback:
    """``to`` names the crossing the turnback runs into, or the segment that
    continues the strand of ``from`` through that crossing."""
    try:
        kind = TurnbackKind(raw['kind'])
        segment = str(raw['from'])
        target = str(raw['to'])
    except (KeyError, ValueError, TypeError):
        raise DiagramError('turnback {0!r} needs a valid kind, "from" and "to"'.format(raw))

    if segment in (boundary_in, boundary_out):
        raise DiagramError('turnback on boundary segment {0}'.format(segment))
    ends = heads.get(segment, []) + tails.get(segment, [])
    if target in crossings:
        ends = [end for end in ends if end[0] == target]
    elif target in heads or target in tails:
        ends = [end for end in ends if crossings[end[0]].segment(end[1].partner) == target]
    else:
        raise DiagramError('turnback "to" {0!r} is neither a crossing nor a segment'.format(target))
    if 'role' in raw:
        try:
            role = Role(raw['role'])
        except ValueError:
            raise DiagramError('turnback role {0!r} is not a crossing role'.format(raw['role']))
        ends = [end for end in ends if end[1] == role]
    if not ends:
        raise DiagramError('turnback on {0} does not run into {1}'.format(segment, target))
    if len(ends) > 1:
        raise DiagramError('turnback on {0} at {1} is ambiguous, give its role'.format(
            segment, target))
    return Turnback(kind, segment, ends[0][0], ends[0][1])


def _is_transverse(darts):
    if len(darts) != 4 or set(darts) != set(Role):
        return False
    return all(darts[(i + 2) % 4] == darts[i].partner for i in range(4))


def _checked_traversal(D: OpenDiagram):
    visits, seen = [], set()
    segment = D.boundary_in
    while segment != D.boundary_out:
        crossing_id, role = D._head[segment]
        if (crossing_id, role) in seen:
            break
        seen.add((crossing_id, role))
        crossing = D.crossing(crossing_id)
        visits.append((crossing_id, role))
        segment = crossing.segment(role.partner)
    return visits


def serialize(D: OpenDiagram) -> dict:
    """The JSON document of a diagram; parse_diagram(serialize(D)) == D."""
    document = {
        'name': D.name,
        'crossings': [],
        'turnbacks': [],
        'boundary': {'in': D.boundary_in, 'out': D.boundary_out},
        'segments': list(D.internal_segments),
        'rotation': {key: [role.value for role in value] for key, value in D.rotation.items()},
    }
    for crossing in D.crossings:
        entry = {'id': crossing.id, 'sign': crossing.sign}
        entry.update({role.value: crossing.segment(role) for role in Role})
        if crossing.weight != 1:
            entry['weight'] = crossing.weight
        document['crossings'].append(entry)
    for turnback in D.turnbacks:
        document['turnbacks'].append({'kind': turnback.kind.value, 'from': turnback.segment,
                                      'to': turnback.crossing, 'role': turnback.role.value})
    return document
