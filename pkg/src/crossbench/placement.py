"""Seeded assignment of driver and spectator roles onto a device topology.

Driver qubits run the gate that generates crosstalk; spectator qubits run an
identity-equivalent sequence and are measured.  Placement walks a shuffled
list of qubits and tries to root a gate group at each one, growing connected
paths for multi-qubit gates with local backtracking:

* pass 1 places driver groups until the driver threshold is reached,
* pass 2 places spectator groups until the spectator threshold is reached,
* passes 3 and 4 (optional fill) repeat both without thresholds.

Every group must end up adjacent to at least one qubit of the opposite role.
While a group is being grown, the search keeps two pieces of bookkeeping per
group: whether an already-committed opposite-role neighbor was *found*, and
which qubits (if any) were tentatively claimed to create one.  A tentative
claim is released again as soon as a real opposite neighbor turns up, and the
whole group is unwound when the search dead-ends.

Note on the adjacency requirement: it is enforced per *group*, not per group
member.  A two-qubit driver pair whose second qubit touches the only
spectator is a valid placement; for single-qubit gates the two readings
coincide.  This matches what a single found/assigned flag pair per group can
guarantee.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .device import DeviceTopology, GateSpec
from .errors import InsufficientTopologyError, InvalidThresholdError
from .rng import SplitMix64

# Orientation bits for growing a path on a directed topology.  FWD means the
# traversal order itself is a chain of stored edges, BWD means the reversed
# order is.  Undirected topologies keep both bits set forever.
_FWD, _BWD = 1, 2
_ANY = _FWD | _BWD


class Role(enum.Enum):
    UNASSIGNED = "unassigned"
    DRIVER = "driver"
    SPECTATOR = "spectator"
    TEMP = "temp"  # transient mark while a search is in progress


@dataclass(frozen=True)
class GateGroup:
    """Qubits hosting one gate, in application order.

    For multi-qubit gates consecutive qubits are edge-connected; `oriented`
    records that the tuple order is dictated by directed edges.
    """

    qubits: tuple[int, ...]
    oriented: bool = False

    def __post_init__(self):
        if not self.qubits:
            raise ValueError("a gate group needs at least one qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"gate group {self.qubits} repeats a qubit")


@dataclass(frozen=True)
class RoleAssignment:
    """Committed placement for one benchmark circuit."""

    driver_groups: tuple[GateGroup, ...]
    spectator_groups: tuple[GateGroup, ...]
    roles: tuple[Role, ...]
    seed: int
    thresholds: tuple[int, int]  # (driver groups, spectator groups)
    fill_passes: bool

    @property
    def driver_qubits(self) -> tuple[int, ...]:
        return tuple(q for g in self.driver_groups for q in g.qubits)

    @property
    def spectator_qubits(self) -> tuple[int, ...]:
        """Measured qubits in ascending index order (classical bit order)."""
        return tuple(sorted(q for g in self.spectator_groups for q in g.qubits))


@dataclass
class PlacementState:
    """Mutable working state threaded through the passes."""

    topology: DeviceTopology
    spectator_gate: GateSpec
    driver_gate: GateSpec
    rng: SplitMix64
    roles: list[Role] = field(default_factory=list)
    driver_groups: list[GateGroup] = field(default_factory=list)
    spectator_groups: list[GateGroup] = field(default_factory=list)

    def __post_init__(self):
        if not self.roles:
            self.roles = [Role.UNASSIGNED] * self.topology.num_qubits

    @classmethod
    def from_seed(cls, topology, spectator_gate, driver_gate, seed: int) -> "PlacementState":
        return cls(topology, spectator_gate, driver_gate, SplitMix64(seed))

    def commit(self, result: "PlacementResult", as_role: Role) -> None:
        """Apply a successful search result to the working state."""
        for q in result.group.qubits:
            self.roles[q] = as_role
        if as_role is Role.DRIVER:
            self.driver_groups.append(result.group)
        else:
            self.spectator_groups.append(result.group)
        if result.opposite is not None:
            other = Role.SPECTATOR if as_role is Role.DRIVER else Role.DRIVER
            for q in result.opposite.qubits:
                self.roles[q] = other
            if other is Role.DRIVER:
                self.driver_groups.append(result.opposite)
            else:
                self.spectator_groups.append(result.opposite)


@dataclass(frozen=True)
class PlacementResult:
    """Outcome of one successful group search.

    `group` holds the qubits for the requested role; `opposite` is the
    opposite-role group that had to be claimed alongside it, if any.
    """

    group: GateGroup
    opposite: GateGroup | None = None


def default_thresholds(topology: DeviceTopology, spectator_gate: GateSpec,
                       driver_gate: GateSpec) -> tuple[int, int]:
    """Group-count targets splitting the device evenly between both roles."""
    per_slot = spectator_gate.arity + driver_gate.arity
    count = max(1, topology.num_qubits // per_slot)
    return (count, count)


def try_assign_driver(state: PlacementState, root: int,
                      remaining: int | None = None) -> PlacementResult | None:
    """Try to grow a driver group of `remaining` qubits rooted at `root`.

    Returns the group (plus any spectators claimed to satisfy adjacency)
    without mutating `state`; the caller commits.  None means no valid
    placement exists from this root under the current state.
    """
    size = state.driver_gate.arity if remaining is None else remaining
    return _GroupSearch(state, Role.DRIVER).run(root, size)


def try_assign_spectator(state: PlacementState, root: int,
                         remaining: int | None = None) -> PlacementResult | None:
    """Role-swapped mirror of try_assign_driver."""
    size = state.spectator_gate.arity if remaining is None else remaining
    return _GroupSearch(state, Role.SPECTATOR).run(root, size)


def assign_roles(topology: DeviceTopology, spectator_gate: GateSpec, driver_gate: GateSpec,
                 *, thresholds: tuple[int, int] | None = None, fill_passes: bool = True,
                 seed: int = 0) -> RoleAssignment:
    """Produce a complete role assignment for one circuit.

    Args:
        thresholds: (driver, spectator) group-count targets for the first two
            passes; defaults to an even split of the device.  Thresholds are
            soft minima -- a pass that runs out of candidates simply ends.
        fill_passes: run two extra unbounded passes to use up leftover qubits.
        seed: placement seed; identical inputs and seed give identical output.

    Raises:
        InvalidThresholdError: a threshold is negative.
        InsufficientTopologyError: not even one driver group with an adjacent
            spectator group could be placed.
    """
    if thresholds is not None:
        if thresholds[0] < 0 or thresholds[1] < 0:
            raise InvalidThresholdError(f"thresholds must be non-negative, got {thresholds}")
        driver_threshold, spectator_threshold = thresholds
    else:
        driver_threshold, spectator_threshold = default_thresholds(
            topology, spectator_gate, driver_gate)

    state = PlacementState.from_seed(topology, spectator_gate, driver_gate, seed)
    _run_pass(state, Role.DRIVER, driver_threshold)
    _run_pass(state, Role.SPECTATOR, spectator_threshold)
    if fill_passes:
        _run_pass(state, Role.DRIVER, None)
        _run_pass(state, Role.SPECTATOR, None)

    if not state.driver_groups or not state.spectator_groups:
        raise InsufficientTopologyError(
            f"cannot place a driver group next to a spectator group on "
            f"{topology.num_qubits} qubits (driver arity {driver_gate.arity}, "
            f"spectator arity {spectator_gate.arity}, thresholds "
            f"({driver_threshold}, {spectator_threshold}), fill_passes={fill_passes})")

    return RoleAssignment(
        driver_groups=tuple(state.driver_groups),
        spectator_groups=tuple(state.spectator_groups),
        roles=tuple(state.roles),
        seed=seed & ((1 << 64) - 1),
        thresholds=(driver_threshold, spectator_threshold),
        fill_passes=fill_passes,
    )


def _run_pass(state: PlacementState, role: Role, threshold: int | None) -> None:
    """One sweep over a freshly shuffled qubit list, rooting groups of `role`."""
    order = state.rng.shuffled(range(state.topology.num_qubits))
    for root in order:
        if threshold is not None:
            placed = state.driver_groups if role is Role.DRIVER else state.spectator_groups
            if len(placed) >= threshold:
                return
        if state.roles[root] is not Role.UNASSIGNED:
            continue
        if role is Role.DRIVER:
            result = try_assign_driver(state, root)
        else:
            result = try_assign_spectator(state, root)
        if result is not None:
            state.commit(result, role)


def validate_assignment(topology: DeviceTopology, assignment: RoleAssignment) -> list[str]:
    """Return human-readable descriptions of every invariant violation.

    An empty list means the assignment is valid.  Checked: role/group
    consistency, disjointness, no leftover temporary marks, edge-connected
    (and correctly oriented) groups, per-group opposite-role adjacency, and
    that at least one group of each role exists.
    """
    problems: list[str] = []
    roles = assignment.roles
    if len(roles) != topology.num_qubits:
        problems.append(
            f"roles vector has {len(roles)} entries for {topology.num_qubits} qubits")
        return problems

    for q, role in enumerate(roles):
        if role is Role.TEMP:
            problems.append(f"qubit {q} still carries a temporary mark")

    claimed: dict[int, str] = {}
    for label, groups, want in (("driver", assignment.driver_groups, Role.DRIVER),
                                ("spectator", assignment.spectator_groups, Role.SPECTATOR)):
        for group in groups:
            for q in group.qubits:
                if not (0 <= q < topology.num_qubits):
                    problems.append(f"{label} group {group.qubits} uses out-of-range qubit {q}")
                    continue
                if q in claimed:
                    problems.append(
                        f"qubit {q} is in two groups ({claimed[q]} and {label} {group.qubits})")
                else:
                    claimed[q] = f"{label} {group.qubits}"
                if roles[q] is not want:
                    problems.append(
                        f"qubit {q} in {label} group {group.qubits} has role {roles[q].value}")
            problems.extend(_check_group_path(topology, group, label))

    for q, role in enumerate(roles):
        if role in (Role.DRIVER, Role.SPECTATOR) and q not in claimed:
            problems.append(f"qubit {q} has role {role.value} but belongs to no group")

    if not assignment.driver_groups:
        problems.append("no driver groups placed")
    if not assignment.spectator_groups:
        problems.append("no spectator groups placed")

    for group in assignment.driver_groups:
        if not _touches_role(topology, roles, group, Role.SPECTATOR):
            problems.append(f"driver group {group.qubits} has no adjacent spectator qubit")
    for group in assignment.spectator_groups:
        if not _touches_role(topology, roles, group, Role.DRIVER):
            problems.append(f"spectator group {group.qubits} has no adjacent driver qubit")

    return problems


def _check_group_path(topology: DeviceTopology, group: GateGroup, label: str) -> list[str]:
    problems = []
    if group.oriented and not topology.directed:
        problems.append(f"{label} group {group.qubits} claims orientation on an undirected device")
    for a, b in zip(group.qubits, group.qubits[1:]):
        if not (0 <= a < topology.num_qubits and 0 <= b < topology.num_qubits):
            continue  # out-of-range already reported
        if not topology.has_edge(a, b):
            problems.append(f"{label} group {group.qubits}: ({a}, {b}) is not a coupler edge")
    return problems


def _touches_role(topology: DeviceTopology, roles, group: GateGroup, want: Role) -> bool:
    for q in group.qubits:
        if not (0 <= q < topology.num_qubits):
            continue
        if any(roles[n] is want for n in topology.adjacent(q)):
            return True
    return False


class _GroupSearch:
    """Backtracking search for one gate group plus its adjacency witness.

    All mutations of the working state go through a trail so that a failed
    branch (or the whole search -- the caller commits separately) can be
    rewound exactly.
    """

    def __init__(self, state: PlacementState, place_role: Role):
        self.state = state
        self.rng = state.rng
        if place_role is Role.DRIVER:
            self.opposite_role = Role.SPECTATOR
            self.opposite_arity = state.spectator_gate.arity
        else:
            self.opposite_role = Role.DRIVER
            self.opposite_arity = state.driver_gate.arity
        self.trail: list[tuple] = []
        self.path: list[int] = []
        self.found = False  # a committed opposite-role neighbor exists
        self.tentative: list[int] | None = None  # opposite group claimed by us
        self._final_direction = _ANY

    def run(self, root: int, size: int) -> PlacementResult | None:
        if size < 1 or not (0 <= root < self.state.topology.num_qubits):
            return None
        ok = self._extend(root, size, _ANY)
        result = None
        if ok:
            group = GateGroup(self._ordered(self.path, self._final_direction),
                              oriented=self._oriented(self.path))
            opposite = None
            if self.tentative is not None:
                opposite = GateGroup(tuple(self.tentative), oriented=self._oriented(self.tentative))
            result = PlacementResult(group=group, opposite=opposite)
        self._rollback(0)
        return result

    # -- recursion -------------------------------------------------------

    def _extend(self, q: int, remaining: int, direction: int) -> bool:
        if self.state.roles[q] is not Role.UNASSIGNED:
            return False
        mark = len(self.trail)
        self._set_role(q, Role.TEMP)
        self.path.append(q)

        # A committed opposite neighbor satisfies the group for good; any
        # qubits we claimed ourselves are released again.
        if not self.found and self._sees_opposite(q):
            self._set_found(True)
            if self.tentative is not None:
                for t in self.tentative:
                    self._set_role(t, Role.UNASSIGNED)
                self._set_tentative(None)

        if remaining == 1:
            if self.found or self.tentative is not None or self._claim_opposite_near(q):
                self._final_direction = direction
                return True
            self._rollback(mark)
            self.path.pop()
            return False

        # Interior qubit: optionally claim an opposite group next to it, then
        # recurse into each neighbor.  Claiming first mirrors the greedy
        # search; the trailing None option retries without a claim so that a
        # claim never blocks the only remaining growth corridor.
        if not self.found and self.tentative is None:
            options: list[int | None] = list(self.rng.shuffled(self._unassigned_neighbors(q)))
            options.append(None)
        else:
            options = [None]

        for option in options:
            option_mark = len(self.trail)
            if option is not None:
                claimed = self._grow_opposite(option)
                if claimed is None:
                    continue
                self._set_tentative(claimed)
            for v in self.rng.shuffled(self.state.topology.adjacent(q)):
                hop = direction & self._edge_bits(q, v)
                if hop == 0 or self.state.roles[v] is not Role.UNASSIGNED:
                    continue
                if self._extend(v, remaining - 1, hop):
                    return True
            self._rollback(option_mark)

        self._rollback(mark)
        self.path.pop()
        return False

    def _claim_opposite_near(self, q: int) -> bool:
        """Last group qubit: claim an opposite group beside it if possible."""
        for u in self.rng.shuffled(self._unassigned_neighbors(q)):
            claimed = self._grow_opposite(u)
            if claimed is not None:
                self._set_tentative(claimed)
                return True
        return False

    def _grow_opposite(self, root: int) -> list[int] | None:
        """Grow a connected opposite-role path of the opposite gate's arity.

        The claimed group needs no adjacency witness of its own: it is next
        to the group under construction by construction.
        """
        mark = len(self.trail)
        path: list[int] = []
        direction = self._grow(root, self.opposite_arity, _ANY, path)
        if direction is None:
            self._rollback(mark)
            return None
        return list(self._ordered(path, direction))

    def _grow(self, q: int, remaining: int, direction: int, path: list[int]) -> int | None:
        if self.state.roles[q] is not Role.UNASSIGNED:
            return None
        mark = len(self.trail)
        self._set_role(q, Role.TEMP)
        path.append(q)
        if remaining == 1:
            return direction
        for v in self.rng.shuffled(self.state.topology.adjacent(q)):
            hop = direction & self._edge_bits(q, v)
            if hop == 0 or self.state.roles[v] is not Role.UNASSIGNED:
                continue
            result = self._grow(v, remaining - 1, hop, path)
            if result is not None:
                return result
        self._rollback(mark)
        path.pop()
        return None

    # -- helpers ---------------------------------------------------------

    def _sees_opposite(self, q: int) -> bool:
        return any(self.state.roles[n] is self.opposite_role
                   for n in self.state.topology.adjacent(q))

    def _unassigned_neighbors(self, q: int) -> list[int]:
        return [v for v in self.state.topology.adjacent(q)
                if self.state.roles[v] is Role.UNASSIGNED]

    def _edge_bits(self, a: int, b: int) -> int:
        bits = 0
        if self.state.topology.has_edge(a, b):
            bits |= _FWD
        if self.state.topology.has_edge(b, a):
            bits |= _BWD
        return bits

    def _ordered(self, path: list[int], direction: int) -> tuple[int, ...]:
        if direction & _FWD:
            return tuple(path)
        return tuple(reversed(path))

    def _oriented(self, path: list[int]) -> bool:
        return self.state.topology.directed and len(path) > 1

    def _set_role(self, q: int, role: Role) -> None:
        self.trail.append(("role", q, self.state.roles[q]))
        self.state.roles[q] = role

    def _set_found(self, value: bool) -> None:
        self.trail.append(("found", self.found))
        self.found = value

    def _set_tentative(self, group: list[int] | None) -> None:
        self.trail.append(("tentative", self.tentative))
        self.tentative = group

    def _rollback(self, mark: int) -> None:
        while len(self.trail) > mark:
            entry = self.trail.pop()
            if entry[0] == "role":
                _, q, old = entry
                self.state.roles[q] = old
            elif entry[0] == "found":
                self.found = entry[1]
            else:
                self.tentative = entry[1]
