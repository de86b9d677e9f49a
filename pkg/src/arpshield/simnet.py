"""Deterministic discrete-event simulation of one Ethernet segment.

Time is virtual and kept in integer nanoseconds so runs are exactly
reproducible. Frames are delivered by destination MAC (broadcast reaches
every node but the sender), every delivery yields one
:class:`DetectionRecord`, and frames emitted by detectors (replies, alerts)
are queued ``link_delay`` later. There is no loss and no reordering.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable

from .detectors import (
    DetectorConfig,
    Reason,
    State,
    VerdictKind,
    baseline_on_frame,
    clcc_host_on_frame,
    clcc_router_on_frame,
    initial_host_state,
    initial_router_state,
    maybe_clear_cache,
)
from .packet import Frame, write_trace
from .taxonomy import AttackClass
from .topology import ROUTER_ID, Topology

if TYPE_CHECKING:
    from .scenarios import Scenario

NS = 1_000_000_000
UNROUTABLE = "none"


class ClockRegression(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Event:
    at: int  # virtual ns
    frame: Frame
    origin: str
    sequence: int
    injected_class: AttackClass | None = None  # None for detector-emitted frames
    victim: str | None = None


@dataclass(frozen=True, slots=True)
class DetectionRecord:
    frame_id: int
    injected_class: AttackClass | None
    observer: str
    verdict_kind: VerdictKind
    reason: Reason | None
    at: int
    sequence: int
    designated: bool = False
    work: int = 0


@dataclass
class SimState:
    config: DetectorConfig
    nodes: dict[str, State]
    now: int = 0
    clears: dict[str, int] = field(default_factory=dict)


@dataclass
class RunResult:
    records: list[DetectionRecord]
    final: SimState
    injected: int
    emitted: int
    trace: list[tuple[int, Frame]]


def build_nodes(topo: Topology, config: DetectorConfig) -> dict[str, State]:
    nodes: dict[str, State] = {}
    for h in topo.hosts:
        static = list(h.static_entries)
        if config.seed_static:
            static += [(o.ip, o.mac) for o in topo.hosts if o is not h and (o.ip, o.mac) not in static]
        nodes[h.host_id] = initial_host_state(h.ip, h.mac, topo.router_ip, topo.router_mac, static)
    nodes[ROUTER_ID] = initial_router_state(topo.router_ip, topo.router_mac, [(h.ip, h.mac) for h in topo.hosts])
    return nodes


def advance_clock(state: SimState, to: int) -> SimState:
    """Move virtual time to ``to`` ns, firing every cache-clear boundary crossed on the way."""
    if to < state.now:
        raise ClockRegression(f"cannot move clock from {state.now} back to {to}")
    cfg = state.config
    to_s = to / NS
    if cfg.fake_list_ttl is None and all(n.last_clear + cfg.clear_interval > to_s for n in state.nodes.values()):
        state.now = to
        return state
    for node_id, node in state.nodes.items():
        while node.last_clear + cfg.clear_interval <= to_s:
            node, cleared = maybe_clear_cache(node, node.last_clear + cfg.clear_interval, cfg.clear_interval, cfg.fake_list_ttl)
            if cleared:
                state.clears[node_id] = state.clears.get(node_id, 0) + 1
        node, _ = maybe_clear_cache(node, to_s, cfg.clear_interval, cfg.fake_list_ttl)
        state.nodes[node_id] = node
    state.now = to
    return state


def _stepper(config: DetectorConfig) -> Callable[[str, State, Frame, float], tuple]:
    if config.kind == "baseline":
        return lambda node_id, st, f, now: baseline_on_frame(st, f, now)

    def step(node_id, st, f, now):
        if node_id == ROUTER_ID:
            return clcc_router_on_frame(st, f, now)
        return clcc_host_on_frame(st, f, now)

    return step


def simulate(scenario: Scenario, keep_trace: bool = False) -> RunResult:
    topo = scenario.topology
    cfg = scenario.detector
    sim = SimState(cfg, build_nodes(topo, cfg))
    step = _stepper(cfg)
    delay_ns = round(scenario.link_delay * NS)

    events = scenario.events()
    queue = [(e.at, e.sequence, e) for e in events]
    heapq.heapify(queue)
    seq = len(events)
    next_id = max((e.frame.frame_id for e in events), default=-1) + 1

    owner = {h.mac: h.host_id for h in topo.hosts}
    owner[topo.router_mac] = ROUTER_ID
    order = [h.host_id for h in topo.hosts] + [ROUTER_ID]

    records: list[DetectionRecord] = []
    trace: list[tuple[int, Frame]] = []
    emitted = 0
    while queue:
        at, _, ev = heapq.heappop(queue)
        advance_clock(sim, at)
        if keep_trace:
            trace.append((at, ev.frame))
        dst = ev.frame.eth.dst
        if dst.is_broadcast:
            observers = [n for n in order if n != ev.origin]
        elif dst in owner:
            observers = [owner[dst]]
        else:
            records.append(
                DetectionRecord(ev.frame.frame_id, ev.injected_class, UNROUTABLE, VerdictKind.IGNORED, None, at, ev.sequence)
            )
            continue
        now_s = at / NS
        for obs in observers:
            new_state, verdict = step(obs, sim.nodes[obs], ev.frame, now_s)
            sim.nodes[obs] = new_state
            records.append(
                DetectionRecord(
                    ev.frame.frame_id,
                    ev.injected_class,
                    obs,
                    verdict.kind,
                    verdict.reason,
                    at,
                    ev.sequence,
                    designated=ev.victim == obs,
                    work=verdict.work,
                )
            )
            for out in verdict.emitted:
                out = Frame(out.eth, out.arp, next_id)
                next_id += 1
                emitted += 1
                heapq.heappush(queue, (at + delay_ns, seq, Event(at + delay_ns, out, obs, seq)))
                seq += 1
    return RunResult(records, sim, len(events), emitted, trace)


def run(scenario: Scenario, trace_path=None) -> list[DetectionRecord]:
    """Run ``scenario`` to exhaustion; optionally dump every delivered frame as a binary trace."""
    result = simulate(scenario, keep_trace=trace_path is not None)
    if trace_path is not None:
        with open(trace_path, "wb") as fh:
            write_trace(fh, iter(result.trace))
    return result.records
