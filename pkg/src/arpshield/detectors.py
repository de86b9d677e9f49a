"""ARP detector state machines.

Three agents, each a pure function ``(state, frame, now) -> (state', verdict)``:

* :func:`clcc_host_on_frame` - cross-layer consistency checking at a host,
  with an ARP cache, a fake list of forged bindings, and alert emission.
* :func:`clcc_router_on_frame` - the router side, validating unicast alerts
  against its authoritative cache.
* :func:`baseline_on_frame` - a trusting RFC 826 host that only notices
  another station claiming its own IP address.

Caches and fake lists are scanned sequentially; every verdict carries the
number of entry comparisons it needed in ``Verdict.work``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from ipaddress import IPv4Address
from typing import Union

from .packet import (
    BROADCAST_MAC,
    NULL_IP,
    OP_BROADCAST_ALERT,
    OP_REPLY,
    OP_REQUEST,
    OP_UNICAST_ALERT,
    Frame,
    MacAddress,
    make_frame,
)
from .taxonomy import AttackClass

DEFAULT_CLEAR_INTERVAL = 600.0


class VerdictKind(enum.Enum):
    ACCEPTED = "Accepted"
    DETECTED = "Detected"
    IGNORED = "Ignored"

    def __str__(self) -> str:
        return self.value


class Reason(enum.Enum):
    """Detection rules, listed in precedence order (first match wins)."""

    NULL_MAC = "NullMac"
    CROSS_LAYER = "CrossLayerMismatch"
    ROUTER_IP = "RouterIpMismatch"
    ROUTER_CACHE = "RouterCacheMismatch"
    FAKE_LIST_HIT = "FakeListHit"
    CACHE_CONFLICT = "CacheConflict"
    SELF_IP = "SelfIpConflict"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class ArpCacheEntry:
    ip: IPv4Address
    mac: MacAddress
    inserted_at: float = 0.0
    static_entry: bool = False


@dataclass(frozen=True, slots=True)
class FakeListEntry:
    ip: IPv4Address
    mac: MacAddress
    first_seen: float
    hit_count: int = 1


@dataclass(frozen=True)
class HostState:
    own_ip: IPv4Address
    own_mac: MacAddress
    router_ip: IPv4Address
    router_mac: MacAddress
    cache: tuple[ArpCacheEntry, ...] = ()
    fake_list: tuple[FakeListEntry, ...] = ()
    last_clear: float = 0.0


@dataclass(frozen=True)
class RouterState:
    own_ip: IPv4Address
    own_mac: MacAddress
    cache: tuple[ArpCacheEntry, ...] = ()
    fake_list: tuple[FakeListEntry, ...] = ()
    last_clear: float = 0.0


State = Union[HostState, RouterState]


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    reason: Reason | None = None
    emitted: tuple[Frame, ...] = ()
    work: int = 0

    def __post_init__(self) -> None:
        if (self.kind is VerdictKind.DETECTED) != (self.reason is not None):
            raise ValueError("Detected verdicts carry exactly one reason, others none")

    @property
    def detected(self) -> bool:
        return self.kind is VerdictKind.DETECTED


@dataclass(frozen=True)
class DetectorConfig:
    kind: str = "clcc"
    clear_interval: float = DEFAULT_CLEAR_INTERVAL
    fake_list_ttl: float | None = None
    seed_static: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("clcc", "baseline"):
            raise ValueError(f"detector must be 'clcc' or 'baseline', got {self.kind!r}")
        if self.clear_interval <= 0:
            raise ValueError("clear_interval must be positive")
        if self.fake_list_ttl is not None and self.fake_list_ttl <= 0:
            raise ValueError("fake_list_ttl must be positive or None")


# -- table helpers -----------------------------------------------------------


def _evolve(obj, **changes):
    # dataclasses.replace re-reads the field list on every call; this runs per frame
    return type(obj)(**{**obj.__dict__, **changes})



def _find_fake(fake_list: tuple[FakeListEntry, ...], ip_: IPv4Address, mac_: MacAddress) -> int | None:
    for i, e in enumerate(fake_list):
        if e.ip == ip_ and e.mac == mac_:
            return i
    return None


def _record_fake(state: State, ip_: IPv4Address, mac_: MacAddress, now: float) -> tuple[State, bool, int]:
    """Insert or bump (ip, mac) in the fake list. Returns (state, was_present, work)."""
    fl = state.fake_list
    i = _find_fake(fl, ip_, mac_)
    if i is None:
        return _evolve(state, fake_list=fl + (FakeListEntry(ip_, mac_, now),)), False, len(fl)
    e = fl[i]
    bumped = FakeListEntry(e.ip, e.mac, e.first_seen, e.hit_count + 1)
    return _evolve(state, fake_list=fl[:i] + (bumped,) + fl[i + 1 :]), True, i + 1


def _learn(cache: tuple[ArpCacheEntry, ...], ip_: IPv4Address, mac_: MacAddress, now: float) -> tuple[tuple[ArpCacheEntry, ...], int]:
    for i, e in enumerate(cache):
        if e.ip == ip_:
            if e.static_entry or e.mac == mac_:
                return cache, i + 1
            return cache[:i] + (ArpCacheEntry(ip_, mac_, now),) + cache[i + 1 :], i + 1
    return cache + (ArpCacheEntry(ip_, mac_, now),), len(cache)


def _conflicts(entries, ip_: IPv4Address, mac_: MacAddress) -> bool:
    for e_ip, e_mac in entries:
        if (e_ip == ip_) != (e_mac == mac_):
            return True
    return False


def _reply_to(state: State, f: Frame) -> Frame:
    a = f.arp
    return make_frame(
        OP_REPLY, state.own_mac, a.sender_mac, (state.own_ip, state.own_mac), (a.sender_ip, a.sender_mac)
    )


def unicast_alert(state: HostState) -> Frame:
    """Opcode-26 alert: the host identifies itself to the router."""
    return make_frame(
        OP_UNICAST_ALERT,
        state.own_mac,
        state.router_mac,
        (state.own_ip, state.own_mac),
        (state.router_ip, state.router_mac),
    )


def broadcast_alert(state: State, forged_ip: IPv4Address, forged_mac: MacAddress) -> Frame:
    """Opcode-25 alert: sender fields name the forged binding, target fields the alerter."""
    return make_frame(
        OP_BROADCAST_ALERT, state.own_mac, BROADCAST_MAC, (forged_ip, forged_mac), (state.own_ip, state.own_mac)
    )


# -- CLCC --------------------------------------------------------------------


def _flag(state: State, f: Frame, now: float, reason: Reason, work: int, alert_router: bool):
    a = f.arp
    state, present, w = _record_fake(state, a.sender_ip, a.sender_mac, now)
    emitted: tuple[Frame, ...] = ()
    if alert_router:
        emitted += (unicast_alert(state),)
    if present:
        emitted += (broadcast_alert(state, a.sender_ip, a.sender_mac),)
    return state, Verdict(VerdictKind.DETECTED, reason, emitted, work + w)


def _clcc_request_reply(state: State, f: Frame, now: float, extra_static, alert_router: bool):
    a = f.arp
    work = 1
    if a.sender_mac.is_null:
        return state, Verdict(VerdictKind.DETECTED, Reason.NULL_MAC, (), work)

    work += 1
    if a.sender_mac != f.eth.src:
        return _flag(state, f, now, Reason.CROSS_LAYER, work, alert_router)

    hit = _find_fake(state.fake_list, a.sender_ip, a.sender_mac)
    work += len(state.fake_list) if hit is None else hit + 1
    if hit is not None:
        return _flag(state, f, now, Reason.FAKE_LIST_HIT, work, alert_router)

    work += len(state.cache) + len(extra_static)
    if _conflicts(((e.ip, e.mac) for e in state.cache), a.sender_ip, a.sender_mac) or _conflicts(
        extra_static, a.sender_ip, a.sender_mac
    ):
        return _flag(state, f, now, Reason.CACHE_CONFLICT, work, alert_router)

    work += 2
    own_claimed = (a.sender_ip == state.own_ip) != (a.sender_mac == state.own_mac)
    misaddressed = (a.target_mac == state.own_mac or f.eth.dst == state.own_mac) and a.target_ip != state.own_ip
    if own_claimed or misaddressed:
        return state, Verdict(VerdictKind.DETECTED, Reason.SELF_IP, (), work)

    if a.target_ip != state.own_ip:
        # Overheard: passes every check but is not ours to learn from.
        return state, Verdict(VerdictKind.ACCEPTED, None, (), work)
    cache, w = _learn(state.cache, a.sender_ip, a.sender_mac, now)
    state = _evolve(state, cache=cache)
    emitted = (_reply_to(state, f),) if a.opcode == OP_REQUEST else ()
    return state, Verdict(VerdictKind.ACCEPTED, None, emitted, work + w)


def _host_static(state: HostState) -> tuple[tuple[IPv4Address, MacAddress], ...]:
    return ((state.router_ip, state.router_mac),)


def _on_broadcast_alert(state: State, f: Frame, now: float, known_static) -> tuple[State, Verdict]:
    a = f.arp
    work = 1
    if a.sender_mac.is_null:
        return state, Verdict(VerdictKind.DETECTED, Reason.NULL_MAC, (), work)
    work += 1
    if f.eth.src != a.target_mac:
        return state, Verdict(VerdictKind.DETECTED, Reason.CROSS_LAYER, (), work)

    statics = [(e.ip, e.mac) for e in state.cache if e.static_entry]
    work += len(state.cache)
    if statics:
        # With a static table, the alerter must be a known station and the
        # denounced pair must not be one of the static truths.
        known = statics + list(known_static)
        work += len(known)
        alerter_ok = (a.target_ip, a.target_mac) in known
        slander = (a.sender_ip, a.sender_mac) in known
        if not alerter_ok or slander:
            return state, Verdict(VerdictKind.DETECTED, Reason.CROSS_LAYER, (), work)

    cache = tuple(
        e for e in state.cache if e.static_entry or not (e.ip == a.sender_ip and e.mac == a.sender_mac)
    )
    if len(cache) != len(state.cache):
        state = _evolve(state, cache=cache)
    state, _, w = _record_fake(state, a.sender_ip, a.sender_mac, now)
    return state, Verdict(VerdictKind.ACCEPTED, None, (), work + w)


def clcc_host_on_frame(state: HostState, f: Frame, now: float) -> tuple[HostState, Verdict]:
    op = f.arp.opcode
    if op in (OP_REQUEST, OP_REPLY):
        return _clcc_request_reply(state, f, now, _host_static(state), alert_router=True)
    if op == OP_BROADCAST_ALERT:
        return _on_broadcast_alert(state, f, now, _host_static(state))
    return state, Verdict(VerdictKind.IGNORED, None, (), 1)


def clcc_router_on_frame(state: RouterState, f: Frame, now: float) -> tuple[RouterState, Verdict]:
    a = f.arp
    if a.opcode in (OP_REQUEST, OP_REPLY):
        return _clcc_request_reply(state, f, now, (), alert_router=False)
    if a.opcode == OP_BROADCAST_ALERT:
        return state, Verdict(VerdictKind.IGNORED, None, (), 1)

    work = 1
    if a.sender_mac.is_null:
        return state, Verdict(VerdictKind.DETECTED, Reason.NULL_MAC, (), work)
    work += 1
    if a.sender_mac != f.eth.src:
        state, _, w = _record_fake(state, a.sender_ip, a.sender_mac, now)
        return state, Verdict(VerdictKind.DETECTED, Reason.CROSS_LAYER, (), work + w)
    work += 1
    if a.target_ip != state.own_ip:
        return state, Verdict(VerdictKind.DETECTED, Reason.ROUTER_IP, (), work)
    for i, e in enumerate(state.cache):
        if e.ip == a.sender_ip and e.mac == a.sender_mac:
            return state, Verdict(VerdictKind.ACCEPTED, None, (), work + i + 1)
    work += len(state.cache)
    state, _, w = _record_fake(state, a.sender_ip, a.sender_mac, now)
    return state, Verdict(VerdictKind.DETECTED, Reason.ROUTER_CACHE, (), work + w)


def maybe_clear_cache(
    state: State,
    now: float,
    clear_interval: float = DEFAULT_CLEAR_INTERVAL,
    fake_list_ttl: float | None = None,
) -> tuple[State, bool]:
    """Drop dynamic cache entries once ``clear_interval`` has elapsed since the last clear.

    With a ``fake_list_ttl``, fake-list entries older than the TTL are dropped
    as well; by default the fake list is never pruned.
    """
    if fake_list_ttl is not None:
        kept = tuple(e for e in state.fake_list if now - e.first_seen < fake_list_ttl)
        if len(kept) != len(state.fake_list):
            state = _evolve(state, fake_list=kept)
    if now - state.last_clear < clear_interval:
        return state, False
    cache = tuple(e for e in state.cache if e.static_entry)
    return _evolve(state, cache=cache, last_clear=now), True


# -- RFC 826 baseline ----------------------------------------------------------


def baseline_on_frame(state: State, f: Frame, now: float = 0.0) -> tuple[State, Verdict]:
    a = f.arp
    if a.opcode not in (OP_REQUEST, OP_REPLY):
        return state, Verdict(VerdictKind.IGNORED, None, (), 1)
    if a.sender_ip == state.own_ip and a.sender_mac != state.own_mac:
        return state, Verdict(VerdictKind.DETECTED, Reason.SELF_IP, (), 1)
    work = 1
    if a.sender_ip != NULL_IP:
        cache, w = _learn(state.cache, a.sender_ip, a.sender_mac, now)
        state = _evolve(state, cache=cache)
        work += w
    emitted = ()
    if a.opcode == OP_REQUEST and a.target_ip == state.own_ip:
        emitted = (_reply_to(state, f),)
    return state, Verdict(VerdictKind.ACCEPTED, None, emitted, work)


# -- ground truth ----------------------------------------------------------------


class Outcome(enum.Enum):
    TRUE_POSITIVE = "TruePositive"
    FALSE_NEGATIVE = "FalseNegative"
    FALSE_POSITIVE = "FalsePositive"
    TRUE_NEGATIVE = "TrueNegative"


def classify_detection(ground_truth: AttackClass, verdict: Verdict | VerdictKind) -> Outcome:
    kind = verdict.kind if isinstance(verdict, Verdict) else verdict
    hit = kind is VerdictKind.DETECTED
    if ground_truth.abnormal:
        return Outcome.TRUE_POSITIVE if hit else Outcome.FALSE_NEGATIVE
    return Outcome.FALSE_POSITIVE if hit else Outcome.TRUE_NEGATIVE


def initial_host_state(
    own_ip: IPv4Address,
    own_mac: MacAddress,
    router_ip: IPv4Address,
    router_mac: MacAddress,
    static_entries=(),
) -> HostState:
    cache = tuple(ArpCacheEntry(i, m, 0.0, True) for i, m in static_entries)
    return HostState(own_ip, own_mac, router_ip, router_mac, cache)


def initial_router_state(own_ip: IPv4Address, own_mac: MacAddress, bindings) -> RouterState:
    cache = tuple(ArpCacheEntry(i, m, 0.0, True) for i, m in bindings)
    return RouterState(own_ip, own_mac, cache)

