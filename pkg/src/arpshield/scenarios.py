"""Ground-truth-labelled traffic generation and scenario files.

A scenario file is INI-style text::

    [scenario]
    label = paper-mix

    [seed]
    value = 826

    [topology]
    subnet = 192.169.1.0/24
    router = 10.10.1.0 00:05:79:66:68:fe
    attacker = C
    host.A = 192.169.1.10 00:05:79:66:68:01
    static.A = 192.169.1.11 00:05:79:66:68:02; ...   (optional)

    [mix]
    Normal = 100
    PKT1 = 105

    [schedule]
    gap = 0.5
    link_delay = 0.001

    [detector]
    kind = clcc
    clear_interval = 600
    fake_list_ttl = none
    seed_static = false
"""

from __future__ import annotations

import configparser
import io
import random
from dataclasses import dataclass, field, replace
from ipaddress import IPv4Address, IPv4Network
from pathlib import Path
from typing import Mapping

from .detectors import DetectorConfig
from .packet import (
    BROADCAST_MAC,
    NULL_MAC,
    OP_BROADCAST_ALERT,
    OP_REPLY,
    OP_REQUEST,
    OP_UNICAST_ALERT,
    Frame,
    MacAddress,
    ip,
    is_cross_layer_consistent,
    mac,
    make_frame,
)
from .simnet import Event
from .taxonomy import ABNORMAL, AttackClass
from .topology import ATTACKER_ETH_MAC, ROUTER_ID, Host, Topology, paper_topology

GENERATOR_NAME = "MT19937 (CPython random.Random, integer seed)"

# Forged MACs taken from the sample column of the detection table.
FORGED_REQUEST_MAC = mac("00:05:79:66:68:12")
FORGED_ALERT_MAC = mac("00:05:79:66:68:af")
FORGED_UNICAST_ALERT_MAC = mac("00:06:80:99:80:00")

PAPER_MIX: dict[AttackClass, int] = {AttackClass.Normal: 100, **{c: 105 for c in ABNORMAL}}

__all__ = [
    "GENERATOR_NAME",
    "PAPER_MIX",
    "EmptyMix",
    "Scenario",
    "designated_observer",
    "generate_class",
    "generate_mix",
    "load_scenario",
    "paper_mix_scenario",
    "paper_topology",
    "class_predicate",
    "dumps_scenario",
    "loads_scenario",
    "save_scenario",
]


class EmptyMix(ValueError):
    pass


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    seed: int
    topology: Topology
    mix: Mapping[AttackClass, int]
    gap: float = 0.5
    link_delay: float = 0.001
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    label: str = "scenario"

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ScenarioError("seed must be a 64-bit unsigned integer")
        if any(n < 0 for n in self.mix.values()):
            raise ScenarioError("mix counts must be >= 0")
        if self.gap <= 0 or self.link_delay <= 0:
            raise ScenarioError("gap and link_delay must be positive")

    @property
    def total(self) -> int:
        return sum(self.mix.values())

    def events(self) -> list[Event]:
        return generate_mix(self)

    def with_detector(self, kind: str) -> Scenario:
        return replace(self, detector=replace(self.detector, kind=kind))

    def with_seed(self, seed: int) -> Scenario:
        return replace(self, seed=seed)


def paper_mix_scenario(seed: int = 826, detector: str = "clcc") -> Scenario:
    """100 normal frames and 105 of each malicious class (1155 abnormal) on the three-host reference topology."""
    return Scenario(
        seed=seed,
        topology=paper_topology(),
        mix=dict(PAPER_MIX),
        detector=DetectorConfig(kind=detector),
        label="paper-mix",
    )


# -- generation --------------------------------------------------------------


def _random_mac(rng: random.Random, topo: Topology) -> MacAddress:
    taken = {h.mac for h in topo.hosts} | {topo.router_mac, ATTACKER_ETH_MAC}
    while True:
        # locally administered, unicast
        m = MacAddress(bytes([0x02]) + rng.getrandbits(40).to_bytes(5, "big"))
        if m not in taken:
            return m


def _pick_pair(rng: random.Random, topo: Topology) -> tuple[Host, Host]:
    honest = list(topo.honest_hosts)
    victim = rng.choice(honest)
    peers = [h for h in honest if h is not victim] or [h for h in topo.hosts if h is not victim]
    return victim, rng.choice(peers)


def generate_class(cls: AttackClass, topo: Topology, rng: random.Random, frame_id: int = 0) -> Frame:
    """Build one frame of ``cls`` against ``topo``.

    The victim and the impersonated peer are drawn from the non-attacker
    hosts; invalid IPs are drawn from the unbound addresses of the subnet.
    """
    if len(topo.hosts) < 2:
        raise ScenarioError("topology needs at least two hosts and a router")
    C = AttackClass
    attacker = topo.attacker
    router = (topo.router_ip, topo.router_mac)

    if cls is C.Normal:
        pool = list(topo.honest_hosts) if len(topo.honest_hosts) >= 2 else list(topo.hosts)
        x, y = rng.sample(pool, 2)
        if rng.random() < 0.5:
            return make_frame(OP_REQUEST, x.mac, BROADCAST_MAC, (x.ip, x.mac), (y.ip, NULL_MAC), frame_id)
        return make_frame(OP_REPLY, x.mac, y.mac, (x.ip, x.mac), (y.ip, y.mac), frame_id)

    v, p = _pick_pair(rng, topo)
    bogus_ip = rng.choice(topo.invalid_pool)

    if cls is C.PKT1:
        m = _random_mac(rng, topo)
        return make_frame(OP_REQUEST, m, BROADCAST_MAC, (bogus_ip, m), (v.ip, NULL_MAC), frame_id)
    if cls is C.PKT2:
        return make_frame(
            OP_REQUEST, ATTACKER_ETH_MAC, BROADCAST_MAC, (p.ip, FORGED_REQUEST_MAC), (v.ip, NULL_MAC), frame_id
        )
    if cls is C.PKT3:
        return make_frame(
            OP_REQUEST, ATTACKER_ETH_MAC, BROADCAST_MAC, (v.ip, ATTACKER_ETH_MAC), (bogus_ip, NULL_MAC), frame_id
        )
    if cls is C.PKT4:
        return make_frame(OP_REPLY, ATTACKER_ETH_MAC, v.mac, (p.ip, FORGED_REQUEST_MAC), (v.ip, v.mac), frame_id)
    if cls is C.PKT5:
        return make_frame(OP_REPLY, topo.router_mac, v.mac, (bogus_ip, topo.router_mac), (v.ip, v.mac), frame_id)
    if cls is C.PKT6:
        return make_frame(OP_REPLY, p.mac, v.mac, (p.ip, p.mac), (bogus_ip, v.mac), frame_id)
    if cls is C.PKT7:
        return make_frame(
            OP_BROADCAST_ALERT,
            ATTACKER_ETH_MAC,
            BROADCAST_MAC,
            (p.ip, FORGED_ALERT_MAC),
            (attacker.ip, ATTACKER_ETH_MAC),
            frame_id,
        )
    if cls is C.PKT8:
        return make_frame(
            OP_BROADCAST_ALERT, ATTACKER_ETH_MAC, BROADCAST_MAC, (p.ip, NULL_MAC), (attacker.ip, ATTACKER_ETH_MAC), frame_id
        )
    if cls is C.PKT9:
        return make_frame(
            OP_UNICAST_ALERT, ATTACKER_ETH_MAC, topo.router_mac, (p.ip, FORGED_UNICAST_ALERT_MAC), router, frame_id
        )
    if cls is C.PKT10:
        wrong_router_ip = IPv4Address(int(topo.router_ip) ^ 1)
        return make_frame(OP_UNICAST_ALERT, p.mac, topo.router_mac, (p.ip, p.mac), (wrong_router_ip, topo.router_mac), frame_id)
    if cls is C.PKT11:
        return make_frame(OP_UNICAST_ALERT, p.mac, topo.router_mac, (bogus_ip, p.mac), router, frame_id)
    raise ScenarioError(f"unsupported class {cls}")


def class_predicate(cls: AttackClass, f: Frame, topo: Topology) -> bool:
    """The defining property of each malicious class, checked on the frame alone."""
    a = f.arp
    by_ip = topo.bindings()
    by_mac = {m: i for i, m in by_ip.items()}
    consistent = is_cross_layer_consistent(f)
    C = AttackClass
    if cls is C.PKT1:
        return a.opcode == OP_REQUEST and consistent and a.sender_ip not in by_ip
    if cls is C.PKT2:
        return a.opcode == OP_REQUEST and not consistent
    if cls is C.PKT3:
        return a.opcode == OP_REQUEST and consistent and a.sender_ip in by_ip and by_ip[a.sender_ip] != a.sender_mac
    if cls is C.PKT4:
        return a.opcode == OP_REPLY and not consistent
    if cls is C.PKT5:
        return a.opcode == OP_REPLY and consistent and a.sender_mac in by_mac and by_mac[a.sender_mac] != a.sender_ip
    if cls is C.PKT6:
        return a.opcode == OP_REPLY and consistent and a.target_mac in by_mac and by_mac[a.target_mac] != a.target_ip
    if cls is C.PKT7:
        return (
            a.opcode == OP_BROADCAST_ALERT
            and not a.sender_mac.is_null
            and a.sender_mac not in by_mac
            and f.eth.src not in by_mac
        )
    if cls is C.PKT8:
        return a.opcode == OP_BROADCAST_ALERT and a.sender_mac.is_null
    if cls is C.PKT9:
        return a.opcode == OP_UNICAST_ALERT and not consistent
    if cls is C.PKT10:
        return a.opcode == OP_UNICAST_ALERT and a.target_ip != topo.router_ip
    if cls is C.PKT11:
        return (
            a.opcode == OP_UNICAST_ALERT
            and consistent
            and a.target_ip == topo.router_ip
            and by_ip.get(a.sender_ip) != a.sender_mac
        )
    if cls is C.Normal:
        return not any(class_predicate(c, f, topo) for c in ABNORMAL)
    raise ScenarioError(f"unsupported class {cls}")


def designated_observer(cls: AttackClass, f: Frame, topo: Topology) -> str:
    """Node whose verdict counts for the frame in reports.

    Request/reply classes: the receiving host, or for PKT3 the host whose IP is
    claimed. Broadcast alerts: the host whose binding the alert denounces.
    Unicast alerts: the router.
    """
    a = f.arp
    owner_of_ip = {h.ip: h.host_id for h in topo.hosts}
    owner_of_mac = {h.mac: h.host_id for h in topo.hosts}
    if a.opcode == OP_UNICAST_ALERT:
        return ROUTER_ID
    if a.opcode == OP_BROADCAST_ALERT or cls is AttackClass.PKT3:
        return owner_of_ip[a.sender_ip]
    if f.eth.dst.is_broadcast:
        return owner_of_ip[a.target_ip]
    return owner_of_mac[f.eth.dst]


def _origin(cls: AttackClass, f: Frame, topo: Topology) -> str:
    if cls is AttackClass.Normal:
        return next(h.host_id for h in topo.hosts if h.mac == f.eth.src)
    return topo.attacker_id


def generate_mix(s: Scenario) -> list[Event]:
    """Seeded shuffle of every requested frame, spaced ``gap`` seconds apart from t=0."""
    if s.total < 1:
        raise EmptyMix("scenario mix has no frames")
    rng = random.Random(s.seed)
    order = [c for c in AttackClass for _ in range(s.mix.get(c, 0))]
    rng.shuffle(order)
    gap_ns = round(s.gap * 1e9)
    events = []
    for i, cls in enumerate(order):
        f = generate_class(cls, s.topology, rng, frame_id=i)
        events.append(
            Event(
                at=i * gap_ns,
                frame=f,
                origin=_origin(cls, f, s.topology),
                sequence=i,
                injected_class=cls,
                victim=designated_observer(cls, f, s.topology),
            )
        )
    return events


# -- scenario files --------------------------------------------------------------


def _fmt_float(x: float) -> str:
    return repr(float(x))


def dumps_scenario(s: Scenario) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep key case
    cp["scenario"] = {"label": s.label}
    cp["seed"] = {"value": str(s.seed), "generator": GENERATOR_NAME}
    topo = {
        "subnet": str(s.topology.subnet),
        "router": f"{s.topology.router_ip} {s.topology.router_mac}",
        "attacker": s.topology.attacker_id,
    }
    for h in s.topology.hosts:
        topo[f"host.{h.host_id}"] = f"{h.ip} {h.mac}"
        if h.static_entries:
            topo[f"static.{h.host_id}"] = "; ".join(f"{i} {m}" for i, m in h.static_entries)
    cp["topology"] = topo
    cp["mix"] = {c.value: str(s.mix.get(c, 0)) for c in AttackClass}
    cp["schedule"] = {"gap": _fmt_float(s.gap), "link_delay": _fmt_float(s.link_delay)}
    d = s.detector
    cp["detector"] = {
        "kind": d.kind,
        "clear_interval": _fmt_float(d.clear_interval),
        "fake_list_ttl": "none" if d.fake_list_ttl is None else _fmt_float(d.fake_list_ttl),
        "seed_static": "true" if d.seed_static else "false",
    }
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def _pair(text: str) -> tuple[IPv4Address, MacAddress]:
    parts = text.split()
    if len(parts) != 2:
        raise ScenarioError(f"expected '<ip> <mac>', got {text!r}")
    return ip(parts[0]), mac(parts[1])


def loads_scenario(text: str) -> Scenario:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
        for section in ("topology", "mix", "seed"):
            if section not in cp:
                raise ScenarioError(f"missing [{section}] section")
        t = cp["topology"]
        statics = {k[len("static."):]: v for k, v in t.items() if k.startswith("static.")}
        hosts = []
        for key, value in t.items():
            if key.startswith("host."):
                hid = key[len("host."):]
                h_ip, h_mac = _pair(value)
                st = tuple(_pair(x) for x in statics.get(hid, "").split(";") if x.strip())
                hosts.append(Host(hid, h_ip, h_mac, st))
        r_ip, r_mac = _pair(t["router"])
        topo = Topology(tuple(hosts), r_ip, r_mac, t["attacker"], IPv4Network(t.get("subnet", "192.169.1.0/24")))
        mix = {AttackClass.parse(k): int(v) for k, v in cp["mix"].items()}
        sched = cp["schedule"] if "schedule" in cp else {}
        det = cp["detector"] if "detector" in cp else {}
        ttl = det.get("fake_list_ttl", "none")
        detector = DetectorConfig(
            kind=det.get("kind", "clcc"),
            clear_interval=float(det.get("clear_interval", 600)),
            fake_list_ttl=None if ttl.strip().lower() in ("none", "") else float(ttl),
            seed_static=det.get("seed_static", "false").strip().lower() in ("1", "true", "yes", "on"),
        )
        label = cp["scenario"].get("label", "scenario") if "scenario" in cp else "scenario"
        return Scenario(
            seed=int(cp["seed"]["value"]),
            topology=topo,
            mix=mix,
            gap=float(sched.get("gap", 0.5)),
            link_delay=float(sched.get("link_delay", 0.001)),
            detector=detector,
            label=label,
        )
    except ScenarioError:
        raise
    except (configparser.Error, KeyError, ValueError) as exc:
        raise ScenarioError(f"bad scenario file: {exc}") from exc


def load_scenario(path: str | Path) -> Scenario:
    return loads_scenario(Path(path).read_text())


def save_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(dumps_scenario(s))
