from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from ipaddress import IPv4Address, IPv4Network

from .packet import MacAddress, ip, mac

ROUTER_ID = "router"

# Ethernet source the attacker stamps on forged frames (it owns its stack).
ATTACKER_ETH_MAC = mac("00:05:79:66:63:01")


@dataclass(frozen=True)
class Host:
    host_id: str
    ip: IPv4Address
    mac: MacAddress
    static_entries: tuple[tuple[IPv4Address, MacAddress], ...] = ()


@dataclass(frozen=True)
class Topology:
    hosts: tuple[Host, ...]
    router_ip: IPv4Address
    router_mac: MacAddress
    attacker_id: str
    subnet: IPv4Network = field(default=IPv4Network("192.169.1.0/24"))

    def __post_init__(self) -> None:
        ids = [h.host_id for h in self.hosts]
        ips = [h.ip for h in self.hosts] + [self.router_ip]
        macs = [h.mac for h in self.hosts] + [self.router_mac]
        if len(set(ids)) != len(ids) or ROUTER_ID in ids:
            raise ValueError("host ids must be unique and not 'router'")
        if len(set(ips)) != len(ips):
            raise ValueError("topology ips must be unique")
        if len(set(macs)) != len(macs):
            raise ValueError("topology macs must be unique")
        if self.attacker_id not in ids:
            raise ValueError(f"attacker {self.attacker_id!r} is not a topology host")

    def host(self, host_id: str) -> Host:
        for h in self.hosts:
            if h.host_id == host_id:
                return h
        raise KeyError(host_id)

    @cached_property
    def attacker(self) -> Host:
        return self.host(self.attacker_id)

    @cached_property
    def honest_hosts(self) -> tuple[Host, ...]:
        return tuple(h for h in self.hosts if h.host_id != self.attacker_id)

    def bindings(self) -> dict[IPv4Address, MacAddress]:
        out = {h.ip: h.mac for h in self.hosts}
        out[self.router_ip] = self.router_mac
        return out

    @cached_property
    def invalid_pool(self) -> tuple[IPv4Address, ...]:
        """Usable subnet addresses bound to no node: the pool of 'invalid' IPs."""
        bound = set(self.bindings())
        return tuple(a for a in self.subnet.hosts() if a not in bound)

    def unbound_subnet_ips(self) -> list[IPv4Address]:
        return list(self.invalid_pool)


def paper_topology() -> Topology:
    """Three hosts A, B, C on 192.169.1.0/24; router at 10.10.1.0; C is the attacker."""
    return Topology(
        hosts=(
            Host("A", ip("192.169.1.10"), mac("00:05:79:66:68:01")),
            Host("B", ip("192.169.1.11"), mac("00:05:79:66:68:02")),
            Host("C", ip("192.169.1.12"), mac("00:05:79:66:68:03")),
        ),
        router_ip=ip("10.10.1.0"),
        router_mac=mac("00:05:79:66:68:fe"),
        attacker_id="C",
    )
