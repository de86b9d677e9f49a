"""Ethernet II / ARP frame model and a bit-exact 42-byte wire codec.

Besides the standard request (1) and reply (2) opcodes, the codec carries two
alert opcodes used by the CLCC detector: 25 (broadcast alert) and 26 (unicast
alert to the router). Alerts reuse the ordinary 28-byte ARP body.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from ipaddress import IPv4Address
from typing import BinaryIO, Iterator

ETHERTYPE_ARP = 0x0806
HTYPE_ETHERNET = 1
PTYPE_IPV4 = 0x0800
HLEN = 6
PLEN = 4

OP_REQUEST = 1
OP_REPLY = 2
OP_BROADCAST_ALERT = 25
OP_UNICAST_ALERT = 26
OPCODES = frozenset({OP_REQUEST, OP_REPLY, OP_BROADCAST_ALERT, OP_UNICAST_ALERT})

FRAME_LEN = 42
_ETH = struct.Struct("!6s6sH")
_ARP = struct.Struct("!HHBBH6s4s6s4s")
_TRACE_TS = struct.Struct("<Q")

Ipv4Address = IPv4Address


class DecodeError(ValueError):
    """Base class for frames that cannot be decoded."""


class WrongLength(DecodeError):
    pass


class WrongEthertype(DecodeError):
    pass


class UnknownOpcode(DecodeError):
    pass


class BadFixedField(DecodeError):
    pass


@dataclass(frozen=True, order=True, slots=True)
class MacAddress:
    octets: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.octets, bytes) or len(self.octets) != 6:
            raise ValueError(f"MAC address needs 6 octets, got {self.octets!r}")

    @classmethod
    def parse(cls, text: str) -> MacAddress:
        """Parse ``aa:bb:cc:dd:ee:ff``; single-digit groups (``0:5:79:...``) are accepted."""
        parts = text.strip().replace("-", ":").split(":")
        if len(parts) != 6:
            raise ValueError(f"bad MAC address {text!r}")
        try:
            values = [int(p, 16) for p in parts]
        except ValueError:
            raise ValueError(f"bad MAC address {text!r}") from None
        if any(not 0 <= v <= 0xFF or not 1 <= len(p) <= 2 for v, p in zip(values, parts)):
            raise ValueError(f"bad MAC address {text!r}")
        return cls(bytes(values))

    @property
    def is_null(self) -> bool:
        return self.octets == b"\x00" * 6

    @property
    def is_broadcast(self) -> bool:
        return self.octets == b"\xff" * 6

    def __str__(self) -> str:
        return ":".join(f"{b:02x}" for b in self.octets)

    def __repr__(self) -> str:
        return f"MacAddress('{self}')"


NULL_MAC = MacAddress(b"\x00" * 6)
BROADCAST_MAC = MacAddress(b"\xff" * 6)
NULL_IP = IPv4Address(0)


def mac(text: str) -> MacAddress:
    return MacAddress.parse(text)


def ip(text: str) -> IPv4Address:
    return IPv4Address(text)


@dataclass(frozen=True, slots=True)
class EthernetHeader:
    dst: MacAddress
    src: MacAddress
    ethertype: int = ETHERTYPE_ARP

    def __post_init__(self) -> None:
        if self.ethertype != ETHERTYPE_ARP:
            raise ValueError(f"ethertype must be 0x0806, got {self.ethertype:#06x}")


@dataclass(frozen=True, slots=True)
class ArpMessage:
    opcode: int
    sender_mac: MacAddress
    sender_ip: IPv4Address
    target_mac: MacAddress
    target_ip: IPv4Address
    htype: int = HTYPE_ETHERNET
    ptype: int = PTYPE_IPV4
    hlen: int = HLEN
    plen: int = PLEN

    def __post_init__(self) -> None:
        if self.opcode not in OPCODES:
            raise ValueError(f"opcode {self.opcode} not in {sorted(OPCODES)}")
        if (self.htype, self.ptype, self.hlen, self.plen) != (HTYPE_ETHERNET, PTYPE_IPV4, HLEN, PLEN):
            raise ValueError("ARP fixed fields must be htype=1 ptype=0x0800 hlen=6 plen=4")


@dataclass(frozen=True, slots=True)
class Frame:
    eth: EthernetHeader
    arp: ArpMessage
    frame_id: int = field(default=0, compare=True)

    def __str__(self) -> str:
        a = self.arp
        return (
            f"#{self.frame_id} op={a.opcode} eth {self.eth.src}->{self.eth.dst} "
            f"arp {a.sender_ip}/{a.sender_mac} -> {a.target_ip}/{a.target_mac}"
        )


def make_frame(
    opcode: int,
    eth_src: MacAddress,
    eth_dst: MacAddress,
    sender: tuple[IPv4Address, MacAddress],
    target: tuple[IPv4Address, MacAddress],
    frame_id: int = 0,
) -> Frame:
    """Convenience constructor taking (ip, mac) pairs for both ARP parties."""
    return Frame(
        EthernetHeader(dst=eth_dst, src=eth_src),
        ArpMessage(
            opcode=opcode,
            sender_mac=sender[1],
            sender_ip=sender[0],
            target_mac=target[1],
            target_ip=target[0],
        ),
        frame_id,
    )


def encode_frame(f: Frame) -> bytes:
    a = f.arp
    return _ETH.pack(f.eth.dst.octets, f.eth.src.octets, f.eth.ethertype) + _ARP.pack(
        a.htype,
        a.ptype,
        a.hlen,
        a.plen,
        a.opcode,
        a.sender_mac.octets,
        a.sender_ip.packed,
        a.target_mac.octets,
        a.target_ip.packed,
    )


def decode_frame(data: bytes, frame_id: int = 0) -> Frame:
    """Inverse of :func:`encode_frame`.

    Checks run in wire order (length, ethertype, fixed fields, opcode), so any
    42-byte input yields either a frame or exactly one error.
    """
    if len(data) != FRAME_LEN:
        raise WrongLength(f"expected {FRAME_LEN} bytes, got {len(data)}")
    dst, src, ethertype = _ETH.unpack_from(data, 0)
    if ethertype != ETHERTYPE_ARP:
        raise WrongEthertype(f"ethertype {ethertype:#06x}")
    htype, ptype, hlen, plen, opcode, smac, sip, tmac, tip = _ARP.unpack_from(data, _ETH.size)
    if (htype, ptype, hlen, plen) != (HTYPE_ETHERNET, PTYPE_IPV4, HLEN, PLEN):
        raise BadFixedField(f"htype={htype} ptype={ptype:#06x} hlen={hlen} plen={plen}")
    if opcode not in OPCODES:
        raise UnknownOpcode(f"opcode {opcode}")
    return Frame(
        EthernetHeader(MacAddress(dst), MacAddress(src)),
        ArpMessage(opcode, MacAddress(smac), IPv4Address(sip), MacAddress(tmac), IPv4Address(tip)),
        frame_id,
    )


def is_cross_layer_consistent(f: Frame) -> bool:
    """True when the ARP sender MAC equals the Ethernet source MAC."""
    return f.arp.sender_mac == f.eth.src


# Trace files: repeated records of <u64 LE timestamp in ns><42-byte frame>.

def write_trace(out: BinaryIO, records: Iterator[tuple[int, Frame]]) -> int:
    n = 0
    for ts_ns, f in records:
        out.write(_TRACE_TS.pack(ts_ns))
        out.write(encode_frame(f))
        n += 1
    return n


def read_trace(src: BinaryIO) -> Iterator[tuple[int, Frame]]:
    size = _TRACE_TS.size + FRAME_LEN
    frame_id = 0
    while True:
        chunk = src.read(size)
        if not chunk:
            return
        if len(chunk) != size:
            raise WrongLength(f"truncated trace record ({len(chunk)} bytes)")
        (ts,) = _TRACE_TS.unpack_from(chunk, 0)
        yield ts, decode_frame(chunk[_TRACE_TS.size :], frame_id)
        frame_id += 1
