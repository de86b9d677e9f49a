"""Ground-truth labels for injected frames: benign traffic and the eleven malicious packet classes."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class AttackClass(enum.Enum):
    Normal = "Normal"
    PKT1 = "PKT1"
    PKT2 = "PKT2"
    PKT3 = "PKT3"
    PKT4 = "PKT4"
    PKT5 = "PKT5"
    PKT6 = "PKT6"
    PKT7 = "PKT7"
    PKT8 = "PKT8"
    PKT9 = "PKT9"
    PKT10 = "PKT10"
    PKT11 = "PKT11"

    @property
    def abnormal(self) -> bool:
        return self is not AttackClass.Normal

    @classmethod
    def parse(cls, text: str) -> AttackClass:
        key = text.strip().replace("#", "").upper()
        for c in cls:
            if c.value.upper() == key:
                return c
        raise ValueError(f"unknown attack class {text!r}")

    def __str__(self) -> str:
        return self.value


ABNORMAL = tuple(c for c in AttackClass if c.abnormal)


@dataclass(frozen=True)
class ClassInfo:
    pattern: str
    packet_type: str
    party: str
    situation: str
    feature: str


# Per-class detection summary, used for report annotations.
CLASS_INFO: dict[AttackClass, ClassInfo] = {
    AttackClass.Normal: ClassInfo("(MAC_VAL,IP_VAL)", "ARP Request/Reply", "-", "benign", "-"),
    AttackClass.PKT1: ClassInfo(
        "(MAC_VAL,IP_INV)", "ARP Request", "Destination host",
        "victim still holds a conflicting binding for the IP (not yet cleared) or the pair is fake-listed",
        "cache and fake-list check",
    ),
    AttackClass.PKT2: ClassInfo(
        "(MAC_INV,IP_VAL)", "ARP Request", "Source host",
        "ARP sender MAC differs from the Ethernet source", "cross-layer check",
    ),
    AttackClass.PKT3: ClassInfo(
        "(MAC_VAL,IP_INV)", "ARP Request", "Source host",
        "owner of the claimed IP sees its address bound to another MAC", "own-binding check",
    ),
    AttackClass.PKT4: ClassInfo(
        "(MAC_INV,IP_VAL)", "ARP Reply", "Destination host",
        "ARP sender MAC differs from the Ethernet source", "cross-layer check",
    ),
    AttackClass.PKT5: ClassInfo(
        "(MAC_VAL,IP_INV)", "ARP Reply", "Destination host",
        "sender IP contradicts a known binding of the sender MAC", "cache and fake-list check",
    ),
    AttackClass.PKT6: ClassInfo(
        "(MAC_VAL,IP_INV)", "ARP Reply", "Source host",
        "reply sent to the victim's MAC names a different target IP", "target check on reception",
    ),
    AttackClass.PKT7: ClassInfo(
        "(MAC_INV,IP_VAL)", "Broadcast Alert Message", "Source host",
        "alert contradicts the static table (requires static entries)", "static-table check",
    ),
    AttackClass.PKT8: ClassInfo(
        "NULL MAC", "Broadcast Alert Message", "Source host",
        "alert carries the null MAC", "null-MAC check",
    ),
    AttackClass.PKT9: ClassInfo(
        "(MAC_INV,IP_VAL)", "Unicast Alert Message", "Source host",
        "ARP sender MAC differs from the Ethernet source", "cross-layer check",
    ),
    AttackClass.PKT10: ClassInfo(
        "(MAC_VAL,IP_INV)", "Unicast Alert Message", "Destination host",
        "alert is addressed to an IP other than the router's", "router IP check",
    ),
    AttackClass.PKT11: ClassInfo(
        "(MAC_VAL,IP_INV)", "Unicast Alert Message", "Source host",
        "sender binding is absent from the router cache", "router cache check",
    ),
}
