from __future__ import annotations

import io
import struct

import pytest
from hypothesis import given, strategies as st

from arpshield.packet import (
    BROADCAST_MAC,
    FRAME_LEN,
    NULL_MAC,
    OP_REPLY,
    OP_REQUEST,
    OPCODES,
    ArpMessage,
    BadFixedField,
    EthernetHeader,
    Frame,
    MacAddress,
    UnknownOpcode,
    WrongEthertype,
    WrongLength,
    decode_frame,
    encode_frame,
    ip,
    is_cross_layer_consistent,
    mac,
    make_frame,
    read_trace,
    write_trace,
)

A_MAC = mac("00:05:79:66:68:01")
B_MAC = mac("00:05:79:66:68:02")


def request() -> Frame:
    return make_frame(OP_REQUEST, A_MAC, BROADCAST_MAC, (ip("192.169.1.10"), A_MAC), (ip("192.169.1.11"), NULL_MAC))


def test_request_layout():
    raw = encode_frame(request())
    assert len(raw) == FRAME_LEN == 42
    assert raw[:6] == b"\xff" * 6
    assert raw[6:12] == A_MAC.octets
    assert raw[12:14] == b"\x08\x06"
    htype, ptype, hlen, plen, op = struct.unpack("!HHBBH", raw[14:22])
    assert (htype, ptype, hlen, plen, op) == (1, 0x0800, 6, 4, 1)
    assert raw[22:28] == A_MAC.octets
    assert raw[28:32] == bytes([192, 169, 1, 10])
    assert raw[32:38] == bytes(6)
    assert raw[38:42] == bytes([192, 169, 1, 11])


def test_alert_opcodes_encode_big_endian():
    f = make_frame(26, A_MAC, B_MAC, (ip("192.169.1.10"), A_MAC), (ip("10.10.1.0"), B_MAC))
    assert encode_frame(f)[20:22] == b"\x00\x1a"
    f = make_frame(25, A_MAC, BROADCAST_MAC, (ip("192.169.1.10"), A_MAC), (ip("10.10.1.0"), B_MAC))
    assert encode_frame(f)[20:22] == b"\x00\x19"


def test_mac_parsing_and_format():
    assert str(mac("0:5:79:66:68:1")) == "00:05:79:66:68:01"
    assert mac("FF:FF:FF:FF:FF:FF").is_broadcast
    assert NULL_MAC.is_null
    with pytest.raises(ValueError):
        mac("00:05:79:66:68")
    with pytest.raises(ValueError):
        MacAddress(b"\x00" * 5)


def test_constructors_reject_bad_fields():
    with pytest.raises(ValueError):
        EthernetHeader(A_MAC, B_MAC, 0x0800)
    with pytest.raises(ValueError):
        ArpMessage(3, A_MAC, ip("1.2.3.4"), B_MAC, ip("1.2.3.5"))


def test_decode_errors_in_check_order():
    raw = bytearray(encode_frame(request()))
    with pytest.raises(WrongLength):
        decode_frame(bytes(raw[:41]))
    with pytest.raises(WrongLength):
        decode_frame(bytes(raw) + b"\x00")
    bad = bytearray(raw)
    bad[12:14] = b"\x08\x00"
    bad[20:22] = b"\x00\x07"  # also a bad opcode; ethertype must win
    with pytest.raises(WrongEthertype):
        decode_frame(bytes(bad))
    bad = bytearray(raw)
    bad[18] = 8
    with pytest.raises(BadFixedField):
        decode_frame(bytes(bad))
    bad = bytearray(raw)
    bad[20:22] = b"\x00\x03"
    with pytest.raises(UnknownOpcode):
        decode_frame(bytes(bad))


def test_cross_layer_consistency():
    assert is_cross_layer_consistent(request())
    f = make_frame(OP_REPLY, B_MAC, A_MAC, (ip("192.169.1.11"), A_MAC), (ip("192.169.1.10"), A_MAC))
    assert not is_cross_layer_consistent(f)


macs = st.binary(min_size=6, max_size=6).map(MacAddress)
ips = st.integers(0, 2**32 - 1).map(lambda n: ip(".".join(str((n >> s) & 255) for s in (24, 16, 8, 0))))
frames = st.builds(
    lambda op, es, ed, smac, sip, tmac, tip: make_frame(op, es, ed, (sip, smac), (tip, tmac)),
    st.sampled_from(sorted(OPCODES)),
    macs,
    macs,
    macs,
    ips,
    macs,
    ips,
)


@given(frames)
def test_round_trip(f):
    assert decode_frame(encode_frame(f)) == f


def test_trace_round_trip():
    a = request()
    b = make_frame(OP_REPLY, B_MAC, A_MAC, (ip("192.169.1.11"), B_MAC), (ip("192.169.1.10"), A_MAC), frame_id=1)
    buf = io.BytesIO()
    write_trace(buf, iter([(0, a), (500_000_000, b)]))
    assert len(buf.getvalue()) == 2 * (8 + 42)
    buf.seek(0)
    got = list(read_trace(buf))
    assert [t for t, _ in got] == [0, 500_000_000]
    assert [encode_frame(f) for _, f in got] == [encode_frame(a), encode_frame(b)]


def test_truncated_trace_raises():
    buf = io.BytesIO()
    write_trace(buf, iter([(1, request())]))
    with pytest.raises(WrongLength):
        list(read_trace(io.BytesIO(buf.getvalue()[:-3])))
