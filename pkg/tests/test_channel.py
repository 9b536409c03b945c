import random
import socket
import threading

import pytest
from hypothesis import given, settings, strategies as st

from pqlab import channel, kyber
from pqlab.channel import Frame, FrameDecoder, FrameType, Phase
from pqlab.errors import AuthFailure, DomainError, ProtocolError, ReplayError

P = kyber.K512


@pytest.fixture(scope="module")
def keys():
    return channel.server_keys(P, random.Random(1), hybrid=True)


def pair(keys, mode, seed=0):
    c = channel.client_session(P, mode, random.Random(seed))
    s = channel.server_session(P, mode, keys, random.Random(seed + 1000))
    return c, s


@given(st.lists(st.tuples(st.sampled_from(list(FrameType)), st.binary(max_size=300)), max_size=6),
       st.lists(st.integers(1, 50), max_size=20))
def test_framing_survives_arbitrary_splits(frames, cuts):
    stream = b"".join(Frame(t, p).encode() for t, p in frames)
    dec = FrameDecoder()
    got, pos = [], 0
    for c in cuts:
        got += dec.feed(stream[pos:pos + c])
        pos += c
    got += dec.feed(stream[pos:])
    assert [(f.type, f.payload) for f in got] == frames
    assert dec.pending == 0


def test_frame_layout():
    raw = Frame(FrameType.HELLO, b"\x00512").encode()
    assert raw == bytes([FrameType.HELLO]) + (4).to_bytes(4, "big") + b"\x00512"


def test_decoder_rejects_unknown_type_and_oversize():
    with pytest.raises(ProtocolError):
        FrameDecoder().feed(b"\x09\x00\x00\x00\x00")
    with pytest.raises(ProtocolError):
        FrameDecoder().feed(bytes([FrameType.DATA]) + (channel.MAX_PAYLOAD + 1).to_bytes(4, "big"))


@pytest.mark.parametrize("mode", ["kem-only", "hybrid"])
def test_handshake_agrees(keys, mode):
    for seed in range(10):
        c, s = pair(keys, mode, seed)
        channel.loopback(c, s)
        assert c.phase == s.phase == Phase.ESTABLISHED
        assert c.shared_key == s.shared_key and len(c.shared_key) == 32


def test_different_runs_give_different_keys(keys):
    seen = set()
    for seed in range(10):
        c, s = pair(keys, "kem-only", seed)
        channel.loopback(c, s)
        seen.add(c.shared_key)
    assert len(seen) == 10


def _mutations(log, rng, payload_bits=40):
    """(frame index, bit) pairs: every header bit plus a sample of payload bits."""
    out = []
    for idx, (_, data) in enumerate(log):
        nbits = len(data) * 8
        out += [(idx, b) for b in range(min(nbits, channel.HEADER * 8 + 16))]
        out += [(idx, rng.randrange(channel.HEADER * 8, nbits)) for _ in range(payload_bits)]
    return out


@pytest.mark.parametrize("mode", ["kem-only", "hybrid"])
def test_bit_flips_never_yield_matching_keys(keys, mode):
    c, s = pair(keys, mode)
    honest_log = channel.loopback(c, s)
    honest = c.shared_key
    rng = random.Random(mode)
    for idx, bit in _mutations(honest_log, rng):
        c, s = pair(keys, mode)
        count = [0]

        def tamper(direction, data, idx=idx, bit=bit):
            i = count[0]
            count[0] += 1
            if i != idx:
                return data
            b = bytearray(data)
            b[bit // 8] ^= 1 << (bit % 8)
            return bytes(b)

        channel.loopback(c, s, tamper)
        aborted = Phase.FAILED in (c.phase, s.phase) or Phase.ESTABLISHED not in (c.phase, s.phase)
        if not aborted:
            assert c.shared_key != s.shared_key
        for sess in (c, s):
            if sess.phase == Phase.ESTABLISHED and sess.role == "server":
                assert sess.shared_key != honest


def test_records_round_trip_both_ways(keys):
    c, s = pair(keys, "hybrid")
    channel.loopback(c, s)
    for i in range(5):
        s.receive(c.seal(f"ping {i}".encode()))
        c.receive(s.seal(f"pong {i}".encode()))
    assert s.inbox == [f"ping {i}".encode() for i in range(5)]
    assert c.inbox == [f"pong {i}".encode() for i in range(5)]


def test_record_tamper_is_auth_failure(keys):
    c, s = pair(keys, "kem-only")
    channel.loopback(c, s)
    raw = bytearray(c.seal(b"attack at dawn"))
    raw[-20] ^= 0x01
    frame = FrameDecoder().feed(bytes(raw))[0]
    with pytest.raises(AuthFailure):
        s.open(frame)
    assert s.receive(bytes(raw)).startswith(bytes([FrameType.ALERT]))
    assert isinstance(s.error, AuthFailure) and s.phase == Phase.FAILED


def test_reflected_record_is_rejected(keys):
    # a client record bounced back to the client uses the wrong direction label
    c, s = pair(keys, "kem-only")
    channel.loopback(c, s)
    raw = c.seal(b"hello")
    with pytest.raises(AuthFailure):
        c.open(FrameDecoder().feed(raw)[0])


def test_replay_is_rejected(keys):
    c, s = pair(keys, "kem-only")
    channel.loopback(c, s)
    raw = c.seal(b"once")
    frame = FrameDecoder().feed(raw)[0]
    assert s.open(frame) == b"once"
    with pytest.raises(ReplayError):
        s.open(frame)


def test_data_before_handshake(keys):
    c, _ = pair(keys, "kem-only")
    with pytest.raises(ProtocolError):
        c.seal(b"early")


@pytest.mark.parametrize("client_mode,server_mode", [("kem-only", "hybrid"), ("hybrid", "kem-only")])
def test_mode_mismatch_aborts(keys, client_mode, server_mode):
    c = channel.client_session(P, client_mode, random.Random(0))
    s = channel.server_session(P, server_mode, keys, random.Random(1))
    channel.loopback(c, s)
    assert s.phase == Phase.FAILED and c.phase == Phase.FAILED


def test_params_mismatch_aborts(keys):
    c = channel.client_session(kyber.K768, "kem-only", random.Random(0))
    s = channel.server_session(P, "kem-only", keys, random.Random(1))
    channel.loopback(c, s)
    assert "params mismatch" in str(s.error)


def test_truncated_stream_fails(keys):
    c, s = pair(keys, "kem-only")
    s.receive(c.start()[:-2])
    s.eof()
    assert s.phase == Phase.FAILED


def test_session_validation():
    with pytest.raises(DomainError):
        channel.Session("observer", P, "kem-only", random.Random(0))
    with pytest.raises(DomainError):
        channel.Session("server", P, "kem-only", random.Random(0))
    with pytest.raises(DomainError):
        channel.client_session(P, "quantum", random.Random(0))


def test_over_real_sockets(keys):
    srv = socket.create_server(("127.0.0.1", 0))
    port = srv.getsockname()[1]
    received = []

    def serve():
        conn, _ = srv.accept()
        with conn:
            sess = channel.server_session(P, "hybrid", keys, random.Random(7))
            channel.run_handshake(conn, sess)
            received.extend(channel.receive_data(conn, sess))

    t = threading.Thread(target=serve)
    t.start()
    with socket.create_connection(("127.0.0.1", port)) as sock:
        sess = channel.client_session(P, "hybrid", random.Random(8))
        channel.run_handshake(sock, sess)
        channel.send_data(sock, sess, b"over the wire")
    t.join(timeout=10)
    srv.close()
    assert b"".join(received) == b"over the wire"


def test_record_in_same_read_as_last_handshake_frame(keys):
    c = channel.client_session(P, "kem-only", random.Random(3))
    hello = c.start()
    # PUBKEY does not depend on the server's rng, so a twin session can answer in advance
    twin = channel.server_session(P, "kem-only", keys, random.Random(4))
    encap = c.receive(twin.receive(hello))
    a, b = socket.socketpair()
    a.sendall(hello + encap + c.seal(b"early bird"))
    a.shutdown(socket.SHUT_WR)
    s = channel.server_session(P, "kem-only", keys, random.Random(4))
    channel.run_handshake(b, s)
    got = list(channel.receive_data(b, s))
    a.close()
    b.close()
    assert s.shared_key == c.shared_key
    assert got == [b"early bird"]
