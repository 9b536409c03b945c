"""A KEM-secured byte channel (toy; no server authentication).

Wire format: 1-byte type, 4-byte big-endian length, payload.  Handshake::

    client -> HELLO   mode byte + params name
    server -> PUBKEY  Kyber public key [+ EC public key]
    client -> ENCAP   Kyber ciphertext [+ client EC public key]

Both sides then set ``key = SHAKE-256(kem secret [|| ecdh x] || H(transcript))``
where ``H`` is SHA3-256 over every handshake frame in order.  DATA frames
carry ``counter || ciphertext || tag``: the ciphertext is the plaintext XOR an
XOF keystream and the tag a 16-byte XOF MAC.  This record layer is a
teaching stand-in, not a production cipher.

Sessions are sans-IO: feed received bytes in, send whatever comes out.
"""

from __future__ import annotations

import enum
import hashlib
import hmac
import socket
from dataclasses import dataclass, field

from . import ecc, kyber
from .errors import AuthFailure, DomainError, PqlabError, ProtocolError, ReplayError
from .rng import xof

MAX_PAYLOAD = 1 << 20
HEADER = 5
TAG_BYTES = 16
COUNTER_BYTES = 8
KEY_BYTES = 32
EC_CURVE = "f65521"


class FrameType(enum.IntEnum):
    HELLO = 1
    PUBKEY = 2
    ENCAP = 3
    DATA = 4
    ALERT = 5


class Phase(enum.Enum):
    INIT = "init"
    AWAITING = "awaiting"
    ESTABLISHED = "established"
    FAILED = "failed"


MODES = {"kem-only": 0, "hybrid": 1}


@dataclass(frozen=True)
class Frame:
    type: FrameType
    payload: bytes

    def __post_init__(self):
        if len(self.payload) > MAX_PAYLOAD:
            raise ProtocolError(f"payload of {len(self.payload)} bytes exceeds {MAX_PAYLOAD}")

    def encode(self) -> bytes:
        return bytes([self.type]) + len(self.payload).to_bytes(4, "big") + self.payload


class FrameDecoder:
    """Reassembles frames from arbitrary chunks."""

    def __init__(self):
        self._buf = bytearray()

    def feed(self, data: bytes) -> list[Frame]:
        self._buf += data
        out = []
        while len(self._buf) >= HEADER:
            t = self._buf[0]
            length = int.from_bytes(self._buf[1:HEADER], "big")
            if t not in FrameType._value2member_map_:
                raise ProtocolError(f"unknown frame type {t}")
            if length > MAX_PAYLOAD:
                raise ProtocolError(f"declared length {length} exceeds {MAX_PAYLOAD}")
            if len(self._buf) < HEADER + length:
                break
            out.append(Frame(FrameType(t), bytes(self._buf[HEADER:HEADER + length])))
            del self._buf[:HEADER + length]
        return out

    @property
    def pending(self) -> int:
        return len(self._buf)


def _point_bytes(pt: ecc.CurvePoint) -> bytes:
    return pt.x.to_bytes(4, "big") + pt.y.to_bytes(4, "big")


def _point_from(data: bytes, curve: ecc.CurveParams) -> ecc.CurvePoint:
    if len(data) != 8:
        raise ProtocolError("EC public key must be 8 bytes")
    pt = ecc.CurvePoint(int.from_bytes(data[:4], "big"), int.from_bytes(data[4:], "big"))
    if not ecc.on_curve(pt, curve):
        raise ProtocolError("EC public key is not on the curve")
    return pt


@dataclass
class ServerKeys:
    kyber_pub: kyber.KyberPublicKey
    kyber_priv: kyber.KyberPrivateKey
    ec_priv: int | None = None
    ec_pub: ecc.CurvePoint | None = None


def server_keys(p: kyber.KyberParams, rng, hybrid: bool) -> ServerKeys:
    pub, priv = kyber.keygen(p, rng)
    if not hybrid:
        return ServerKeys(pub, priv)
    curve, G, order = ecc.preset(EC_CURVE)
    s, P = ecc.ecdh_keypair(G, order, curve, rng)
    return ServerKeys(pub, priv, s, P)


def derive_key(kem_secret: bytes, ecdh_x: int | None, transcript_hash: bytes) -> bytes:
    extra = b"" if ecdh_x is None else ecdh_x.to_bytes(4, "big")
    return xof(b"pqlab-channel" + kem_secret + extra + transcript_hash, KEY_BYTES)


@dataclass
class Session:
    role: str
    params: kyber.KyberParams
    mode: str
    rng: object = field(repr=False)
    keys: ServerKeys | None = field(default=None, repr=False)
    phase: Phase = Phase.INIT
    shared_key: bytes | None = field(default=None, repr=False)
    send_counter: int = 0
    recv_counter: int = -1
    error: PqlabError | None = None
    inbox: list = field(default_factory=list)

    def __post_init__(self):
        if self.role not in ("client", "server"):
            raise DomainError(f"unknown role {self.role!r}")
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}; have {sorted(MODES)}")
        if self.role == "server":
            if self.keys is None:
                raise DomainError("a server session needs keys")
            if self.mode == "hybrid" and self.keys.ec_pub is None:
                raise DomainError("hybrid mode needs an EC key pair")
        self._decoder = FrameDecoder()
        self._transcript = hashlib.sha3_256()

    # -- plumbing --------------------------------------------------------

    @property
    def direction(self) -> bytes:
        return b"c2s" if self.role == "client" else b"s2c"

    @property
    def peer_direction(self) -> bytes:
        return b"s2c" if self.role == "client" else b"c2s"

    def _emit(self, frame: Frame) -> bytes:
        raw = frame.encode()
        self._transcript.update(raw)
        return raw

    def _fail(self, err: PqlabError) -> bytes:
        self.phase = Phase.FAILED
        self.error = err
        return Frame(FrameType.ALERT, str(err).encode()[:256]).encode()

    def start(self) -> bytes:
        """Client only: the HELLO frame."""
        if self.role != "client" or self.phase != Phase.INIT:
            raise ProtocolError("only a fresh client starts a handshake")
        self.phase = Phase.AWAITING
        payload = bytes([MODES[self.mode]]) + self.params.name.encode()
        return self._emit(Frame(FrameType.HELLO, payload))

    def receive(self, data: bytes) -> bytes:
        """Consume bytes from the peer; return bytes to send back.

        Failures never raise here: the session moves to FAILED, records the
        error in ``.error`` and the returned bytes carry an ALERT.
        """
        if self.phase == Phase.FAILED:
            return b""
        out = b""
        try:
            for frame in self._decoder.feed(data):
                out += self._handle(frame)
                if self.phase == Phase.FAILED:
                    break
        except PqlabError as err:
            out += self._fail(err)
        return out

    def eof(self) -> None:
        """The peer closed the stream."""
        if self.phase != Phase.ESTABLISHED or self._decoder.pending:
            if self.phase != Phase.FAILED:
                self._fail(ProtocolError("stream closed mid-handshake or mid-frame"))

    def _handle(self, frame: Frame) -> bytes:
        if frame.type == FrameType.ALERT:
            raise ProtocolError("peer alert: " + frame.payload.decode(errors="replace"))
        if frame.type == FrameType.DATA:
            self.inbox.append(self.open(frame))
            return b""
        if self.phase == Phase.ESTABLISHED:
            raise ProtocolError(f"unexpected {frame.type.name} after the handshake")
        self._transcript.update(frame.encode())
        if self.role == "server":
            return self._server_step(frame)
        return self._client_step(frame)

    # -- handshake -------------------------------------------------------

    def _server_step(self, frame: Frame) -> bytes:
        if self.phase == Phase.INIT and frame.type == FrameType.HELLO:
            if len(frame.payload) < 1:
                raise ProtocolError("empty HELLO")
            mode_byte, name = frame.payload[0], frame.payload[1:]
            if mode_byte != MODES[self.mode]:
                raise ProtocolError("mode mismatch")
            if name != self.params.name.encode():
                raise ProtocolError(f"params mismatch: server runs {self.params.name}")
            payload = self.keys.kyber_pub.to_bytes()
            if self.mode == "hybrid":
                payload += _point_bytes(self.keys.ec_pub)
            self.phase = Phase.AWAITING
            return self._emit(Frame(FrameType.PUBKEY, payload))
        if self.phase == Phase.AWAITING and frame.type == FrameType.ENCAP:
            ct_len = (self.params.k + 1) * kyber.packed_size(self.params.n, self.params.q)
            data = frame.payload
            expect = ct_len + (8 if self.mode == "hybrid" else 0)
            if len(data) != expect:
                raise ProtocolError(f"ENCAP payload must be {expect} bytes")
            try:
                ct = kyber.KyberCiphertext.from_bytes(data[:ct_len], self.params)
            except DomainError as err:
                raise ProtocolError(f"bad ciphertext: {err}") from None
            secret = kyber.kem_decapsulate(self.keys.kyber_priv, ct)
            x = None
            if self.mode == "hybrid":
                curve, _, _ = ecc.preset(EC_CURVE)
                peer = _point_from(data[ct_len:], curve)
                x = ecc.ecdh_shared(self.keys.ec_priv, peer, curve).x
            self._establish(secret, x)
            return b""
        raise ProtocolError(f"unexpected {frame.type.name} in phase {self.phase.value}")

    def _client_step(self, frame: Frame) -> bytes:
        if self.phase == Phase.AWAITING and frame.type == FrameType.PUBKEY:
            p = self.params
            pk_len = (p.k * p.k + p.k) * kyber.packed_size(p.n, p.q)
            expect = pk_len + (8 if self.mode == "hybrid" else 0)
            if len(frame.payload) != expect:
                raise ProtocolError(f"PUBKEY payload must be {expect} bytes")
            try:
                pub = kyber.KyberPublicKey.from_bytes(frame.payload[:pk_len], p)
            except DomainError as err:
                raise ProtocolError(f"bad public key: {err}") from None
            secret, ct = kyber.kem_encapsulate(pub, self.rng)
            payload = ct.to_bytes()
            x = None
            if self.mode == "hybrid":
                curve, G, order = ecc.preset(EC_CURVE)
                server_pt = _point_from(frame.payload[pk_len:], curve)
                s, P = ecc.ecdh_keypair(G, order, curve, self.rng)
                x = ecc.ecdh_shared(s, server_pt, curve).x
                payload += _point_bytes(P)
            out = self._emit(Frame(FrameType.ENCAP, payload))
            self._establish(secret, x)
            return out
        raise ProtocolError(f"unexpected {frame.type.name} in phase {self.phase.value}")

    def _establish(self, secret: bytes, x: int | None):
        self.shared_key = derive_key(secret, x, self._transcript.digest())
        self.phase = Phase.ESTABLISHED

    # -- record layer ----------------------------------------------------

    def _keystream(self, direction: bytes, counter: int, n: int) -> bytes:
        return xof(b"ks" + self.shared_key + direction + counter.to_bytes(COUNTER_BYTES, "big"), n)

    def _tag(self, direction: bytes, counter: int, ct: bytes) -> bytes:
        return xof(b"tag" + self.shared_key + direction + counter.to_bytes(COUNTER_BYTES, "big") + ct, TAG_BYTES)

    def seal(self, plaintext: bytes) -> bytes:
        """Encrypt one DATA frame (encoded, ready to send)."""
        if self.phase != Phase.ESTABLISHED:
            raise ProtocolError("DATA before the handshake completed")
        c = self.send_counter
        ks = self._keystream(self.direction, c, len(plaintext))
        ct = bytes(a ^ b for a, b in zip(plaintext, ks))
        self.send_counter += 1
        payload = c.to_bytes(COUNTER_BYTES, "big") + ct + self._tag(self.direction, c, ct)
        return Frame(FrameType.DATA, payload).encode()

    def open(self, frame: Frame) -> bytes:
        """Authenticate, check the counter, decrypt."""
        if self.phase != Phase.ESTABLISHED:
            raise ProtocolError("DATA before the handshake completed")
        if frame.type != FrameType.DATA or len(frame.payload) < COUNTER_BYTES + TAG_BYTES:
            raise ProtocolError("malformed DATA frame")
        c = int.from_bytes(frame.payload[:COUNTER_BYTES], "big")
        ct, tag = frame.payload[COUNTER_BYTES:-TAG_BYTES], frame.payload[-TAG_BYTES:]
        if not hmac.compare_digest(tag, self._tag(self.peer_direction, c, ct)):
            raise AuthFailure("record authentication failed")
        if c <= self.recv_counter:
            raise ReplayError(f"counter {c} not above {self.recv_counter}")
        self.recv_counter = c
        ks = self._keystream(self.peer_direction, c, len(ct))
        return bytes(a ^ b for a, b in zip(ct, ks))


def client_session(p: kyber.KyberParams, mode: str, rng) -> Session:
    return Session("client", p, mode, rng)


def server_session(p: kyber.KyberParams, mode: str, keys: ServerKeys, rng) -> Session:
    return Session("server", p, mode, rng, keys)


# -- drivers --------------------------------------------------------------------

def loopback(client: Session, server: Session, tamper=None, max_steps: int = 16) -> list[tuple[str, bytes]]:
    """Run the handshake in memory.

    ``tamper(direction, chunk) -> chunk`` may rewrite bytes in flight.  Returns
    the (direction, bytes) log of what was delivered.
    """
    log = []
    outgoing = [("c2s", client.start())]
    steps = 0
    while outgoing and steps < max_steps:
        steps += 1
        direction, data = outgoing.pop(0)
        if not data:
            continue
        if tamper is not None:
            data = tamper(direction, data)
        log.append((direction, data))
        if direction == "c2s":
            reply = server.receive(data)
            if reply:
                outgoing.append(("s2c", reply))
        else:
            reply = client.receive(data)
            if reply:
                outgoing.append(("c2s", reply))
    for s in (client, server):
        if s.phase != Phase.ESTABLISHED:
            s.eof()
    return log


def _recv_some(sock: socket.socket) -> bytes:
    return sock.recv(65536)


def run_handshake(sock: socket.socket, session: Session) -> Session:
    """Drive ``session`` over a connected socket until it settles."""
    if session.role == "client":
        sock.sendall(session.start())
    while session.phase not in (Phase.ESTABLISHED, Phase.FAILED):
        data = _recv_some(sock)
        if not data:
            session.eof()
            break
        out = session.receive(data)
        if out:
            sock.sendall(out)
    if session.phase == Phase.FAILED:
        raise session.error
    return session


def send_data(sock: socket.socket, session: Session, plaintext: bytes) -> None:
    for i in range(0, max(len(plaintext), 1), MAX_PAYLOAD // 2):
        sock.sendall(session.seal(plaintext[i:i + MAX_PAYLOAD // 2]))


def receive_data(sock: socket.socket, session: Session):
    """Yield plaintexts until the peer closes the stream."""
    while True:
        # records may already have arrived in the same read as the last handshake frame
        while session.inbox:
            yield session.inbox.pop(0)
        data = _recv_some(sock)
        if not data:
            session.eof()
            if session.phase == Phase.FAILED:
                raise session.error
            return
        out = session.receive(data)
        if out:
            sock.sendall(out)
        if session.phase == Phase.FAILED:
            raise session.error
