"""Command-line entry point.

Exit codes: 0 success, 1 domain error, 2 usage error.  All randomness
derives from ``--seed`` (or ``$PQLAB_SEED``); each subcommand draws from its
own labelled stream.
"""

from __future__ import annotations

import argparse
import hashlib
import socket
import sys
from pathlib import Path

from . import agility, channel, dilithium, ecc, keyfile, kyber, lattice, modnum, rsa, shor
from .errors import PqlabError
from .polyring import RingElem
from .rng import SEED_ENV, default_seed, derive_rng


class Context:
    def __init__(self, args):
        self.args = args
        self.seed = args.seed
        self.trace = args.trace

    def rng(self, label: str):
        return derive_rng(self.seed, f"{self.args.command}:{label}")


def out(*parts) -> None:
    print(*parts)


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
        out(f"wrote {path}")
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise PqlabError(f"cannot read {path}: {err.strerror}") from None


# -- numtheory --------------------------------------------------------------------

def cmd_numtheory(ctx: Context) -> None:
    a = ctx.args
    op = a.op
    if op == "demo":
        cert = modnum.bezout(63, 17)
        out(f"gcd(63, 17) = {cert.g}; 63*({cert.x}) + 17*({cert.y}) = {cert.g}")
        out(f"certificate (-7, 26) holds: {cert.satisfied_by(-7, 26)}")
        out(f"mod_inverse(157, 2668) = {int(modnum.mod_inverse(157, 2668))}")
        out(f"(39*99 + 95*64) mod 19 = {int(modnum.mod_reduce(39 * 99 + 95 * 64, 19))}")
        out(f"129537 mod 9 = {int(modnum.mod_reduce(129537, 9))}")
        out(f"period(2, 5) = {modnum.period(2, 5)}")
        out(f"discrete_log(2, 5, 11) = {modnum.discrete_log(2, 5, 11)}")
        out(f"factorize(2668) = {modnum.factorize(2668)}")
        return
    v = a.values
    need = {"gcd": 2, "inverse": 2, "reduce": 2, "pow": 3, "period": 2, "dlog": 3, "factor": 1, "isprime": 1}[op]
    if len(v) != need:
        raise PqlabError(f"{op} takes {need} integer arguments")
    if op == "gcd":
        cert = modnum.bezout(*v)
        out(f"gcd = {cert.g}, x = {cert.x}, y = {cert.y}")
    elif op == "inverse":
        out(int(modnum.mod_inverse(*v)))
    elif op == "reduce":
        out(int(modnum.mod_reduce(*v)))
    elif op == "pow":
        out(int(modnum.mod_pow(*v)))
    elif op == "period":
        out(modnum.period(*v))
    elif op == "dlog":
        out(modnum.discrete_log(*v))
    elif op == "factor":
        out(modnum.factorize(*v))
    else:
        out("prime" if modnum.is_prime(*v) else "composite")


# -- rsa ------------------------------------------------------------------------

RSA_DEMO_TEXT = "ITS ALL GREEK TO ME"


def cmd_rsa(ctx: Context) -> None:
    a = ctx.args
    if a.op == "demo":
        pub, priv, tr = rsa.rsa_keygen_trace(47, 59, 157)
        out(f"p = {tr.p}, q = {tr.q}, n = {pub.n}, phi = {tr.phi}")
        out(f"private g = {priv.g}, public d = {pub.d}")
        msg = rsa.encode_text(RSA_DEMO_TEXT, pub.n)
        out(f"message: {RSA_DEMO_TEXT}")
        out(f"encoded: {msg}")
        ct = rsa.rsa_encrypt(msg, pub)
        for m, c in zip(msg.blocks, ct.blocks):
            out(f"  {m:0{msg.block_width}d} ^ {pub.d} mod {pub.n} = {c:0{msg.block_width}d}")
        out(f"ciphertext: {ct}")
        pt = rsa.rsa_decrypt(ct, priv)
        out(f"decrypted: {pt} -> {rsa.decode_text(pt)}")
        return
    if a.op == "keygen":
        pub, priv = rsa.rsa_keygen(a.p, a.q, a.g)
        _write_or_print(keyfile.dumps(pub), a.pub_out)
        _write_or_print(keyfile.dumps(priv), a.priv_out)
        return
    key = keyfile.loads(_read(a.key))
    if a.op == "encrypt":
        if not isinstance(key, rsa.RsaPublicKey):
            raise PqlabError("encrypt needs an RSA public key file")
        out(rsa.rsa_encrypt(rsa.encode_text(a.text, key.n), key))
    else:
        if not isinstance(key, rsa.RsaPrivateKey):
            raise PqlabError("decrypt needs an RSA private key file")
        width = rsa.block_width(key.n)
        blocks = tuple(int(b) for b in a.blocks)
        out(rsa.decode_text(rsa.rsa_decrypt(rsa.BlockMessage(blocks, width), key)))


# -- ecc --------------------------------------------------------------------------

def cmd_ecc(ctx: Context) -> None:
    a = ctx.args
    if a.op == "points":
        curve = ecc.CurveParams(a.p, a.a, a.b)
        pts = ecc.enumerate_points(curve)
        out(f"{curve}: {len(pts)} points including N")
        if len(pts) <= a.limit:
            out(" ".join(str(p) for p in pts))
        return
    curve, G, order = ecc.preset(a.curve)
    rng = ctx.rng("demo")
    out(f"curve {curve}, G = {G}, order {order}")
    sa, Pa = ecc.ecdh_keypair(G, order, curve, rng)
    sb, Pb = ecc.ecdh_keypair(G, order, curve, rng)
    ka, kb = ecc.ecdh_shared(sa, Pb, curve), ecc.ecdh_shared(sb, Pa, curve)
    out(f"alice: s = {sa}, P = G^s = {Pa}")
    out(f"bob:   s = {sb}, P = G^s = {Pb}")
    out(f"shared: alice {ka}, bob {kb}, equal = {ka == kb}")
    digest = int.from_bytes(hashlib.sha3_256(a.message.encode()).digest(), "big")
    sig = ecc.ecdsa_sign(digest, sa, G, order, curve, rng)
    out(f"ecdsa({a.message!r}) = {sig}, verifies = {ecc.ecdsa_verify(digest, sig, Pa, G, order, curve)}")
    m = 1
    M = ecc.embed_message(m, curve)
    ct = ecc.elgamal_encrypt(M, Pb, G, order, curve, rng)
    x = ecc.elgamal_decrypt(ct, sb, curve)
    out(f"elgamal: m = {m} -> M = {M} -> ({ct[0]}, {ct[1]}) -> x = {x} -> m = {x // 64}")


# -- shor -------------------------------------------------------------------------

def cmd_shor(ctx: Context) -> None:
    a = ctx.args
    if a.op == "dist":
        dist = shor.simulate_quantum_part(a.a, a.n, a.method)
        out(f"a = {a.a}, n = {a.n}, N = {dist.N}, total = {dist.probs.sum():.12f}")
        order = sorted(dist.support(), key=lambda y: (-dist.probs[y], y))[: a.top]
        for y in sorted(order):
            out(f"y = {y}: {dist.probs[y]:.9f}")
        return
    n = 15 if a.op == "demo" else a.n
    try:
        d, trace = shor.shor_factor(n, ctx.rng("factor"), a.max_rounds, a.method)
    except PqlabError as err:
        if getattr(err, "trace", None) is not None and ctx.trace:
            for line in err.trace.lines():
                out(line)
        raise
    if ctx.trace or a.op == "demo":
        for line in trace.lines():
            out(line)
    out(f"{n} = {d} * {n // d}")


# -- lattice ----------------------------------------------------------------------

def _parse_vector(text: str):
    return [lattice._num(t) for t in text.replace(",", " ").split()]


def cmd_lattice(ctx: Context) -> None:
    a = ctx.args
    if a.op == "ggh":
        rng = ctx.rng("ggh")
        good = lattice.random_good_basis(a.dim, rng)
        while True:
            try:
                keys = lattice.ggh_keygen(good, lattice.random_unimodular(a.dim, rng, 8))
                break
            except PqlabError:
                continue
        out(f"private basis (defect {lattice.defect(keys.private):.4f}):")
        out(str(keys.private))
        out(f"public basis (defect {lattice.defect(keys.public):.4f}):")
        out(str(keys.public))
        out(f"decryption radius {lattice.decryption_radius(keys.private)}")
        m = tuple(rng.randint(-5, 5) for _ in range(a.dim))
        e = tuple(rng.randint(-1, 1) for _ in range(a.dim))
        c = lattice.ggh_encrypt(m, keys.public, e)
        out(f"m = {m}, e = {e}, c = {c}")
        out(f"decrypted = {lattice.ggh_decrypt(c, keys)}")
        return
    if a.op == "lwe":
        rng = ctx.rng("lwe")
        inst = lattice.lwe_generate(a.dim, a.q, a.error_bound, rng)
        M, ok = lattice.lwe_embed(inst)
        out(f"A = {inst.A}")
        out(f"s = {inst.s}, e = {inst.e}, t = {inst.t}")
        out("(A | E | -t) =")
        for row in M:
            out("  " + " ".join(str(x) for x in row))
        out(f"witness (s, e, 1) in kernel mod {inst.q}: {ok}")
        exact = lattice.gauss_solve(inst.A, [(x - y) % inst.q for x, y in zip(inst.t, inst.e)], inst.q)
        noisy = lattice.gauss_solve(inst.A, inst.t, inst.q)
        out(f"elimination on A s = t - e: {exact}; on A s = t: {noisy}")
        return
    B = lattice.parse_basis(_read(a.basis))
    if a.op == "defect":
        out(f"{lattice.defect(B):.9f}")
    elif a.op == "svp":
        v = lattice.svp_bruteforce(B, a.bound)
        out(f"{' '.join(map(str, v))}  (norm^2 = {sum(x * x for x in v)})")
    elif a.op == "cvp":
        w = _parse_vector(a.target)
        v = lattice.cvp_bruteforce(B, w, a.bound)
        out(" ".join(map(str, v)))
    elif a.op == "sivp":
        out(str(lattice.sivp_bruteforce(B)))


# -- kyber ------------------------------------------------------------------------

def _show(e: RingElem) -> str:
    return f"{e.show()}  [centered {e.show(centered=True)}]"


def _kyber_toy_demo(trace: bool) -> None:
    tr = kyber.run_toy_example()
    pub_vals = kyber.PUBLISHED_TOY_VALUES
    n, q = kyber.TOY.n, kyber.TOY.q

    def agree(printed: str, computed: RingElem) -> str:
        return "match" if RingElem.parse(printed, n, q) == computed else "DIFFERS"

    out("toy parameters n = 4, q = 7, k = 2; message 1001")
    rows = [
        ("t[0]", pub_vals["t"][0], tr.t[0]),
        ("t[1]", pub_vals["t"][1], tr.t[1]),
        ("u[0]", pub_vals["u"][0], tr.u[0]),
        ("u[1]", pub_vals["u"][1], tr.u[1]),
        ("v", pub_vals["v"], tr.v),
        ("m_hat", pub_vals["m_hat"], tr.m_hat),
        ("rho(m_hat)", pub_vals["rho"], tr.rho),
    ]
    if trace:
        out(f"{'value':<11} {'published':<22} {'computed':<40} status")
        for name, printed, computed in rows:
            out(f"{name:<11} {printed:<22} {_show(computed):<40} {agree(printed, computed)}")
        out(f"scaled message: {tr.m_scaled}")
        out(f"noise e^T r + e2 - s^T e1 = {tr.noise.show(centered=True)}")
        out(f"check m_hat = scaled message + noise: {tr.m_hat == tr.m_scaled + tr.noise}")
    out(f"decrypted: {tr.decrypted} (sent 1001) -> {'ok' if tr.decrypted == '1001' else 'FAILED'}")


def cmd_kyber(ctx: Context) -> None:
    a = ctx.args
    p = kyber.params(a.params)
    if a.op == "demo":
        if p.name == "toy":
            _kyber_toy_demo(ctx.trace)
            return
        rng = ctx.rng("demo")
        pub, priv = kyber.keygen(p, rng)
        shared, ct = kyber.kem_encapsulate(pub, rng)
        back = kyber.kem_decapsulate(priv, ct)
        out(f"params {p.name}: n = {p.n}, q = {p.q}, k = {p.k}, eta = {p.eta}, lattice rank k*n = {p.k * p.n}")
        out(f"public key {len(pub.to_bytes())} bytes, ciphertext {len(ct.to_bytes())} bytes")
        out(f"encapsulated {shared.hex()}")
        out(f"decapsulated {back.hex()}")
        out(f"agree = {shared == back}")
        return
    if a.op == "keygen":
        pub, priv = kyber.keygen(p, ctx.rng("keygen"))
        _write_or_print(keyfile.dumps(pub), a.pub_out)
        _write_or_print(keyfile.dumps(priv), a.priv_out)
    elif a.op == "encrypt":
        pub = keyfile.loads(_read(a.pub))
        if not isinstance(pub, kyber.KyberPublicKey):
            raise PqlabError("encrypt needs a Kyber public key file")
        ct = kyber.encrypt(pub, a.bits, kyber.sample_randomness(pub.params, ctx.rng("encrypt")))
        _write_or_print(keyfile.dumps(ct), a.out)
    elif a.op == "decrypt":
        priv = keyfile.loads(_read(a.priv))
        ct = keyfile.loads(_read(a.ct))
        if not isinstance(priv, kyber.KyberPrivateKey) or not isinstance(ct, kyber.KyberCiphertext):
            raise PqlabError("decrypt needs a Kyber private key and ciphertext file")
        out(kyber.decrypt(priv, ct))


# -- dilithium ------------------------------------------------------------------------

def cmd_dilithium(ctx: Context) -> None:
    a = ctx.args
    p = dilithium.params(a.level)
    if a.op == "demo":
        rng = ctx.rng("demo")
        pub, priv = dilithium.keygen(p, rng)
        msg = a.message.encode()
        sig = dilithium.sign(priv, pub, msg, rng)
        cc = sig.c.centered()
        out(f"level {p.name}: n = {p.n}, q = {p.q}, (m, k) = ({p.m}, {p.k}), h = {p.h}")
        out(f"challenge positions {[i for i, x in enumerate(cc) if x]}")
        out(f"challenge signs     {[x for x in cc if x]}")
        out(f"extra signing attempts: {sig.retries}")
        out(f"signature digest {hashlib.sha3_256(sig.to_bytes()).hexdigest()}")
        out(f"verify({a.message!r}) = {dilithium.verify(pub, msg, sig)}")
        out(f"verify({a.message + '!'!r}) = {dilithium.verify(pub, msg + b'!', sig)}")
        return
    if a.op == "keygen":
        pub, priv = dilithium.keygen(p, ctx.rng("keygen"))
        _write_or_print(keyfile.dumps(pub), a.pub_out)
        _write_or_print(keyfile.dumps(priv), a.priv_out)
        return
    pub = keyfile.loads(_read(a.pub))
    if not isinstance(pub, dilithium.DilithiumPublicKey):
        raise PqlabError("needs a Dilithium public key file")
    if a.op == "sign":
        priv = keyfile.loads(_read(a.priv))
        sig = dilithium.sign(priv, pub, a.message.encode(), ctx.rng("sign"))
        _write_or_print(keyfile.write_keyfile(keyfile.signature_keyfile(sig, pub.params)), a.out)
    else:
        sig = keyfile.loads(_read(a.sig))
        ok = dilithium.verify(pub, a.message.encode(), sig)
        out("valid" if ok else "invalid")
        if not ok:
            raise PqlabError("signature rejected")


# -- hybrid / mosca -----------------------------------------------------------------

def cmd_hybrid(ctx: Context) -> None:
    a = ctx.args
    reg = agility.default_registry()
    rng = ctx.rng("hybrid")
    pubs, privs = {}, {}
    for sid in (a.classical, a.pq):
        pubs[sid], privs[sid] = reg.lookup(sid).keygen(rng)
    msg = a.message.encode()
    hs = agility.hybrid_sign(msg, a.classical, a.pq, a.mode, reg, privs, rng)
    out(f"mode {hs.mode}")
    for sid, sig in hs.parts:
        out(f"  {sid}: {len(sig)} bytes, sha3-256 {hashlib.sha3_256(sig).hexdigest()[:16]}")
    out(f"verify(message) = {agility.hybrid_verify(msg, hs, reg, pubs)}")
    out(f"verify(message + '!') = {agility.hybrid_verify(msg + b'!', hs, reg, pubs)}")


def cmd_mosca(ctx: Context) -> None:
    a = ctx.args
    if a.scenarios:
        rows = agility.SCENARIOS
    else:
        if None in (a.migrate, a.confi, a.crqc):
            raise PqlabError("give --migrate, --confi and --crqc, or --scenarios")
        rows = (("input", a.migrate, a.confi, a.crqc),)
    for label, mig, conf, crqc in rows:
        v = agility.mosca_evaluate(agility.MoscaInput(mig, conf, crqc))
        out(f"{label}: migrate {mig} + confi {conf} vs crqc {crqc} -> slack {v.slack:g}, {v.label}")


# -- serve / connect ------------------------------------------------------------------

def cmd_serve(ctx: Context) -> None:
    a = ctx.args
    p = kyber.params(a.params)
    mode = "hybrid" if a.hybrid else "kem-only"
    rng = ctx.rng("serve")
    keys = channel.server_keys(p, rng, a.hybrid)
    with socket.create_server((a.host, a.port)) as srv:
        out(f"listening on {a.host}:{srv.getsockname()[1]} ({mode}, params {p.name})")
        sys.stdout.flush()
        for _ in range(a.connections):
            conn, _ = srv.accept()
            with conn:
                session = channel.server_session(p, mode, keys, rng)
                channel.run_handshake(conn, session)
                for msg in channel.receive_data(conn, session):
                    sys.stdout.write(msg.decode(errors="replace"))
                    sys.stdout.flush()


def cmd_connect(ctx: Context) -> None:
    a = ctx.args
    p = kyber.params(a.params)
    mode = "hybrid" if a.hybrid else "kem-only"
    with socket.create_connection((a.host, a.port)) as sock:
        session = channel.client_session(p, mode, ctx.rng("connect"))
        channel.run_handshake(sock, session)
        data = a.message.encode() if a.message is not None else sys.stdin.buffer.read()
        channel.send_data(sock, session, data)
    print(f"sent {len(data)} bytes", file=sys.stderr)


def cmd_report(ctx: Context) -> None:
    from .report import write_report

    seed = ctx.seed if ctx.seed is not None else 0
    for f in write_report(ctx.args.out, seed):
        out(f)


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pqlab", description="Desk-scale classical and post-quantum cryptography.")
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                    help=f"seed for all randomness (default: ${SEED_ENV}, else fresh entropy)")
    ap.add_argument("--trace", action="store_true", help="print intermediate values")
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("numtheory", help="modular arithmetic")
    p.add_argument("op", choices=["demo", "gcd", "inverse", "reduce", "pow", "period", "dlog", "factor", "isprime"])
    p.add_argument("values", nargs="*", type=int)

    p = sub.add_parser("rsa", help="textbook RSA")
    s = p.add_subparsers(dest="op", metavar="op")
    s.required = True
    s.add_parser("demo")
    k = s.add_parser("keygen")
    k.add_argument("--p", type=int, required=True)
    k.add_argument("--q", type=int, required=True)
    k.add_argument("--g", type=int, required=True, help="private exponent")
    k.add_argument("--pub-out")
    k.add_argument("--priv-out")
    e = s.add_parser("encrypt")
    e.add_argument("--key", required=True)
    e.add_argument("--text", required=True)
    d = s.add_parser("decrypt")
    d.add_argument("--key", required=True)
    d.add_argument("blocks", nargs="+")

    p = sub.add_parser("ecc", help="elliptic curves")
    s = p.add_subparsers(dest="op", metavar="op")
    s.required = True
    d = s.add_parser("demo")
    d.add_argument("--curve", default="f97", choices=sorted(ecc.PRESETS))
    d.add_argument("--message", default="hello")
    pts = s.add_parser("points")
    pts.add_argument("--p", type=int, required=True)
    pts.add_argument("--a", type=int, required=True)
    pts.add_argument("--b", type=int, required=True)
    pts.add_argument("--limit", type=int, default=200)

    p = sub.add_parser("shor", help="Shor's algorithm, simulated")
    s = p.add_subparsers(dest="op", metavar="op")
    s.required = True
    for name in ("demo", "factor"):
        f = s.add_parser(name)
        if name == "factor":
            f.add_argument("n", type=int)
        f.add_argument("--max-rounds", type=int, default=64)
        f.add_argument("--method", choices=["auto", "dft", "geometric"], default="auto")
    d = s.add_parser("dist")
    d.add_argument("a", type=int)
    d.add_argument("n", type=int)
    d.add_argument("--top", type=int, default=16)
    d.add_argument("--method", choices=["auto", "dft", "geometric"], default="auto")

    p = sub.add_parser("lattice", help="lattice problems, GGH and LWE")
    s = p.add_subparsers(dest="op", metavar="op")
    s.required = True
    for name in ("defect", "svp", "cvp", "sivp"):
        f = s.add_parser(name)
        f.add_argument("basis", help="file with one integer row per basis vector")
        if name in ("svp", "cvp"):
            f.add_argument("--bound", type=int, default=8)
        if name == "cvp":
            f.add_argument("--target", required=True)
    g = s.add_parser("ggh")
    g.add_argument("--dim", type=int, default=2)
    lw = s.add_parser("lwe")
    lw.add_argument("--dim", type=int, default=4)
    lw.add_argument("--q", type=int, default=97)
    lw.add_argument("--error-bound", type=int, default=1)

    p = sub.add_parser("kyber", help="module-LWE encryption and KEM")
    s = p.add_subparsers(dest="op", metavar="op")
    s.required = True
    for name in ("demo", "keygen", "encrypt", "decrypt"):
        f = s.add_parser(name)
        f.add_argument("--params", default="toy" if name == "demo" else "512", choices=sorted(kyber.PRESETS))
        f.add_argument("--trace", action="store_true", default=argparse.SUPPRESS)
        if name == "keygen":
            f.add_argument("--pub-out")
            f.add_argument("--priv-out")
        elif name == "encrypt":
            f.add_argument("--pub", required=True)
            f.add_argument("--bits", required=True)
            f.add_argument("--out")
        elif name == "decrypt":
            f.add_argument("--priv", required=True)
            f.add_argument("--ct", required=True)

    p = sub.add_parser("dilithium", help="lattice signatures")
    s = p.add_subparsers(dest="op", metavar="op")
    s.required = True
    for name in ("demo", "keygen", "sign", "verify"):
        f = s.add_parser(name)
        f.add_argument("--level", default="2", choices=sorted(dilithium.PRESETS))
        if name == "keygen":
            f.add_argument("--pub-out")
            f.add_argument("--priv-out")
        if name in ("sign", "verify"):
            f.add_argument("--pub", required=True)
        if name == "sign":
            f.add_argument("--priv", required=True)
            f.add_argument("--out")
        if name == "verify":
            f.add_argument("--sig", required=True)
        if name != "keygen":
            f.add_argument("--message", default="hello" if name == "demo" else None, required=name != "demo")

    p = sub.add_parser("hybrid", help="hybrid classical + post-quantum signatures")
    p.add_argument("--mode", choices=list(agility.MODES), default="c-then-q")
    p.add_argument("--classical", choices=["ecdsa", "rsa"], default="ecdsa")
    p.add_argument("--pq", choices=["dilithium"], default="dilithium")
    p.add_argument("--message", default="hello")

    p = sub.add_parser("mosca", help="Mosca's inequality")
    p.add_argument("--migrate", type=float)
    p.add_argument("--confi", type=float)
    p.add_argument("--crqc", type=float)
    p.add_argument("--scenarios", action="store_true", help="evaluate the built-in scenario rows")

    for name in ("serve", "connect"):
        p = sub.add_parser(name, help="KEM-secured channel " + ("server" if name == "serve" else "client"))
        p.add_argument("--host", default="127.0.0.1")
        p.add_argument("--port", type=int, default=0 if name == "serve" else None, required=name == "connect")
        p.add_argument("--params", default="512", choices=[k for k in kyber.PRESETS if k != "toy"])
        p.add_argument("--hybrid", action="store_true")
        if name == "serve":
            p.add_argument("--connections", type=int, default=1)
        else:
            p.add_argument("--message", help="send this instead of stdin")

    p = sub.add_parser("report", help="write figures and CSV tables")
    p.add_argument("--out", default="report")
    return ap


COMMANDS = {
    "numtheory": cmd_numtheory, "rsa": cmd_rsa, "ecc": cmd_ecc, "shor": cmd_shor,
    "lattice": cmd_lattice, "kyber": cmd_kyber, "dilithium": cmd_dilithium,
    "hybrid": cmd_hybrid, "mosca": cmd_mosca, "serve": cmd_serve, "connect": cmd_connect,
    "report": cmd_report,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is None:
        try:
            args.seed = default_seed()
        except ValueError:
            print(f"error: ${SEED_ENV} is not an integer", file=sys.stderr)
            return 2
    ctx = Context(args)
    try:
        COMMANDS[args.command](ctx)
    except PqlabError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())
