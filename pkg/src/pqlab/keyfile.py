"""Text key, ciphertext and signature files.

::

    scheme: kyber
    kind: public
    params: toy
    n: 4
    q: 7
    k: 2
    A[0][0]: 4 5 0 4
    ...
    t[1]: 4 3 3 4

Header lines come first, then named fields holding whitespace-separated
integers.  Polynomials are listed in ascending degree.  Parsing validates
every field against the scheme's parameters and reports the offending line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import dilithium, ecc, kyber, rsa
from .errors import DomainError, KeyFileError
from .polyring import RingElem, RingMat, RingVec

HEADER_KEYS = ("scheme", "kind", "params", "n", "q", "k", "m", "curve")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\[\d+\])*$")

# scheme -> kind -> field layout, given the parsed header
KINDS = {
    "rsa": ("public", "private"),
    "ecc": ("public", "private"),
    "kyber": ("public", "private", "ciphertext"),
    "dilithium": ("public", "private", "signature"),
}


@dataclass
class KeyFile:
    scheme: str
    kind: str
    header: dict[str, str] = field(default_factory=dict)
    fields: dict[str, list[int]] = field(default_factory=dict)


def write_keyfile(kf: KeyFile) -> str:
    lines = [f"scheme: {kf.scheme}", f"kind: {kf.kind}"]
    for key in HEADER_KEYS[2:]:
        if key in kf.header:
            lines.append(f"{key}: {kf.header[key]}")
    for name, values in kf.fields.items():
        lines.append(f"{name}: " + " ".join(str(v) for v in values))
    return "\n".join(lines) + "\n"


def parse_keyfile(text: str) -> KeyFile:
    header: dict[str, str] = {}
    fields: dict[str, list[int]] = {}
    where: dict[str, int] = {}
    last = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        last = lineno
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise KeyFileError(f"expected 'name: values', got {line!r}", lineno)
        name, _, rest = line.partition(":")
        name, rest = name.strip(), rest.strip()
        if name in HEADER_KEYS:
            if fields:
                raise KeyFileError(f"header {name!r} after data fields", lineno)
            if name in header:
                raise KeyFileError(f"duplicate header {name!r}", lineno)
            header[name] = rest
            where[name] = lineno
            continue
        if not _NAME.match(name):
            raise KeyFileError(f"bad field name {name!r}", lineno)
        if name in fields:
            raise KeyFileError(f"duplicate field {name!r}", lineno)
        try:
            fields[name] = [int(tok) for tok in rest.split()]
        except ValueError:
            raise KeyFileError(f"field {name!r} must hold integers", lineno) from None
        where[name] = lineno
    end = last + 1
    scheme = header.get("scheme")
    if scheme is None:
        raise KeyFileError("missing 'scheme:' header", where.get("scheme", end))
    if scheme not in KINDS:
        raise KeyFileError(f"unknown scheme {scheme!r}", where["scheme"])
    kind = header.get("kind")
    if kind not in KINDS[scheme]:
        raise KeyFileError(f"scheme {scheme} has no kind {kind!r}", where.get("kind", end))
    kf = KeyFile(scheme, kind, {k: v for k, v in header.items() if k not in ("scheme", "kind")}, fields)
    _validate(kf, where, end)
    return kf


def _layout(kf: KeyFile, where, end) -> dict[str, int | None]:
    """Expected field name -> coefficient count (None for scalars)."""
    h = kf.header

    def num(key):
        try:
            return int(h[key])
        except KeyError:
            raise KeyFileError(f"missing '{key}:' header", end) from None
        except ValueError:
            raise KeyFileError(f"header {key!r} must be an integer", where[key]) from None

    if kf.scheme == "rsa":
        num("n")
        return {"d": None} if kf.kind == "public" else {"g": None}
    if kf.scheme == "ecc":
        return {"x": None, "y": None} if kf.kind == "public" else {"s": None}
    n, q, k = num("n"), num("q"), num("k")
    if kf.scheme == "kyber":
        if kf.kind == "public":
            out = {f"A[{i}][{j}]": n for i in range(k) for j in range(k)}
            out.update({f"t[{i}]": n for i in range(k)})
        elif kf.kind == "private":
            out = {f"s[{i}]": n for i in range(k)}
        else:
            out = {f"u[{i}]": n for i in range(k)}
            out["v"] = n
        return out
    m = num("m")
    if kf.kind == "public":
        out = {f"A[{i}][{j}]": n for i in range(m) for j in range(k)}
        out.update({f"t[{i}]": n for i in range(m)})
    elif kf.kind == "private":
        out = {f"s[{i}]": n for i in range(k)}
    else:
        out = {f"r2[{i}]": n for i in range(k)}
        out["c_pos"] = None
        out["c_sign"] = None
    return out


def _validate(kf: KeyFile, where, end) -> None:
    layout = _layout(kf, where, end)
    q = int(kf.header["q"]) if "q" in kf.header else None
    for name in kf.fields:
        if name not in layout:
            raise KeyFileError(f"unexpected field {name!r}", where[name])
    for name, count in layout.items():
        if name not in kf.fields:
            raise KeyFileError(f"missing field {name!r} (file truncated?)", end)
        values = kf.fields[name]
        if count is None:
            if name in ("c_pos", "c_sign"):
                continue
            if len(values) != 1:
                raise KeyFileError(f"field {name!r} holds one integer", where[name])
            continue
        if len(values) != count:
            raise KeyFileError(f"field {name!r} needs {count} coefficients, got {len(values)}", where[name])
        bad = [v for v in values if not 0 <= v < q]
        if bad:
            raise KeyFileError(f"coefficient {bad[0]} outside [0, {q})", where[name])
    if kf.scheme == "dilithium" and kf.kind == "signature":
        _check_params(kf, where)
        n, h = int(kf.header["n"]), dilithium.params(kf.header["params"]).h
        pos, sgn = kf.fields["c_pos"], kf.fields["c_sign"]
        if len(pos) != h or len(sgn) != h or len(set(pos)) != h:
            raise KeyFileError(f"challenge needs {h} distinct positions and signs", where["c_pos"])
        if any(not 0 <= p < n for p in pos) or any(s not in (-1, 1) for s in sgn):
            raise KeyFileError("challenge positions or signs out of range", where["c_pos"])
    _check_params(kf, where)


def _check_params(kf: KeyFile, where) -> None:
    if kf.scheme == "ecc":
        try:
            curve, _, order = ecc.preset(kf.header.get("curve", ""))
        except DomainError:
            raise KeyFileError(f"unknown curve {kf.header.get('curve')!r}", where.get("curve")) from None
        if kf.kind == "public":
            pt = ecc.CurvePoint(kf.fields["x"][0], kf.fields["y"][0])
            if not ecc.on_curve(pt, curve):
                raise KeyFileError("public point is not on the curve", where["x"])
        elif not 0 < kf.fields["s"][0] < order:
            raise KeyFileError("private scalar out of range", where["s"])
        return
    if kf.scheme not in ("kyber", "dilithium"):
        return
    mod = kyber if kf.scheme == "kyber" else dilithium
    name = kf.header.get("params")
    try:
        p = mod.params(name)
    except DomainError:
        raise KeyFileError(f"unknown params {name!r}", where.get("params")) from None
    for key in ("n", "q", "k", "m"):
        if key in kf.header and hasattr(p, key) and int(kf.header[key]) != getattr(p, key):
            raise KeyFileError(f"header {key} does not match params {name}", where[key])


# -- conversions ----------------------------------------------------------------

def _elem_from(kf: KeyFile, name: str) -> RingElem:
    return RingElem(int(kf.header["n"]), int(kf.header["q"]), tuple(kf.fields[name]))


def _vec(kf, base, count):
    return RingVec(tuple(_elem_from(kf, f"{base}[{i}]") for i in range(count)))


def _mat(kf, rows, cols):
    return RingMat(tuple(tuple(_elem_from(kf, f"A[{i}][{j}]") for j in range(cols)) for i in range(rows)))


def _ring_header(p, extra=()) -> dict[str, str]:
    h = {"params": p.name, "n": str(p.n), "q": str(p.q), "k": str(p.k)}
    for key in extra:
        h[key] = str(getattr(p, key))
    return h


def _put_vec(fields, base, v: RingVec):
    for i, e in enumerate(v):
        fields[f"{base}[{i}]"] = list(e.coeffs)


def _put_mat(fields, A: RingMat):
    for i, row in enumerate(A.rows):
        for j, e in enumerate(row):
            fields[f"A[{i}][{j}]"] = list(e.coeffs)


def to_keyfile(obj) -> KeyFile:
    if isinstance(obj, rsa.RsaPublicKey):
        return KeyFile("rsa", "public", {"n": str(obj.n)}, {"d": [obj.d]})
    if isinstance(obj, rsa.RsaPrivateKey):
        return KeyFile("rsa", "private", {"n": str(obj.n)}, {"g": [obj.g]})
    if isinstance(obj, kyber.KyberPublicKey):
        f: dict = {}
        _put_mat(f, obj.A)
        _put_vec(f, "t", obj.t)
        return KeyFile("kyber", "public", _ring_header(obj.params), f)
    if isinstance(obj, kyber.KyberPrivateKey):
        f = {}
        _put_vec(f, "s", obj.s)
        return KeyFile("kyber", "private", _ring_header(obj.params), f)
    if isinstance(obj, kyber.KyberCiphertext):
        f = {}
        _put_vec(f, "u", obj.u)
        f["v"] = list(obj.v.coeffs)
        return KeyFile("kyber", "ciphertext", _ring_header(obj.params), f)
    if isinstance(obj, dilithium.DilithiumPublicKey):
        f = {}
        _put_mat(f, obj.A)
        _put_vec(f, "t", obj.t)
        return KeyFile("dilithium", "public", _ring_header(obj.params, ("m",)), f)
    if isinstance(obj, dilithium.DilithiumPrivateKey):
        f = {}
        _put_vec(f, "s", obj.s)
        return KeyFile("dilithium", "private", _ring_header(obj.params, ("m",)), f)
    raise KeyFileError(f"cannot serialise {type(obj).__name__}")


def ecc_keyfile(kind: str, value, curve_name: str) -> KeyFile:
    if kind == "public":
        return KeyFile("ecc", "public", {"curve": curve_name}, {"x": [value.x], "y": [value.y]})
    return KeyFile("ecc", "private", {"curve": curve_name}, {"s": [value]})


def signature_keyfile(sig: dilithium.DilithiumSignature, p: dilithium.DilithiumParams) -> KeyFile:
    f: dict = {}
    _put_vec(f, "r2", sig.r2)
    cc = sig.c.centered()
    f["c_pos"] = [i for i, x in enumerate(cc) if x]
    f["c_sign"] = [x for x in cc if x]
    return KeyFile("dilithium", "signature", _ring_header(p, ("m",)), f)


def from_keyfile(kf: KeyFile):
    f = kf.fields
    if kf.scheme == "rsa":
        n = int(kf.header["n"])
        if kf.kind == "public":
            return rsa.RsaPublicKey(f["d"][0], n)
        return rsa.RsaPrivateKey(f["g"][0], n)
    if kf.scheme == "ecc":
        ecc.preset(kf.header.get("curve", ""))
        if kf.kind == "public":
            return ecc.CurvePoint(f["x"][0], f["y"][0])
        return f["s"][0]
    if kf.scheme == "kyber":
        p = kyber.params(kf.header["params"])
        if kf.kind == "public":
            return kyber.KyberPublicKey(p, _mat(kf, p.k, p.k), _vec(kf, "t", p.k))
        if kf.kind == "private":
            return kyber.KyberPrivateKey(p, _vec(kf, "s", p.k))
        return kyber.KyberCiphertext(p, _vec(kf, "u", p.k), _elem_from(kf, "v"))
    p = dilithium.params(kf.header["params"])
    if kf.kind == "public":
        return dilithium.DilithiumPublicKey(p, _mat(kf, p.m, p.k), _vec(kf, "t", p.m))
    if kf.kind == "private":
        return dilithium.DilithiumPrivateKey(p, _vec(kf, "s", p.k))
    c = [0] * p.n
    for pos, sgn in zip(f["c_pos"], f["c_sign"]):
        c[pos] = sgn
    return dilithium.DilithiumSignature(_vec(kf, "r2", p.k), RingElem(p.n, p.q, tuple(c)))


def dumps(obj) -> str:
    return write_keyfile(to_keyfile(obj))


def loads(text: str):
    return from_keyfile(parse_keyfile(text))
