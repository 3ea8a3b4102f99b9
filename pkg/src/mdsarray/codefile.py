"""Canonical code description files.

UTF-8 `key=value` lines carrying everything needed to rebuild a code
bit-identically (parameters, field, the drawn constants, the round goal
sets), closed by a content digest line.  Rebuilding from the file bypasses
constant selection entirely, so the parity blocks come out identical.
"""

import hashlib

from .arraycode import ArrayCode
from .gf import build_field
from .transform import DegreeSet, upgrade_all_nodes
from .vbk import VbkConstants, VbkParams, build_from_constants

FORMAT = "mdsarray-code/1"


class CodeFileError(ValueError):
    pass


def _canonical_lines(code: ArrayCode) -> list:
    c = code.constants
    if c is None:
        raise CodeFileError("code carries no constants; cannot serialize")
    degrees = list(code.degrees)
    lines = [
        f"format={FORMAT}",
        f"n={code.n}",
        f"k={code.k}",
        f"delta0={code.delta0}",
        f"degrees={','.join(str(d) for d in degrees)}",
        f"q={code.field.q}",
        f"modulus={','.join(str(x) for x in code.field.modulus)}",
        f"seed={code.seed}",
        f"epsilon={c.epsilon}",
        f"theta={';'.join(','.join(str(v) for v in row) for row in c.theta)}",
        f"zeta={','.join(str(z) for z in c.zeta)}",
        f"rounds={code.depth}",
        "round_goal_sets="
        + ";".join(",".join(str(i) for i in s) for s in code.goal_sets),
    ]
    return lines


def content_digest(lines) -> str:
    return hashlib.sha256(("\n".join(lines) + "\n").encode()).hexdigest()


def write_code_file(code: ArrayCode, path) -> str:
    """Write the canonical description; returns the content digest."""
    lines = _canonical_lines(code)
    digest = content_digest(lines)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
        fh.write(f"digest={digest}\n")
    return digest


def read_code_file(path) -> dict:
    """Parse and digest-check a code file into a flat dict."""
    with open(path, encoding="utf-8") as fh:
        raw = fh.read()
    lines = [ln for ln in raw.splitlines() if ln.strip()]
    if not lines or not lines[-1].startswith("digest="):
        raise CodeFileError(f"{path}: missing digest line")
    body, digest_line = lines[:-1], lines[-1]
    digest = digest_line.split("=", 1)[1]
    if content_digest(body) != digest:
        raise CodeFileError(f"{path}: content digest mismatch")
    fields = {}
    for ln in body:
        if "=" not in ln:
            raise CodeFileError(f"{path}: malformed line {ln!r}")
        key, val = ln.split("=", 1)
        fields[key] = val
    if fields.get("format") != FORMAT:
        raise CodeFileError(f"{path}: unsupported format {fields.get('format')!r}")
    fields["digest"] = digest
    return fields


def build_from_file(path, materialize: bool = True) -> ArrayCode:
    """Rebuild the exact code a file describes (constants are replayed, not
    re-drawn), then re-run the lift rounds."""
    f = read_code_file(path)
    n = int(f["n"])
    k = int(f["k"])
    delta0 = int(f["delta0"])
    degrees = tuple(int(x) for x in f["degrees"].split(","))
    field = build_field(int(f["q"]))
    if f["modulus"] and tuple(int(x) for x in f["modulus"].split(",")) != field.modulus:
        raise CodeFileError(f"{path}: modulus does not match the deterministic one")
    theta = tuple(
        tuple(int(v) for v in row.split(",")) for row in f["theta"].split(";")
    )
    zeta = tuple(int(z) for z in f["zeta"].split(",")) if f["zeta"] else ()
    consts = VbkConstants(
        epsilon=int(f["epsilon"]), theta=theta, zeta=zeta, seed=int(f["seed"])
    )
    params = VbkParams(n, k, delta0)
    base = build_from_constants(params, field, consts, degrees, int(f["seed"]))
    rounds = int(f.get("rounds", "0"))
    if rounds == 0 or not materialize:
        return base
    if rounds != len(base.goal_sets):
        raise CodeFileError(
            f"{path}: rounds={rounds} does not match the goal partition"
        )
    return upgrade_all_nodes(base, DegreeSet.make(degrees))


def file_digest(path) -> str:
    return read_code_file(path)["digest"]
