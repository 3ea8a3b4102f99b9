"""Operator commands: build, encode, decode, repair, verify, compare."""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import codec, codefile, shard
from .compare import compare_rows, render_table
from .gf import next_pow2
from .repair import make_plan, repair_node, transcript_audit
from .transform import DegreeSet, upgrade_all_nodes
from .vbk import ParameterError, VbkParams, build_vbk
from .verify import (
    check_mds,
    check_repair_bound,
    check_selector_identities,
    check_tmds,
    render_records,
    render_text,
)

MAX_L = 1 << 16
MAX_RL = 1 << 18


class CliError(Exception):
    pass


def read_config(path) -> dict:
    cfg = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}: malformed config line {raw!r}")
        key, val = line.split("=", 1)
        cfg[key.strip()] = val.strip()
    return cfg


def _degrees_from(text: str) -> tuple:
    return tuple(int(x) for x in text.replace(" ", "").split(","))


def cmd_build(args) -> int:
    cfg = read_config(args.config)
    try:
        n = int(cfg["n"])
        k = int(cfg["k"])
        delta0 = int(cfg["delta0"])
    except KeyError as e:
        raise CliError(f"config missing required key {e}") from e
    degrees = _degrees_from(cfg.get("degrees", str(delta0)))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", "0"))
    q = args.field if args.field is not None else (
        int(cfg["q"]) if "q" in cfg else None
    )

    params = VbkParams(n, k, delta0)
    ds = DegreeSet.make(degrees)
    if degrees[0] != delta0 or degrees[-1] > params.r:
        raise CliError(
            f"degrees {degrees} invalid: must start at delta0={delta0} "
            f"and stay within r={params.r}"
        )
    mu = params.tau
    final_l = ds.l[0] ** mu * params.N
    q_used = q if q is not None else next_pow2(params.min_q())
    print(f"(n,k) = ({n},{k})  delta0 = {delta0}  degrees = {set(degrees)}")
    print(f"base sub-packetization {delta0}^{params.tau} = {params.N}")
    print(
        f"final sub-packetization {ds.lcm}^{mu} = {final_l}  field GF({q_used})"
    )
    print(
        "repair bandwidth per degree: "
        + ", ".join(
            f"d={k + th - 1}: {(k + th - 1) * final_l // th}" for th in degrees
        )
    )
    if (final_l > MAX_L or params.r * final_l > MAX_RL) and not args.force:
        print(
            f"report-only: sub-packetization {final_l} exceeds the "
            f"materialization guard (L <= {MAX_L} and r*L <= {MAX_RL}); "
            "pass --force to build anyway"
        )
        return 0
    base = build_vbk(n, k, delta0, degrees=degrees, q=q_used, seed=seed)
    code = upgrade_all_nodes(base, ds)
    if args.verify:
        reports = check_tmds(base, ds, seed=seed)
        print(render_text(reports))
        if not all(r.passed for r in reports):
            print("pre-flight verification failed; code file not written")
            return 1
    out = args.out or str(Path(args.config).with_suffix(".code"))
    digest = codefile.write_code_file(code, out)
    print(f"wrote {out} (digest {digest[:16]}...)")
    return 0


def _load_code(path):
    code = codefile.build_from_file(path)
    digest = codefile.file_digest(path)
    return code, digest


def _stripe_fragments(code, symbols: np.ndarray):
    """Reshape a stripes*k*L symbol stream into per-node (L, stripes) data
    blocks for the systematic nodes."""
    k, L = code.k, code.L
    stripes = symbols.size // (k * L)
    # stripe-major layout: node i of stripe s holds symbols [s*k*L + i*L, ...)
    cube = symbols.reshape(stripes, k, L)
    return [np.ascontiguousarray(cube[:, i, :].T) for i in range(k)], stripes


def cmd_encode(args) -> int:
    code, digest = _load_code(args.code)
    data = Path(args.input).read_bytes()
    symbols = shard.bytes_to_symbols(data, code.field, code.k * code.L)
    frags, stripes = _stripe_fragments(code, symbols)
    word = codec.encode(code, frags)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for i in range(code.n):
        shard.write_shard(
            outdir / f"shard_{i:03d}.mds",
            digest,
            i,
            code.field.q,
            code.L,
            stripes,
            len(data),
            np.ascontiguousarray(word[i].T).reshape(-1),
        )
    print(f"encoded {len(data)} bytes into {code.n} shards ({stripes} stripes)")
    return 0


def _gather_shards(code, digest, paths):
    loaded = {}
    meta = None
    for p in paths:
        info = shard.read_shard(p, expect_digest=digest)
        node = info["node"]
        if node in loaded:
            continue
        loaded[node] = info
        meta = info
    if not loaded:
        raise CliError("no usable shards found")
    return loaded, meta


def _shard_paths(shards_arg):
    paths = []
    for entry in shards_arg:
        p = Path(entry)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.mds")))
        else:
            paths.append(p)
    return paths


def cmd_decode(args) -> int:
    code, digest = _load_code(args.code)
    paths = _shard_paths(args.shards)
    loaded, meta = _gather_shards(code, digest, paths)
    if len(loaded) < code.k:
        raise CliError(f"need at least k={code.k} shards, found {len(loaded)}")
    stripes = meta["stripes"]
    use = sorted(loaded)[: code.k]
    surviving = {}
    for i in use:
        sym = loaded[i]["symbols"]
        surviving[i] = np.ascontiguousarray(sym.reshape(stripes, code.L).T)
    word = codec.reconstruct(code, surviving)
    cube = np.stack([word[i].T for i in range(code.k)], axis=1)  # stripes,k,L
    out_symbols = cube.reshape(-1)
    data = shard.symbols_to_bytes(out_symbols, code.field, meta["orig_len"])
    Path(args.out).write_bytes(data)
    print(f"decoded {meta['orig_len']} bytes from shards {use}")
    return 0


def cmd_repair(args) -> int:
    code, digest = _load_code(args.code)
    paths = _shard_paths(args.shards)
    loaded, meta = _gather_shards(code, digest, paths)
    failed = args.failed
    if failed in loaded:
        del loaded[failed]
    d = args.degree if args.degree is not None else len(loaded)
    theta = d - code.k + 1
    if (failed, theta) not in code.repair:
        raise CliError(
            f"degree d={d} unsupported: d-k+1={theta} not in the code's degree set"
        )
    if len(loaded) < d:
        raise CliError(f"need {d} helper shards, found {len(loaded)}")
    helpers = sorted(loaded)[:d]
    stripes = meta["stripes"]
    frag_views = {
        j: loaded[j]["symbols"].reshape(stripes, code.L) for j in helpers
    }
    plan = make_plan(code, failed, helpers)
    rebuilt = np.zeros((stripes, code.L), dtype=np.uint16)
    total_down = total_acc = 0
    audit = None
    for s in range(stripes):
        word = {j: frag_views[j][s] for j in helpers}
        frag, transcript = repair_node(code, plan, word)
        rebuilt[s] = frag
        audit = transcript_audit(transcript, code, plan)
        total_down += audit.downloaded_total
        total_acc += audit.accessed_total
    bound = plan.d * code.L // (plan.d - code.k + 1) * stripes
    print(
        f"repaired node {failed} from {plan.d} helpers: "
        f"{total_down}/{bound} symbols downloaded, {total_acc} accessed, "
        f"optimal repair: {'yes' if total_down == bound else 'no'}, "
        f"optimal access: {'yes' if audit and total_acc == total_down else 'no'}"
    )
    out = args.out or str(Path(args.shards[0]) / f"shard_{failed:03d}.mds")
    shard.write_shard(
        out,
        digest,
        failed,
        code.field.q,
        code.L,
        stripes,
        meta["orig_len"],
        rebuilt.reshape(-1),
    )
    print(f"wrote {out}")
    return 0


def cmd_verify(args) -> int:
    code, _digest = _load_code(args.code)
    base = codefile.build_from_file(args.code, materialize=False)
    fields = codefile.read_code_file(args.code)
    degrees = DegreeSet.make(
        tuple(int(x) for x in fields["degrees"].split(","))
    )
    samples = args.sample
    reports = []
    if args.suite in ("all", "tmds"):
        reports += check_tmds(base, degrees, samples=samples, seed=args.seed)
    if args.suite in ("all", "mds"):
        rep = check_mds(code, samples=samples, seed=args.seed)
        rep.name = "mds[lifted]"
        reports.append(rep)
    if args.suite in ("all", "repair"):
        reports.append(check_repair_bound(code, samples=samples, seed=args.seed))
    if args.suite in ("all", "identities"):
        width = 1
        while code.delta0**width < code.base_N:
            width += 1
        reports.append(
            check_selector_identities(code.delta0, min(width, 4), field=code.field)
        )
    text = render_text(reports)
    print(text)
    if args.report:
        Path(args.report).write_text(text + "\n", encoding="utf-8")
    if args.json_report:
        Path(args.json_report).write_text(
            render_records(reports) + "\n", encoding="utf-8"
        )
    return 0 if all(r.passed for r in reports) else 1


def cmd_compare(args) -> int:
    from .compare import reduction_factor
    from .transform import DegreeSet

    groups = []
    extras = []
    for text in args.degrees:
        degrees = _degrees_from(text)
        groups.append(
            compare_rows(args.n, args.k, args.delta0, degrees, pow2=not args.exact_field)
        )
        if args.delta0 > 4:
            num, den = reduction_factor(args.n, DegreeSet.make(degrees).lcm)
            extras.append(
                f"degrees {{{text}}}: sub-packetization reduced by a factor of "
                f"{num}/{den} vs the delta^n families (one extra degree supported)"
            )
    print(render_table(groups))
    for line in extras:
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mdsarray",
        description="MDS array codes with optimal repair/access for multiple repair degrees",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a code from a config file")
    b.add_argument("--config", required=True)
    b.add_argument("--out", help="output code file (default: config with .code)")
    b.add_argument("--seed", type=int)
    b.add_argument("--field", type=int, help="override field size q")
    b.add_argument("--force", action="store_true", help="ignore materialization guard")
    b.add_argument("--verify", action="store_true", help="run the certificate pre-flight")
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("encode", help="split a file into n shards")
    e.add_argument("--code", required=True)
    e.add_argument("--input", required=True)
    e.add_argument("--out-dir", required=True)
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="rebuild a file from any k shards")
    d.add_argument("--code", required=True)
    d.add_argument("--out", required=True)
    d.add_argument("shards", nargs="+", help="shard files or directories")
    d.set_defaults(func=cmd_decode)

    r = sub.add_parser("repair", help="rebuild one lost shard from d helpers")
    r.add_argument("--code", required=True)
    r.add_argument("--failed", type=int, required=True)
    r.add_argument("--degree", type=int, help="number of helpers d (default: all available)")
    r.add_argument("--out")
    r.add_argument("shards", nargs="+")
    r.set_defaults(func=cmd_repair)

    v = sub.add_parser("verify", help="run the property-check suite")
    v.add_argument("--code", required=True)
    v.add_argument("--suite", choices=["all", "mds", "tmds", "repair", "identities"], default="all")
    v.add_argument("--sample", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report", help="write the text report here")
    v.add_argument("--json-report", dest="json_report", help="write machine-readable records here")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compare", help="parameter table vs the delta^n families")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--delta0", type=int, required=True)
    c.add_argument("--exact-field", action="store_true", help="report raw bounds, not powers of two")
    c.add_argument("degrees", nargs="+", help="degree sets, e.g. 2,3 2,3,4")
    c.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ParameterError, codefile.CodeFileError, shard.ShardError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
