"""Command-line front end.

Usage errors exit with status 2, computation failures with status 1 and a
JSON error object on stdout.  PURERES_PRIME and PURERES_SEED override the
defaults of --prime and --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import drivers
from .cohomology import cohomology_table, default_window
from .complexes import betti_table_text, deserialize, serialize, split_bundle, to_json
from .errors import PureResError
from .field import DEFAULT_PRIME, Field, is_prime
from .homext import ext_dims
from .kronecker import (KroneckerRep, is_schur_root, random_rep, realize, rep_hom_ext,
                        sigma_basis, simplicity_verdict, tits_form)
from .ring import RingDesc
from .verdict import table


@dataclass
class Config:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    slack: int | None = None
    points: int = 50
    format: str = "text"

    def __post_init__(self):
        if self.prime != 0 and (self.prime == 2 or not is_prime(self.prime)):
            raise ValueError(f"prime must be 0 or an odd prime, got {self.prime}")


class UsageError(Exception):
    pass


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}")


def _int_list(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(cfg: Config, payload: dict, text: str):
    if cfg.format == "text":
        print(text)
    else:
        print(json.dumps({"config": asdict(cfg), **payload}, sort_keys=True, indent=1))


def _report_text(rep) -> str:
    lines = [f"{rep.theorem} {json.dumps(rep.parameters, sort_keys=True)}: {rep.status}"]
    if rep.verdicts:
        lines.append(table(rep.verdicts))
    for ob in rep.observations:
        lines.append(json.dumps(ob, sort_keys=True))
    return "\n".join(lines)


def _load(path):
    try:
        return deserialize(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


# subcommands --------------------------------------------------------------

def cmd_resolution(args, cfg):
    if args.cmd == "koszul":
        rep = drivers.verify_koszul(args.n, args.d, cfg.seed, cfg.prime)
    else:
        rep = drivers.verify_gorenstein(args.n, args.t, cfg.seed, cfg.prime)
    res = rep.artifacts["resolution"]
    payload = {"presentation": to_json(res.full),
               "syzygies": {str(i): to_json(F) for i, F in res.syzygies.items()},
               "betti": {str(p): len(res.full.term(p)) for p in res.full.positions},
               "report": rep.to_json()}
    _emit(cfg, payload, betti_table_text(res.full) + "\n\n" + _report_text(rep))
    return 0 if rep.passed else 1


def cmd_anyhd(args, cfg):
    rep = drivers.verify_anyhd(args.n, args.l, args.schedule, cfg.seed, cfg.prime, args.d0,
                               cfg.points)
    E = rep.artifacts["bundle"]
    payload = {"presentation": to_json(E), "steps": rep.artifacts["steps"],
               "report": rep.to_json()}
    _emit(cfg, payload, betti_table_text(E) + "\n\n" + _report_text(rep))
    return 0 if rep.passed else 1


def cmd_cohomology(args, cfg):
    c = _load(args.infile)
    tmin, tmax = default_window(c, cfg.slack)
    window = (tmin if args.tmin is None else args.tmin, tmax if args.tmax is None else args.tmax)
    if window[0] > window[1]:
        raise UsageError("--tmin must not exceed --tmax")
    tab = cohomology_table(c, window)
    if cfg.format == "tsv":
        print(tab.to_tsv())
    else:
        _emit(cfg, {"table": tab.to_json()}, tab.to_tsv())
    return 0


def cmd_hom(args, cfg):
    E, F = _load(args.e), _load(args.f)
    kmax = E.ring.n if args.kmax is None else args.kmax
    dims = ext_dims(E, F, kmax)
    out = [v if isinstance(v, int) else str(v) for v in dims]
    _emit(cfg, {"E": E.label, "F": F.label, "ext": out},
          "\n".join(f"Ext^{k} = {v}" for k, v in enumerate(out)))
    return 0


def cmd_quiver(args, cfg):
    if args.qcmd == "homext":
        fld = Field(cfg.prime)
        try:
            r1 = KroneckerRep.from_json(json.loads(Path(args.r1).read_text()), fld)
            r2 = KroneckerRep.from_json(json.loads(Path(args.r2).read_text()), fld)
        except OSError as exc:
            raise UsageError(f"cannot read representation: {exc}")
        except (ValueError, KeyError, TypeError) as exc:
            raise PureResError(f"bad representation JSON: {exc}")
        h, e = rep_hom_ext(r1, r2)
        _emit(cfg, {"hom": h, "ext1": e}, f"Hom = {h}\nExt^1 = {e}")
        return 0
    w, a, b = args.w, args.a, args.b
    if args.qcmd == "tits":
        value = tits_form(w, a, b)
    elif args.qcmd == "schur":
        value = is_schur_root(w, a, b)
    else:
        value = simplicity_verdict(w, a, b)
    _emit(cfg, {"w": w, "a": a, "b": b, args.qcmd: value},
          str(value).lower() if isinstance(value, bool) else str(value))
    return 0


def cmd_verify(args, cfg):
    which = args.which
    if which == "all":
        reports = drivers.verify_all(cfg.seed, cfg.prime, cfg.points)
    elif which == "koszul":
        reports = [drivers.verify_koszul(args.n or 3, args.d or 1, cfg.seed, cfg.prime)]
    elif which == "gorenstein":
        reports = [drivers.verify_gorenstein(args.n or 3, args.t or 1, cfg.seed, cfg.prime)]
    elif which == "anyhd":
        reports = [drivers.verify_anyhd(args.n or 4, args.l or 1, args.schedule, cfg.seed,
                                        cfg.prime, args.d0, cfg.points)]
    else:
        reports = [drivers.verify_quiver_dictionary(args.samples, cfg.seed, cfg.prime, cfg.points)]
    ok = all(r.passed for r in reports)
    _emit(cfg, {"reports": [r.to_json() for r in reports], "status": "Pass" if ok else "Fail"},
          "\n\n".join(_report_text(r) for r in reports))
    return 0 if ok else 1


def cmd_explore(args, cfg):
    rep = drivers.explore(args.degrees, cfg.seed, cfg.prime)
    _emit(cfg, {"report": rep.to_json()}, _report_text(rep))
    return 0


def write_fixtures(out: Path, cfg: Config) -> list[str]:
    """Canned presentations and representations for offline use."""
    import numpy as np

    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(cfg.seed)
    fld = Field(cfg.prime)
    written = {}
    rep = drivers.verify_koszul(2, 1, cfg.seed, cfg.prime)
    written["koszul_n2_d1.json"] = serialize(rep.artifacts["resolution"].full)
    written["koszul_n2_d1_F1.json"] = serialize(rep.artifacts["resolution"].syzygies[1])
    rep = drivers.verify_koszul(3, 1, cfg.seed, cfg.prime)
    for i, F in rep.artifacts["resolution"].syzygies.items():
        written[f"koszul_n3_d1_F{i}.json"] = serialize(F)
    ring = RingDesc(3, fld)
    sig = sigma_basis(split_bundle(ring, [-1]), split_bundle(ring, [0]))
    for a, b in [(1, 4), (2, 5)]:
        r = random_rep(sig.w, a, b, rng, fld)
        written[f"rep_w4_{a}_{b}.json"] = r.dumps()
        written[f"steiner_p3_{a}_{b}.json"] = serialize(realize(r, sig, rng, cfg.points))
    written["line_p3_O(-1).json"] = serialize(split_bundle(ring, [-1]))
    for name, text in written.items():
        (out / name).write_text(text + "\n")
    return sorted(written)


def cmd_fixtures(args, cfg):
    names = write_fixtures(Path(args.out), cfg)
    _emit(cfg, {"written": names}, "\n".join(names))
    return 0


# parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=None,
                        help="field characteristic: 0 for Q or an odd prime (default 32003)")
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--slack", type=int, default=None, help="extra twists around windows")
    common.add_argument("--points", type=int, default=50, help="sample points for fiber checks")
    common.add_argument("--format", choices=["json", "tsv", "text"], default="text")

    p = argparse.ArgumentParser(prog="pureres", description="Syzygy bundles of pure resolutions.")
    sub = p.add_subparsers(dest="cmd", required=True)

    k = sub.add_parser("koszul", parents=[common], help="Koszul complex and its syzygies")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--d", type=int, required=True)
    g = sub.add_parser("gorenstein", parents=[common], help="compressed Gorenstein resolution")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--t", type=int, required=True)
    a = sub.add_parser("anyhd", parents=[common], help="rank-n bundle with hd = l")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--l", type=int, required=True)
    a.add_argument("--d0", type=int, default=1)
    a.add_argument("--schedule", type=_int_list, default=None, help="d_2,...,d_l")

    c = sub.add_parser("cohomology", parents=[common], help="table of dim H^q(E(t))")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--tmin", type=int)
    c.add_argument("--tmax", type=int)
    h = sub.add_parser("hom", parents=[common], help="dimensions of Ext^k(E, F)")
    h.add_argument("--e", required=True)
    h.add_argument("--f", required=True)
    h.add_argument("--kmax", type=int)

    q = sub.add_parser("quiver", help="Kronecker quiver computations")
    qs = q.add_subparsers(dest="qcmd", required=True)
    for name in ("tits", "schur", "verdict"):
        x = qs.add_parser(name, parents=[common])
        x.add_argument("--w", type=int, required=True)
        x.add_argument("--a", type=int, required=True)
        x.add_argument("--b", type=int, required=True)
    x = qs.add_parser("homext", parents=[common])
    x.add_argument("--r1", required=True)
    x.add_argument("--r2", required=True)

    v = sub.add_parser("verify", parents=[common], help="theorem reports")
    v.add_argument("which", choices=["all", "anyhd", "koszul", "gorenstein", "quiver"])
    v.add_argument("--n", type=int)
    v.add_argument("--d", type=int)
    v.add_argument("--t", type=int)
    v.add_argument("--l", type=int)
    v.add_argument("--d0", type=int, default=1)
    v.add_argument("--schedule", type=_int_list, default=None)
    v.add_argument("--samples", type=int, default=100)

    e = sub.add_parser("explore", parents=[common],
                       help="try a pure resolution with given shifts (no expected outcome)")
    e.add_argument("--degrees", type=_int_list, required=True, help="d_1,...,d_{n+1}")

    f = sub.add_parser("fixtures", parents=[common], help="write canned test inputs")
    f.add_argument("--out", default="fixtures")
    return p


COMMANDS = {"koszul": cmd_resolution, "gorenstein": cmd_resolution, "anyhd": cmd_anyhd,
            "cohomology": cmd_cohomology, "hom": cmd_hom, "quiver": cmd_quiver,
            "verify": cmd_verify, "explore": cmd_explore, "fixtures": cmd_fixtures}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        prime = args.prime if args.prime is not None else _env_int("PURERES_PRIME", DEFAULT_PRIME)
        seed = args.seed if args.seed is not None else _env_int("PURERES_SEED", 0)
        cfg = Config(prime, seed, args.slack, args.points, args.format)
    except (UsageError, ValueError) as exc:
        parser.error(str(exc))
    try:
        return COMMANDS[args.cmd](args, cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except (PureResError, ValueError, NotImplementedError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "config": asdict(cfg)}
        print(json.dumps(err, sort_keys=True))
        return 1


if __name__ == "__main__":
    sys.exit(main())
