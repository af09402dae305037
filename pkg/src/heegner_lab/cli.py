"""Command-line front end: one subcommand per experiment, deterministic reports.

Exit status: 0 success, 1 an invariant check failed, 2 usage error.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import __version__
from ._data import DATA_ENV
from .arith import factorize, is_prime, primes_up_to, sigma1
from .quadratic import ImagQuadField, Splitting, heegner_check, splitting_type

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2

COMMANDS = ("mass", "classes", "brandt", "cosets", "galois", "equidist", "surject",
            "select-ell", "multi-ell", "classpoly", "ss", "goursat")

# keys that never change the numbers in a report
_RUNTIME_KEYS = {"out", "workers", "format", "config", "modpoly_dir"}
# parameters each command actually reads, beyond ell/D/level/n/n_max
_EXTRA_KEYS = {"galois": {"twists"}, "surject": {"twists"}, "multi-ell": {"twists", "t1", "t2", "dimA", "r"},
               "select-ell": {"t1", "t2", "dimA", "r"}, "goursat": {"group", "r"}}
_BASE_KEYS = {"ell", "D", "level", "n", "n_max", "seed"}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.params[name]
        except KeyError:
            raise AttributeError(name) from None

    def report_config(self):
        out = {"command": self.command}
        keep = _BASE_KEYS | _EXTRA_KEYS.get(self.command, set())
        out.update({k: v for k, v in self.params.items() if k in keep and v is not None})
        return out


# ----------------------------------------------------------------------------
# parsing

def _int_list(text):
    try:
        return [int(v) for v in str(text).replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ell", type=_int_list, help="prime l (comma list for multi-ell)")
    common.add_argument("--D", type=int, help="fundamental discriminant D_L (or any disc for classpoly)")
    common.add_argument("--level", type=int, default=1, help="level N")
    common.add_argument("--n", type=_int_list, help="conductors / Hecke indices, comma-separated")
    common.add_argument("--n-max", type=int, help="upper end of the n range")
    common.add_argument("--twists", help="';'-separated twists: 'id' or 'c:a,b,c'")
    common.add_argument("--t1", type=int, default=1)
    common.add_argument("--t2", type=int, default=1)
    common.add_argument("--dimA", type=int, default=1)
    common.add_argument("--r", type=int, default=1)
    common.add_argument("--group", default="A5", help="A5 or PSL(2,7) for goursat")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--modpoly-dir", help=f"data directory (default ${DATA_ENV} or bundled)")
    common.add_argument("--config", help="key = value file supplying defaults")
    parser = argparse.ArgumentParser(prog="heegner-lab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _read_config_file(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}: expected 'key = value', got {line!r}")
            out[key.strip()] = value.strip()
    return out


def parse(args):
    """Token list -> validated RunConfig.  Raises UsageError or SystemExit(2)."""
    parser = _build_parser()
    ns = parser.parse_args(args)
    if ns.config:
        defaults = _read_config_file(ns.config)
        tokens = [ns.command]
        for key, value in defaults.items():
            tokens += [f"--{key}", value]
        base = parser.parse_args(tokens + ["--config", ns.config])
        explicit = parser.parse_args(args)
        merged = vars(base)
        given = _explicit_keys(args)
        for k, v in vars(explicit).items():
            if k in given:
                merged[k] = v
        ns = argparse.Namespace(**merged)
    cfg = RunConfig(ns.command, {k: v for k, v in vars(ns).items() if k != "command"})
    validate(cfg)
    return cfg


def _explicit_keys(args):
    keys = set()
    for tok in args:
        if tok.startswith("--"):
            keys.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    return keys


def _need(cfg, *names):
    for n in names:
        if cfg.params.get(n) is None:
            raise UsageError(f"{cfg.command} needs --{n.replace('_', '-')}")


def _single_ell(cfg):
    _need(cfg, "ell")
    ells = cfg.ell
    if len(ells) != 1:
        raise UsageError(f"{cfg.command} takes a single --ell")
    ell = ells[0]
    if not is_prime(ell):
        raise UsageError(f"l={ell} is not prime")
    return ell


def _field(cfg):
    _need(cfg, "D")
    try:
        return ImagQuadField(cfg.D)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _require_inert(ell, fld):
    if splitting_type(fld, ell) is not Splitting.INERT:
        kind = splitting_type(fld, ell).value
        raise UsageError(f"l={ell} is {kind} in {fld}; this experiment needs l inert "
                         "(supersingular reduction)")


def _n_values(cfg, avoid, primes_only=False):
    if cfg.n:
        ns = sorted(set(cfg.n))
    elif cfg.n_max:
        pool = primes_up_to(cfg.n_max) if primes_only else range(1, cfg.n_max + 1)
        ns = [n for n in pool if gcd(n, avoid) == 1]
    else:
        raise UsageError(f"{cfg.command} needs --n or --n-max")
    bad = [n for n in ns if n < 1 or gcd(n, avoid) != 1]
    if bad:
        raise UsageError(f"n values {bad} must be positive and coprime to {abs(avoid)}")
    return ns


def validate(cfg):
    c = cfg.command
    if cfg.level < 1:
        raise UsageError("--level must be positive")
    if cfg.workers < 1:
        raise UsageError("--workers must be positive")
    for k in ("t1", "t2", "dimA", "r"):
        if cfg.params[k] < 1:
            raise UsageError(f"--{k} must be positive")
    if c in ("mass", "classes", "brandt", "equidist", "galois", "surject", "cosets", "ss"):
        ell = _single_ell(cfg)
        if cfg.level > 1 or c in ("galois", "surject", "cosets"):
            fld = _field(cfg)
            if cfg.level > 1:
                if gcd(cfg.level, ell * fld.D) != 1:
                    raise UsageError(f"level N={cfg.level} must be coprime to l*D_L")
                if not heegner_check(fld, cfg.level):
                    raise UsageError(f"Heegner hypothesis fails for N={cfg.level} in {fld}")
        if c in ("galois", "surject") or (c == "equidist" and cfg.D is not None):
            _require_inert(ell, _field(cfg))
        if c == "ss" and ell < 5:
            raise UsageError("supersingular enumeration needs l >= 5")
        if c == "ss" and (cfg.n or cfg.n_max):
            from .ssoracle import SUPPORTED_ISOGENY_PRIMES
            for n in _n_values(cfg, ell):
                bad = [p for p in factorize(n).primes() if p not in SUPPORTED_ISOGENY_PRIMES]
                if bad:
                    raise UsageError(f"n={n} has prime factors {bad} without modular polynomial data")
    if c == "multi-ell":
        _need(cfg, "ell")
        fld = _field(cfg)
        for ell in cfg.ell:
            if not is_prime(ell):
                raise UsageError(f"l={ell} is not prime")
            _require_inert(ell, fld)
    if c == "select-ell":
        _field(cfg)
    if c == "classpoly":
        _need(cfg, "D")
        if cfg.D >= 0 or cfg.D % 4 not in (0, 1):
            raise UsageError(f"{cfg.D} is not a negative discriminant")
    if c == "goursat" and cfg.r not in (1, 2, 3):
        raise UsageError("goursat supports --r 1, 2 or 3")


# ----------------------------------------------------------------------------
# experiments

def _frac(x):
    return [Fraction(x).numerator, Fraction(x).denominator]


def _classes(cfg, ell=None):
    from .grossgalois import class_data
    ell = ell or cfg.ell[0]
    return class_data(ell, cfg.level, cfg.D if cfg.level > 1 else None)


def run_mass(cfg):
    from .quaternion import expected_mass, mass
    ell = cfg.ell[0]
    cls = _classes(cfg)
    got, want = mass(cls), expected_mass(ell, cfg.level)
    ok = got == want
    line = f"mass = {got}, expected {want}, {'OK' if ok else 'MISMATCH'}"
    rows = [{"ell": ell, "level": cfg.level, "classes": len(cls), "weights": [c.w for c in cls],
             "mass": _frac(got), "expected": _frac(want), "ok": ok}]
    return ok, rows, {"message": line}


def run_classes(cfg):
    cls = _classes(cfg)
    rows = [{"index": c.index, "w": c.w, "norm": _frac(c.norm), "theta": list(c.theta())}
            for c in cls]
    return True, rows, {"ell": cfg.ell[0], "level": cfg.level, "count": len(cls)}


def run_brandt(cfg):
    from . import quaternion
    ell = cfg.ell[0]
    cls = _classes(cfg)
    ms = _n_values(cfg, ell * cfg.level)
    rows, ok = [], True
    for m in ms:
        B = quaternion.brandt_matrix(cls, m)
        sums_ok = all(s == sigma1(m) for s in B.row_sums())
        sym_ok = B.weight_symmetric()
        ok = ok and sums_ok and sym_ok
        rows.append({"m": m, "matrix": B.matrix, "row_sums_ok": sums_ok,
                     "weight_symmetric": sym_ok, "sigma1": sigma1(m)})
    return ok, rows, {"ell": ell, "level": cfg.level, "weights": [c.w for c in cls]}


def run_cosets(cfg):
    from .heckecosets import verify_orbit_containment
    ell = cfg.ell[0]
    fld = _field(cfg)
    rows, ok = [], True
    for n in _n_values(cfg, ell * cfg.level * fld.D):
        rep = verify_orbit_containment(n, fld, ell, cfg.level)
        good = rep.distinct and rep.contained and rep.d_matches
        ok = ok and good
        row = rep.to_dict()
        row["ok"] = good
        rows.append(row)
    return ok, rows, {"ell": ell, "D": fld.D}


def _twists(cfg, fld):
    from .grossgalois import Twist, parse_twists
    if not cfg.twists:
        return [Twist.identity(fld.D)]
    try:
        return parse_twists(cfg.twists, fld.D)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def run_galois(cfg):
    from .grossgalois import simultaneous_reduction
    ell = cfg.ell[0]
    fld = _field(cfg)
    cls = _classes(cfg)
    tw = _twists(cfg, fld)
    rows, ok = [], True
    for n in _n_values(cfg, ell * cfg.level * fld.D):
        t = simultaneous_reduction(n, tw, cls, fld)
        ok = ok and t.distinct_points == len(t)
        for form, entry in zip(t.rows, t.entries):
            rows.append({"n": n, "nu": list(form), "classes": entry})
    return ok, rows, {"ell": ell, "D": fld.D, "twists": [str(t) for t in tw]}


def run_equidist(cfg):
    from .grossgalois import hecke_equidist_stats
    ell = cfg.ell[0]
    cls = _classes(cfg)
    ns = _n_values(cfg, ell * cfg.level, primes_only=True)
    rep = hecke_equidist_stats(ell, cfg.level, None, ns, classes=cls)
    ok = all(0 <= r["tv"] <= 1 for r in rep.rows)
    return ok, rep.rows, rep.summary


def run_surject(cfg):
    from .grossgalois import surjectivity_experiment
    ell = cfg.ell[0]
    fld = _field(cfg)
    ns = _n_values(cfg, ell * cfg.level * fld.D)
    rep = surjectivity_experiment(ell, fld, cfg.level, _twists(cfg, fld), ns,
                                  workers=cfg.workers)
    ok = all(r["rows"] == r["distinct_points"] and 0 <= r["coverage"] <= 1 for r in rep.rows)
    return ok, rep.rows, rep.summary


def run_select_ell(cfg):
    from .grossgalois import ExperimentConfig, select_ell
    fld = _field(cfg)
    sel = select_ell(ExperimentConfig(cfg.t1, cfg.t2, cfg.dimA, cfg.r), fld, cfg.level)
    rows = [{"ell": e, "classes": s} for e, s in sel.certificate]
    return sel.num_classes > sel.bound, rows, sel.to_dict()


def run_multi_ell(cfg):
    from .grossgalois import ExperimentConfig, multi_ell_scan
    fld = _field(cfg)
    avoid = cfg.level * fld.D
    for ell in cfg.ell:
        avoid *= ell
    ns = _n_values(cfg, avoid) if (cfg.n or cfg.n_max) else [1]
    rep = multi_ell_scan(cfg.ell, fld, cfg.level, _twists(cfg, fld), ns,
                         ExperimentConfig(cfg.t1, cfg.t2, cfg.dimA, cfg.r), workers=cfg.workers)
    return rep.summary["strictly_decreasing"] or len(cfg.ell) < 2, rep.rows, rep.summary


def run_classpoly(cfg):
    from .ssoracle import hilbert_class_poly, reduce_and_roots
    from .quadratic import class_number
    H = hilbert_class_poly(cfg.D)
    ok = H.degree == class_number(cfg.D)
    row = {"D": cfg.D, "degree": H.degree, "coeffs": [str(c) for c in H.coeffs],
           "export": H.export()}
    if cfg.ell:
        row["roots_mod_ell"] = {str(ell): [str(r) for r in reduce_and_roots(H, ell)]
                                for ell in cfg.ell}
    return ok, [row], {"D": cfg.D}


def run_ss(cfg):
    from .heckecosets import deg_a
    from .ssoracle import hecke_orbit_multiset, supersingular_js
    ell = cfg.ell[0]
    S = supersingular_js(ell)
    n_classes = len(_classes(cfg)) if cfg.level == 1 else None
    ok = n_classes is None or n_classes == len(S)
    rows = [{"j": str(j), "weight": w} for j, w in zip(S.js, S.weights)]
    ns = _n_values(cfg, ell) if (cfg.n or cfg.n_max) else []
    for row, j in zip(rows, S.js):
        orbits = {}
        for n in ns:
            orbit = hecke_orbit_multiset(j, n, ell, cfg.modpoly_dir)
            ok = ok and len(orbit) == deg_a(n) and all(y in S for y in orbit)
            orbits[str(n)] = [str(y) for y in orbit]
        if ns:
            row["hecke_orbits"] = orbits
    return ok, rows, {"ell": ell, "count": len(S), "mass": _frac(S.mass()),
                      "ideal_classes": n_classes}


def run_goursat(cfg):
    from .diagonals import bundled_group, delta_normalized_subgroups, expected_count
    G = bundled_group(cfg.group, cfg.modpoly_dir)
    subs = delta_normalized_subgroups(G, cfg.r)
    rows = [{"order": len(h), "certificate": [list(b) for b in h.certificate]
             if h.certificate is not None else None} for h in subs]
    ok = len(subs) == expected_count(cfg.r) and all(h.certificate is not None for h in subs)
    return ok, rows, {"group": G.name, "r": cfg.r, "count": len(subs),
                      "expected": expected_count(cfg.r)}


RUNNERS = {
    "mass": run_mass, "classes": run_classes, "brandt": run_brandt, "cosets": run_cosets,
    "galois": run_galois, "equidist": run_equidist, "surject": run_surject,
    "select-ell": run_select_ell, "multi-ell": run_multi_ell, "classpoly": run_classpoly,
    "ss": run_ss, "goursat": run_goursat,
}


# ----------------------------------------------------------------------------
# output

def render(cfg, ok, rows, summary):
    if cfg.format == "csv":
        keys = sorted({k for r in rows for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(r[k], sort_keys=True) if isinstance(r.get(k), (list, dict))
                        else r.get(k) for k in keys})
        return buf.getvalue()
    doc = {"schema_version": SCHEMA_VERSION, "config": cfg.report_config(), "ok": ok,
           "summary": summary, "rows": rows}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def dispatch(cfg, stdout=None):
    stdout = stdout or sys.stdout
    ok, rows, summary = RUNNERS[cfg.command](cfg)
    text = render(cfg, ok, rows, summary)
    if cfg.command == "mass":
        print(summary["message"], file=stdout)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    elif cfg.command != "mass":
        stdout.write(text)
    return EXIT_OK if ok else EXIT_INVARIANT


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse(argv)
        return dispatch(cfg)
    except (UsageError, FileNotFoundError) as exc:
        print(f"heegner-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, ArithmeticError, RuntimeError, ValueError) as exc:
        # model inconsistencies, failed certificates, corrupt data files
        print(f"heegner-lab: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
