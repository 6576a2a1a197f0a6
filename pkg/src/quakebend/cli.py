"""Command-line front end.

Every run reads an optional JSON config (schema ``qb-config/1``), fills in
the defaults of the chosen command, computes, and writes ``report.json``
plus CSV character tables into ``--out``. Exit status: 0 on success (and
when the verdict matches ``--expect``), 1 on bad input, 2 on a verdict that
does not match ``--expect``.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Callable

import jsonschema
import numpy as np

from . import __version__
from .bending import bend, complexified_bend
from .errors import QuakebendError
from .experiments import (
    LengthRule,
    SequenceSpec,
    Thresholds,
    fn_grid,
    framed_properness_sweep,
    holomorphy_check,
    injectivity_scan,
    noninjectivity_witness,
    pinch_experiment,
    properness_sweep,
    s_grid,
    sweep,
    bent_character,
    trace_identity_check,
)
from .framed import FramedRep, Framing, WeightedMultiloop, canonical_framing, framed_character, validate_framing
from .hyperbolic import (
    PiecewiseGeodesic,
    PointH3,
    certify_quasigeodesic,
    empirical_qi_constants,
    find_violation,
)
from .moebius import ProjectivePoint
from .surface import CharacterVector, FNCoordinates, coordinate_words, character, fn_to_rep, standard_pants

SCHEMA_ID = "qb-config/1"
EXPERIMENTS = (
    "properness",
    "pinch",
    "injectivity",
    "holomorphy",
    "trace-identity",
    "noninjectivity",
    "framed-properness",
)


class ConfigError(Exception):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.message = message


def load_schema() -> dict:
    text = resources.files("quakebend").joinpath("schemas/qb-config-1.json").read_text()
    return json.loads(text)


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def validate_config(cfg: Any) -> None:
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(cfg), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise ConfigError(_pointer(best.absolute_path), best.message)


# ---------------------------------------------------------------- serialization


def _num(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 1e16:
        return format(x, ".1f")
    return format(x, ".17g")


def _plain(obj: Any) -> Any:
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


def dumps(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats with 17 significant digits."""
    obj = _plain(obj)
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in obj):
            return "[" + ", ".join(dumps(x) for x in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(x, indent + 1) for x in obj) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    return json.dumps(obj)


def _csv_rows(header: str, rows: list[tuple[int, str, complex]]) -> str:
    lines = [f"# {header}", "step,word,re,im"]
    for step, word, z in rows:
        # + 0.0 folds -0 into 0
        lines.append(f"{step},{word},{format(float(z.real) + 0.0, '.17g')},{format(float(z.imag) + 0.0, '.17g')}")
    return "\n".join(lines) + "\n"


def _write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- config reading


def _scalar(x: Any) -> complex:
    if isinstance(x, dict):
        return complex(x["re"], x["im"])
    return complex(x)


def _point(x: Any) -> ProjectivePoint:
    if x == "inf":
        return ProjectivePoint(1.0, 0.0)
    if isinstance(x, list):
        return ProjectivePoint(_scalar(x[0]), _scalar(x[1]))
    return ProjectivePoint.from_complex(_scalar(x))


def _point_out(p: ProjectivePoint) -> list:
    return [complex(p.z0), complex(p.z1)]


@dataclass
class Job:
    command: str
    cfg: dict
    seed: int
    threads: int
    expect: str | None
    P: Any = field(default=None)

    @property
    def label(self) -> str:
        return f"{SCHEMA_ID} command={self.command} seed={self.seed} version={__version__}"

    def pants(self):
        s = self.cfg["surface"]
        try:
            return standard_pants(s["genus"], s["template"])
        except QuakebendError as e:
            raise ConfigError("/surface/genus", str(e)) from None

    def fn(self, P) -> FNCoordinates:
        f = self.cfg["fn"]
        for key in ("lengths", "twists"):
            if len(f[key]) != P.n_curves:
                raise ConfigError(f"/fn/{key}", f"expected {P.n_curves} entries, got {len(f[key])}")
        lengths = [_scalar(x) for x in f["lengths"]]
        for k, x in enumerate(lengths):
            if not x.real > 0:
                raise ConfigError(f"/fn/lengths/{k}", f"length must have positive real part, got {x}")
        return FNCoordinates(lengths, [_scalar(x) for x in f["twists"]])

    def multiloop(self, P) -> WeightedMultiloop:
        loops, weights, signs = [], [], []
        for k, item in enumerate(self.cfg["multiloop"]):
            c = item["curve"]
            if c >= P.n_curves:
                raise ConfigError(f"/multiloop/{k}/curve", f"curve {c} does not exist (surface has {P.n_curves})")
            if c in loops:
                raise ConfigError(f"/multiloop/{k}/curve", f"curve {c} is listed twice")
            loops.append(c)
            weights.append(item["weight"])
            signs.append(item.get("orientation", 1))
        return WeightedMultiloop(tuple(loops), tuple(weights), tuple(signs))

    def framing(self, rep, M) -> Framing:
        overrides = self.cfg.get("framing", [])
        pairs = {}
        given = {}
        for k, item in enumerate(overrides):
            if item["curve"] not in M.loops:
                raise ConfigError(f"/framing/{k}/curve", f"curve {item['curve']} is not in the multiloop")
            given[item["curve"]] = (_point(item["u"]), _point(item["v"]))
        missing = [m for m in M.loops if m not in given]
        if missing:
            sub = WeightedMultiloop(
                tuple(missing), tuple(M.weight(m) for m in missing), tuple(M.sign(m) for m in missing)
            )
            pairs.update(canonical_framing(rep, sub).pairs)
        pairs.update(given)
        return Framing(pairs)

    def params(self) -> dict:
        return self.cfg.get("experiment", {}).get("params", {})

    def param(self, key: str, kind: type | tuple, default: Any) -> Any:
        value = self.params().get(key, default)
        ok = isinstance(value, kind) and not (isinstance(value, bool) and kind is not bool)
        if not ok:
            raise ConfigError(f"/experiment/params/{key}", f"expected {getattr(kind, '__name__', kind)}, got {value!r}")
        return value

    def thresholds(self) -> Thresholds:
        return Thresholds(**self.cfg.get("experiment", {}).get("thresholds", {}))

    def sequence(self, P) -> SequenceSpec:
        spec = self.param("sequence", dict, {})
        ptr = "/experiment/params/sequence"
        try:
            rules = tuple(LengthRule(r.get("kind", "fixed"), r.get("rate", 0.0)) for r in spec.get("lengths", []))
            return SequenceSpec(
                self.fn(P),
                int(spec.get("steps", 50)),
                rules,
                tuple(spec.get("twist_steps", ())),
                spec.get("twist_units", "length"),
            )
        except (ValueError, TypeError, AttributeError) as e:
            raise ConfigError(ptr, str(e)) from None


# ---------------------------------------------------------------- defaults


def _base(template: str = "chain") -> dict:
    return {
        "schema": SCHEMA_ID,
        "surface": {"genus": 2, "template": template},
        "fn": {"lengths": [1.0, 1.0, 1.0], "twists": [0.0, 0.0, 0.0]},
        "multiloop": [{"curve": 0, "weight": 1.0, "orientation": 1}],
        "output": {"format": "both", "prefix": ""},
    }


def _growth(steps: int = 50) -> dict:
    return {
        "steps": steps,
        "lengths": [{"kind": "linear", "rate": 0.5}, {"kind": "fixed"}, {"kind": "fixed"}],
        "twist_steps": [0.0, 0.0, 0.0],
    }


def defaults(command: str) -> dict:
    """The canonical configuration of a command; a user config overrides its top-level sections."""
    cfg = _base()
    if command == "experiment properness":
        cfg["multiloop"] = [{"curve": 0, "weight": math.pi / 2, "orientation": 1}]
        cfg["experiment"] = {"kind": "properness", "params": {"sequence": _growth()}}
    elif command == "experiment framed-properness":
        cfg["multiloop"] = [{"curve": 0, "weight": math.pi / 2, "orientation": 1}]
        cfg["experiment"] = {"kind": "framed-properness", "params": {"sequence": _growth()}}
    elif command == "experiment pinch":
        cfg = _base("theta")
        cfg["multiloop"] = [{"curve": 0, "weight": math.pi, "orientation": 1}]
        seq = {
            "steps": 50,
            "lengths": [{"kind": "pinch"}, {"kind": "fixed"}, {"kind": "fixed"}],
            "twist_steps": [0.0, 0.0, 0.0],
            "twist_units": "turns",
        }
        cfg["experiment"] = {"kind": "pinch", "params": {"loop": 0, "sequence": seq}}
    elif command == "experiment injectivity":
        params = {"points": 100, "lengths": [0.1, 6.0], "twists": [-10.0, 10.0], "min_distance": 1e-4}
        cfg["experiment"] = {"kind": "injectivity", "params": params}
    elif command == "experiment holomorphy":
        cfg["fn"] = {"lengths": [1.0, 1.5, 2.0], "twists": [0.5, -1.0, 2.0]}
        params = {"center": 1.0, "radius": 0.1, "n": 5, "h": 1e-4, "words": 10, "tol": 1e-5}
        cfg["experiment"] = {"kind": "holomorphy", "params": params}
    elif command == "experiment trace-identity":
        cfg["experiment"] = {"kind": "trace-identity", "params": {"samples": 10000, "tol": 1e-9}}
    elif command == "experiment noninjectivity":
        cfg = _base("theta")
        cfg["fn"] = {"lengths": [1.0, 1.0, 1.0], "twists": [0.25, 0.25, 0.25]}
        cfg["experiment"] = {"kind": "noninjectivity", "params": {"framings": 10, "tol": 1e-9, "control_min": 1e-6}}
    elif command.startswith("qgeodesic"):
        cfg["qgeodesic"] = {
            "curve": {"zigzag": {"segments": 8, "length": 50.0, "angle": math.pi / 2}},
            "eps": 0.5,
            "min_angle": math.pi / 3,
            "samples": 10000,
        }
    return cfg


def effective_config(command: str, user: dict | None) -> dict:
    cfg = defaults(command)
    if user:
        for key, value in user.items():
            if key == "experiment" and isinstance(value, dict):
                merged = dict(cfg.get("experiment", {}))
                merged.update(value)
                cfg["experiment"] = merged
            else:
                cfg[key] = copy.deepcopy(value)
        kind = cfg.get("experiment", {}).get("kind")
        if command.startswith("experiment ") and kind is not None and kind != command.split()[1]:
            raise ConfigError("/experiment/kind", f"config is for {kind!r}, command runs {command.split()[1]!r}")
    return cfg


# ---------------------------------------------------------------- commands


@dataclass
class Result:
    verdict: str
    report: dict
    tables: dict[str, list[tuple[int, str, complex]]] = field(default_factory=dict)


def _char_rows(c: CharacterVector, step: int = 0) -> list:
    return [(step, label, complex(v)) for label, v in zip(c.words.labels(), c.values)]


def _framing_out(framing: Framing) -> dict:
    return {str(m): {"u": _point_out(u), "v": _point_out(v)} for m, (u, v) in sorted(framing.pairs.items())}


def cmd_holonomy(job: Job) -> Result:
    P = job.pants()
    rep = fn_to_rep(P, job.fn(P))
    c = character(rep)
    res = rep.relation_residual
    report = {"relation_residual": res, "words": c.words.ident, "n_words": len(c.values)}
    return Result("ok" if res < 1e-8 else "relation_defect", report, {"character": _char_rows(c)})


def _framed(job: Job, check: bool = True):
    P = job.pants()
    fn = job.fn(P)
    rep = fn_to_rep(P, fn)
    M = job.multiloop(P)
    try:
        fr = FramedRep(rep, M, job.framing(rep, M), check=check)
    except QuakebendError as e:
        raise ConfigError("/framing", str(e)) from None
    return P, fn, rep, M, fr


def cmd_bend(job: Job) -> Result:
    *_, fr = _framed(job)
    bent = bend(fr)
    c = character(bent)
    res = bent.relation_residual
    report = {"relation_residual": res, "words": c.words.ident, "framing": _framing_out(fr.framing)}
    return Result("ok" if res < 1e-8 else "relation_defect", report, {"character": _char_rows(c)})


def cmd_cbend(job: Job) -> Result:
    *_, fr = _framed(job)
    pair = complexified_bend(fr)
    c1, c2 = pair.characters
    gap = float(np.max(np.abs(c2.values - np.conj(c1.values))))
    report = {
        "relation_residual": {"first": pair.first.relation_residual, "second": pair.second.relation_residual},
        "anti_diagonal_residual": gap,
        "words": c1.words.ident,
        "framing": _framing_out(fr.framing),
    }
    verdict = "anti_diagonal" if gap < 1e-9 else "off_diagonal"
    return Result(verdict, report, {"first": _char_rows(c1), "second": _char_rows(c2)})


def cmd_framing(job: Job) -> Result:
    # an unfixed framing is reported, not refused
    *_, M, fr = _framed(job, check=False)
    check = validate_framing(fr.rep, M, fr.framing)
    flags = fr.flags
    c = framed_character(fr)
    report = {
        "framing": _framing_out(fr.framing),
        "validity_residual": check.residual,
        "in_Xp": flags.in_Xp,
        "xp_loop": flags.xp_loop,
        "in_Xr": flags.in_Xr,
        "xr_component": flags.xr_component,
        "flag_residuals": flags.residuals,
        "words": c.words.ident,
    }
    return Result("valid" if check.passed else "invalid", report, {"framed_character": _char_rows(c)})


def _sweep_report(rep) -> dict:
    return {
        "sup_norms": rep.sup_norms,
        "cauchy": rep.cauchy,
        "thresholds": rep.thresholds.as_dict(),
        "cauchy_decay": rep.cauchy_decay,
        "monotone_tail": rep.monotone_tail,
        **rep.extras,
    }


def _sweep_table(vectors: Callable, seq: SequenceSpec, labels: list[str]) -> list:
    rows = []
    for i, fn in enumerate(seq.points(), start=1):
        for label, v in zip(labels, vectors(fn)):
            rows.append((i, label, complex(v)))
    return rows


def exp_properness(job: Job) -> Result:
    P = job.pants()
    M = job.multiloop(P)
    seq = job.sequence(P)
    rep = properness_sweep(P, M, seq, job.thresholds(), job.threads)
    labels = coordinate_words(P).labels()
    table = _sweep_table(lambda fn: bent_character(P, M, fn), seq, labels)
    return Result(rep.verdict, _sweep_report(rep), {"sweep": table})


def exp_pinch(job: Job) -> Result:
    P = job.pants()
    M = job.multiloop(P)
    seq = job.sequence(P)
    m = job.param("loop", int, M.loops[0] if M.loops else 0)
    try:
        rep = pinch_experiment(P, M, m, seq, job.thresholds(), job.threads)
    except ValueError as e:
        raise ConfigError("/experiment/params", str(e)) from None
    labels = coordinate_words(P).labels()
    table = _sweep_table(lambda fn: bent_character(P, M, fn), seq, labels)
    return Result(rep.verdict, _sweep_report(rep), {"sweep": table})


def exp_framed_properness(job: Job) -> Result:
    P = job.pants()
    M = job.multiloop(P)
    if len(M.loops) != 1:
        raise ConfigError("/multiloop", "framed properness bends along exactly one loop")
    seq = job.sequence(P)
    try:
        rep = framed_properness_sweep(P, M.loops[0], M.weights[0], seq, job.thresholds(), job.threads)
    except ValueError as e:
        raise ConfigError("/multiloop/0", str(e)) from None
    return Result(rep.verdict, _sweep_report(rep))


def exp_injectivity(job: Job) -> Result:
    P = job.pants()
    M = job.multiloop(P)
    n = job.param("points", int, 100)
    lengths = tuple(job.param("lengths", list, [0.1, 6.0]))
    twists = tuple(job.param("twists", list, [-10.0, 10.0]))
    floor = job.param("min_distance", (int, float), 1e-4)
    if n < 2:
        raise ConfigError("/experiment/params/points", "need at least two points")
    rep = injectivity_scan(P, M, fn_grid(P, n, job.seed, lengths, twists), job.threads)
    report = {"min_distance": rep.min_distance, "pair": list(rep.pair), "points": n, "floor": floor}
    return Result("injective" if rep.min_distance > floor else "not_separated", report)


def exp_holomorphy(job: Job) -> Result:
    P = job.pants()
    M = job.multiloop(P)
    fn = job.fn(P)
    grid = s_grid(
        _scalar(job.param("center", (int, float, dict), 1.0)),
        job.param("radius", (int, float), 0.1),
        job.param("n", int, 5),
    )
    count = job.param("words", int, 10)
    tol = job.param("tol", (int, float), 1e-5)
    wl = coordinate_words(P)
    words = list(wl.words[:count])
    rep = holomorphy_check(P, fn, M, words, grid, job.param("h", (int, float), 1e-4))
    report = {
        "max_residual": rep.max_residual,
        "per_word": dict(zip(wl.labels()[:count], rep.per_word)),
        "grid_points": len(grid),
        "step": rep.step,
        "tol": tol,
    }
    return Result("holomorphic" if rep.max_residual < tol else "not_holomorphic", report)


def exp_trace_identity(job: Job) -> Result:
    n = job.param("samples", int, 10000)
    tol = job.param("tol", (int, float), 1e-9)
    if n < 1:
        raise ConfigError("/experiment/params/samples", "need at least one sample")
    res = trace_identity_check(n, job.seed)
    return Result("pass" if res < tol else "fail", {"max_residual": res, "samples": n, "tol": tol})


def exp_noninjectivity(job: Job) -> Result:
    P = job.pants()
    M = job.multiloop(P)
    if len(M.loops) != 1:
        raise ConfigError("/multiloop", "the witness bends along exactly one separating loop")
    tol = job.param("tol", (int, float), 1e-9)
    floor = job.param("control_min", (int, float), 1e-6)
    try:
        rep = noninjectivity_witness(
            P, M.loops[0], M.weights[0], job.param("framings", int, 10), job.seed, control=job.fn(P)
        )
    except ValueError as e:
        raise ConfigError("/multiloop/0/curve", str(e)) from None
    report = {
        "spread": rep.spread,
        "control_spread": rep.control_spread,
        "framings": rep.n_framings,
        "in_Xr": rep.in_Xr,
        "tol": tol,
        "control_min": floor,
    }
    ok = rep.spread < tol and rep.control_spread > floor
    return Result("witness" if ok else "no_witness", report)


def _curve(job: Job) -> PiecewiseGeodesic:
    spec = job.cfg["qgeodesic"]["curve"]
    if "zigzag" in spec:
        z = spec["zigzag"]
        return PiecewiseGeodesic.zigzag(z["segments"], z["length"], z["angle"])
    try:
        return PiecewiseGeodesic.through([PointH3(*v) for v in spec["vertices"]])
    except (ValueError, QuakebendError) as e:
        raise ConfigError("/qgeodesic/curve/vertices", str(e)) from None


def _qg(job: Job) -> tuple[PiecewiseGeodesic, dict]:
    q = {"eps": 0.5, "min_angle": math.pi / 3, "samples": 10000}
    q.update(job.cfg.get("qgeodesic", {}))
    job.cfg["qgeodesic"] = q
    if "curve" not in q:
        raise ConfigError("/qgeodesic/curve", "a curve is required")
    return _curve(job), q


def cmd_certify(job: Job) -> Result:
    c, q = _qg(job)
    cert = certify_quasigeodesic(c, q["eps"], q["min_angle"], samples=q["samples"], seed=job.seed)
    report = {
        "status": cert.status,
        "P": cert.P,
        "Q": cert.Q,
        "R": cert.R,
        "r": cert.r,
        "min_length": cert.min_length,
        "min_angle_seen": cert.min_angle,
        "witness": list(cert.witness) if cert.witness else None,
        "segments": c.n_segments,
    }
    return Result(cert.status, report)


def cmd_empirical(job: Job) -> Result:
    c, q = _qg(job)
    cert = certify_quasigeodesic(c, q["eps"], q["min_angle"])
    P = q.get("P", cert.P)
    fitted = empirical_qi_constants(c, q["samples"], seed=job.seed)
    at_p = empirical_qi_constants(c, q["samples"], P=P, seed=job.seed)
    witness = find_violation(c, cert.P, cert.Q, q["samples"], job.seed)
    report = {
        "fitted": {"P": fitted.P, "Q": fitted.Q},
        "at_P": {"P": at_p.P, "Q": at_p.Q},
        "target": {"P": cert.P, "Q": cert.Q},
        "witness": list(witness) if witness else None,
        "samples": q["samples"],
    }
    return Result("violated" if witness else "satisfied", report)


COMMANDS: dict[str, Callable[[Job], Result]] = {
    "holonomy": cmd_holonomy,
    "bend": cmd_bend,
    "cbend": cmd_cbend,
    "framing": cmd_framing,
    "experiment properness": exp_properness,
    "experiment pinch": exp_pinch,
    "experiment injectivity": exp_injectivity,
    "experiment holomorphy": exp_holomorphy,
    "experiment trace-identity": exp_trace_identity,
    "experiment noninjectivity": exp_noninjectivity,
    "experiment framed-properness": exp_framed_properness,
    "qgeodesic certify": cmd_certify,
    "qgeodesic empirical": cmd_empirical,
}


# ---------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON config (schema qb-config/1)")
    common.add_argument("--out", metavar="DIR", default="qb-out", help="output directory (default: qb-out)")
    common.add_argument("--seed", type=int, help="seed for randomized oracles (default: config or 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    common.add_argument("--expect", metavar="VERDICT", help="exit 2 unless the verdict matches")

    parser = _Parser(prog="quakebend", description="Bending deformations of surface-group representations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("holonomy", "character of the Fuchsian holonomy of an FN point"),
        ("bend", "character of the bend along the multiloop"),
        ("cbend", "paired characters of the complexified bend"),
        ("framing", "framing, its residual, subvariety flags and framed character"),
    ):
        sub.add_parser(name, parents=[common], help=text)
    exp = sub.add_parser("experiment", parents=[common], help="sequence sweeps and desk-scale checks")
    exp.add_argument("kind", choices=EXPERIMENTS)
    qg = sub.add_parser("qgeodesic", parents=[common], help="quasi-geodesic certificate or sampled oracle")
    qg.add_argument("mode", choices=("certify", "empirical"))
    return parser


def _read_config(path: str | None) -> dict | None:
    if path is None:
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise ConfigError("", f"cannot read config: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ConfigError("", f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    validate_config(cfg)
    return cfg


def run(command: str, cfg: dict | None, out: str, seed: int | None = None, threads: int = 1, expect: str | None = None) -> int:
    """Run one command on a (validated) config and write its outputs. Returns the exit status."""
    effective = effective_config(command, cfg)
    validate_config(effective)
    seed = seed if seed is not None else effective.get("seed", 0)
    effective["seed"] = seed
    expect = expect if expect is not None else effective.get("expect")
    job = Job(command, effective, seed, threads, expect)
    try:
        result = COMMANDS[command](job)
    except ConfigError:
        raise
    except QuakebendError as e:
        raise ConfigError("", str(e)) from None

    os.makedirs(out, exist_ok=True)
    fmt = effective["output"].get("format", "both")
    prefix = effective["output"].get("prefix", "")
    if fmt in ("both", "json"):
        report = {
            "command": command,
            "schema": SCHEMA_ID,
            "seed": seed,
            "verdict": result.verdict,
            "expect": expect,
            "version": __version__,
            "config": job.cfg,
            "result": result.report,
        }
        _write_atomic(os.path.join(out, f"{prefix}report.json"), dumps(report) + "\n")
    if fmt in ("both", "csv"):
        for name, rows in result.tables.items():
            _write_atomic(os.path.join(out, f"{prefix}{name}.csv"), _csv_rows(job.label, rows))
    print(f"{command}: {result.verdict}")
    if expect is not None and result.verdict != expect:
        print(f"verdict {result.verdict!r} does not match expected {expect!r}", file=sys.stderr)
        return 2
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command
    if command == "experiment":
        command = f"experiment {args.kind}"
    elif command == "qgeodesic":
        command = f"qgeodesic {args.mode}"
    try:
        if args.threads < 1:
            raise ConfigError("", "--threads must be at least 1")
        if args.seed is not None and args.seed < 0:
            raise ConfigError("", "--seed must be non-negative")
        cfg = _read_config(args.config)
        return run(command, cfg, args.out, args.seed, args.threads, args.expect)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
