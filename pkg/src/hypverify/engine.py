"""Threshold formulas, the content inequalities, and verification campaigns.

The two threshold computations are exact: rational arithmetic throughout,
with the single transcendental step (a ceiling of a multiple of a natural
logarithm) resolved by interval refinement with outward rounding.

A campaign walks a candidate stream, checks the disk (or cylinder)
content inequality exactly, and runs the class exclusion test on every
violator.  Work is split into fixed-size shards whose partial reports
merge associatively, so the aggregated report is byte-deterministic
regardless of worker count or interruption/resume, and every failure
witness is embedded in the report as a self-contained graph text.
"""

from __future__ import annotations

import json
import multiprocessing
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .criticality import ClassSpec, Exclusion, exclude_candidate
from .embedding import CylinderGraph, DiskGraph, parse_graph, serialize_graph
from .enumeration import canonical_code, enumerate_cylinder_graphs, enumerate_disk_graphs
from .errors import FOutOfDomain, FormatError
from .exact import (
    LogAffine,
    ceil_fraction,
    ceil_log_product,
    compare_with_log,
    format_rational,
    parse_rational,
)

SCHEMA = "hypverify-report/1"


@dataclass(frozen=True)
class Theorem1Constants:
    """Constants of the disk-threshold theorem for given c and epsilon."""

    c: Fraction
    epsilon: Fraction
    c_prime: Fraction
    beta: Fraction
    b: Fraction
    t: int
    external_bound: int | None = None

    def to_dict(self) -> dict:
        return {
            "c": format_rational(self.c),
            "epsilon": format_rational(self.epsilon),
            "c_prime": format_rational(self.c_prime),
            "beta": format_rational(self.beta),
            "b": format_rational(self.b),
            "t": self.t,
            "external_bound": self.external_bound,
        }


def theorem1_threshold(c, epsilon, external_bound: int | None = None) -> Theorem1Constants:
    """Size threshold sufficient for hyperbolicity with constant c+epsilon.

    b is exact; t = ceil(2*b*ln(b)) is certified by interval rounding.
    The proof-side requirements are asserted: beta < 1/(2(c+1)) and
    t >= 24(c'+1)*ln(t) + 48.
    """
    c = Fraction(c)
    eps = Fraction(epsilon)
    if c <= 0 or eps <= 0:
        raise FormatError("c and epsilon must be positive")
    c_prime = c + eps
    b = 2 * (c + 1) * (c + 1 + eps) * (45 * c + 45 * eps + 81) / eps
    beta = eps / (2 * (c + 1) * (c_prime + 1))
    t = ceil_log_product(2 * b, b)
    assert beta < 1 / (2 * (c + 1)), "beta bound violated"
    need = LogAffine(Fraction(48), 24 * (c_prime + 1), Fraction(t))
    assert compare_with_log(Fraction(t), need) >= 0, (
        "threshold fails its own iteration requirement"
    )
    return Theorem1Constants(c, eps, c_prime, beta, b, t, external_bound)


class BoundFunction:
    """Nondecreasing f on the naturals, as a table or an affine form."""

    def __init__(self, table=None, affine=None, name=None):
        if (table is None) == (affine is None):
            raise FormatError("exactly one of table/affine required")
        self.table = list(table) if table is not None else None
        self.affine = affine  # (p, q): f(k) = p + q*k, ceil'd
        self.name = name
        if self.table is not None and any(
            self.table[i] > self.table[i + 1] for i in range(len(self.table) - 1)
        ):
            raise FormatError("f table must be nondecreasing")
        if self.affine is not None and Fraction(self.affine[1]) < 0:
            raise FormatError("affine f must be nondecreasing")

    @classmethod
    def identity(cls):
        return cls(affine=(Fraction(0), Fraction(1)), name="id")

    def __call__(self, k: int) -> int:
        if self.table is not None:
            if not (0 <= k < len(self.table)):
                raise FOutOfDomain(f"f undefined at {k}")
            return self.table[k]
        p, q = self.affine
        return ceil_fraction(Fraction(p) + Fraction(q) * k)

    def describe(self) -> str:
        if self.name:
            return self.name
        if self.table is not None:
            return f"table{self.table}"
        p, q = self.affine
        return f"{format_rational(Fraction(p))}+{format_rational(Fraction(q))}k"


@dataclass(frozen=True)
class Theorem2Constants:
    """Constants of the cylinder-threshold theorem."""

    c: Fraction
    m: int
    t: Fraction
    f: BoundFunction
    g_const: Fraction  # g(k) = ceil(2ck + 8c^2 + 16c) + g_const holds via g()

    def g(self, k: int) -> int:
        c = self.c
        return ceil_fraction(2 * c * k + 8 * c * c + 16 * c) + 6 + self.f(self.m)

    def to_dict(self) -> dict:
        return {
            "c": format_rational(self.c),
            "m": self.m,
            "t": format_rational(self.t),
            "f": self.f.describe(),
            "f_at_m": self.f(self.m),
        }


def theorem2_constants(c, f: BoundFunction) -> Theorem2Constants:
    """Cylinder threshold t = f(ceil(8c+4)) + 16c^2 + 24c + 8 and the
    resulting strong-hyperbolicity function g."""
    c = Fraction(c)
    if c <= 0:
        raise FormatError("c must be positive")
    m = ceil_fraction(8 * c + 4)
    fm = f(m)
    t = fm + 16 * c * c + 24 * c + 8
    out = Theorem2Constants(c, m, t, f, Fraction(fm + 6))
    assert Fraction(fm) <= t, "t must dominate f(m)"
    # g nondecreasing wherever f is: both summands are nondecreasing in k
    assert out.g(m) >= fm + 6
    return out


def check_disk_inequality(h: DiskGraph, c) -> bool:
    """Interior content against c*(boundary - 1); True means it holds."""
    c = Fraction(c)
    return Fraction(h.interior_count) <= c * (h.boundary_count - 1)


def check_cylinder_inequality(h: CylinderGraph, f: BoundFunction) -> bool:
    interior = h.n - len(h.side1) - len(h.side2)
    return interior <= f(len(h.side1) + len(h.side2))


# --- campaign machinery ---


@dataclass
class CampaignConfig:
    spec: ClassSpec
    cheeger_c: Fraction
    max_size: int
    surface: str = "disk"
    f: BoundFunction | None = None
    epsilon: Fraction | None = None
    jobs: int = 1
    checkpoint_dir: str | None = None
    shard_size: int = 64

    @classmethod
    def from_json(cls, data: dict) -> "CampaignConfig":
        cls_data = data.get("class")
        if not isinstance(cls_data, dict):
            raise FormatError("config needs a 'class' object")
        spec = ClassSpec(
            girth_min=int(cls_data["girth_min"]),
            k=int(cls_data["k"]),
            mode=cls_data.get("mode", "coloring"),
            palette_bound=(
                int(cls_data["palette_bound"])
                if cls_data.get("palette_bound") is not None
                else None
            ),
        )
        surface = data.get("surface", "disk")
        if surface not in ("disk", "cylinder"):
            raise FormatError(f"bad surface {surface!r}")
        f = None
        if surface == "cylinder":
            if "f_table" in data:
                f = BoundFunction(table=[int(x) for x in data["f_table"]])
            else:
                f = BoundFunction.identity()
        return cls(
            spec=spec,
            cheeger_c=parse_rational(str(data["cheeger_c"])),
            max_size=int(data["max_size"]),
            surface=surface,
            f=f,
            epsilon=(
                parse_rational(str(data["epsilon"]))
                if data.get("epsilon") is not None
                else None
            ),
            jobs=int(data.get("jobs", 1)),
            checkpoint_dir=data.get("checkpoint_dir"),
            shard_size=int(data.get("shard_size", 64)),
        )

    def to_dict(self) -> dict:
        out = {
            "class": {
                "girth_min": self.spec.girth_min,
                "k": self.spec.k,
                "mode": self.spec.mode,
                "palette_bound": self.spec.palette_bound,
            },
            "cheeger_c": format_rational(self.cheeger_c),
            "max_size": self.max_size,
            "surface": self.surface,
        }
        if self.surface == "cylinder":
            out["f"] = self.f.describe()
        if self.epsilon is not None:
            out["epsilon"] = format_rational(self.epsilon)
        return out


@dataclass
class CampaignReport:
    config: dict
    candidates_examined: int = 0
    eq1_violators: int = 0
    excluded_girth: int = 0
    excluded_noncritical: int = 0
    failures: list = field(default_factory=list)  # (code, graph text)
    unknowns: int = 0
    shards: list = field(default_factory=list)
    wall_time: float | None = None

    @property
    def succeeded(self) -> bool:
        return not self.failures and self.unknowns == 0

    def merge(self, other: "CampaignReport"):
        self.candidates_examined += other.candidates_examined
        self.eq1_violators += other.eq1_violators
        self.excluded_girth += other.excluded_girth
        self.excluded_noncritical += other.excluded_noncritical
        self.failures.extend(other.failures)
        self.unknowns += other.unknowns
        self.shards.extend(other.shards)

    def finalize(self):
        self.failures.sort(key=lambda fw: fw[0])
        self.shards.sort(key=lambda s: s["shard"])
        non_violators = self.candidates_examined - self.eq1_violators
        assert (
            self.eq1_violators + non_violators == self.candidates_examined
        )
        assert (
            self.excluded_girth
            + self.excluded_noncritical
            + len(self.failures)
            + self.unknowns
            == self.eq1_violators
        ), "exclusion verdicts must partition the violators"

    def to_dict(self, include_timing=False) -> dict:
        out = {
            "schema": SCHEMA,
            "config": self.config,
            "candidates_examined": self.candidates_examined,
            "eq1_violators": self.eq1_violators,
            "exclusions": {
                "girth": self.excluded_girth,
                "noncritical": self.excluded_noncritical,
            },
            "unknowns": self.unknowns,
            "failures": [
                {"code": code, "graph": text} for code, text in self.failures
            ],
            "succeeded": self.succeeded,
            "shards": self.shards,
        }
        if include_timing and self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, include_timing=False) -> str:
        return json.dumps(
            self.to_dict(include_timing), indent=2, sort_keys=True
        ) + "\n"


def _process_disk_shard(args):
    shard_id, texts, spec, c, max_size = args
    rep = CampaignReport(config={})
    for text in texts:
        h = DiskGraph.from_embedding(parse_graph(text))
        if h.n > max_size:
            continue
        rep.candidates_examined += 1
        if h.n > 0 and not check_disk_inequality(h, c):
            rep.eq1_violators += 1
            verdict = exclude_candidate(h, spec)
            if verdict is Exclusion.EXCLUDED_GIRTH:
                rep.excluded_girth += 1
            elif verdict is Exclusion.EXCLUDED_NONCRITICAL:
                rep.excluded_noncritical += 1
            elif verdict is Exclusion.UNKNOWN:
                rep.unknowns += 1
            else:
                rep.failures.append(
                    (canonical_code(h.base).data.decode(), text)
                )
    rep.shards.append(
        {"shard": shard_id, "candidates": rep.candidates_examined,
         "violators": rep.eq1_violators}
    )
    return shard_id, rep


def _process_cylinder_shard(args):
    shard_id, texts, spec, f, max_size = args
    rep = CampaignReport(config={})
    for text in texts:
        h = CylinderGraph.from_embedding(parse_graph(text))
        if h.n > max_size:
            continue
        rep.candidates_examined += 1
        if not check_cylinder_inequality(h, f):
            rep.eq1_violators += 1
            hd = DiskGraph(h.base, h.base.boundary_count, h.base.interior_count)
            verdict = exclude_candidate(hd, spec)
            if verdict is Exclusion.EXCLUDED_GIRTH:
                rep.excluded_girth += 1
            elif verdict is Exclusion.EXCLUDED_NONCRITICAL:
                rep.excluded_noncritical += 1
            elif verdict is Exclusion.UNKNOWN:
                rep.unknowns += 1
            else:
                rep.failures.append(
                    (canonical_code(h.base).data.decode(), text)
                )
    rep.shards.append(
        {"shard": shard_id, "candidates": rep.candidates_examined,
         "violators": rep.eq1_violators}
    )
    return shard_id, rep


def _shards(stream: Iterable, size: int):
    block = []
    sid = 0
    for item in stream:
        block.append(serialize_graph(item.base))
        if len(block) >= size:
            yield sid, block
            sid += 1
            block = []
    if block:
        yield sid, block


def _run_campaign(config: CampaignConfig, stream, worker, extra,
                  abort_after: int | None = None) -> CampaignReport:
    report = CampaignReport(config=config.to_dict())
    start = time.time()
    ckpt = config.checkpoint_dir
    if ckpt:
        os.makedirs(ckpt, exist_ok=True)

    def shard_path(sid):
        return os.path.join(ckpt, f"shard-{sid:06d}.json")

    def load_cached(sid):
        if not ckpt:
            return None
        path = shard_path(sid)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            data = json.load(fh)
        rep = CampaignReport(config={})
        rep.candidates_examined = data["candidates_examined"]
        rep.eq1_violators = data["eq1_violators"]
        rep.excluded_girth = data["exclusions"]["girth"]
        rep.excluded_noncritical = data["exclusions"]["noncritical"]
        rep.unknowns = data["unknowns"]
        rep.failures = [(f["code"], f["graph"]) for f in data["failures"]]
        rep.shards = data["shards"]
        return rep

    def store(sid, rep):
        if not ckpt:
            return
        path = shard_path(sid)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(rep.to_dict(), fh, sort_keys=True)
        os.replace(tmp, path)

    todo = []
    done = 0
    for sid, block in _shards(stream, config.shard_size):
        cached = load_cached(sid)
        if cached is not None:
            report.merge(cached)
            continue
        todo.append((sid, block) + extra)

    def consume(sid, rep):
        nonlocal done
        store(sid, rep)
        report.merge(rep)
        done += 1
        if abort_after is not None and done >= abort_after:
            raise KeyboardInterrupt

    try:
        if config.jobs > 1 and len(todo) > 1:
            with multiprocessing.Pool(config.jobs) as pool:
                for sid, rep in pool.imap(worker, todo):
                    consume(sid, rep)
        else:
            for args in todo:
                consume(*worker(args))
    except KeyboardInterrupt:
        if abort_after is None:
            raise
    report.wall_time = time.time() - start
    report.finalize()
    return report


def verify_hyperbolic_up_to(
    spec: ClassSpec,
    c,
    t: int,
    candidates: Iterable[DiskGraph] | None = None,
    *,
    jobs: int = 1,
    checkpoint_dir: str | None = None,
    abort_after: int | None = None,
) -> CampaignReport:
    """Check the disk inequality on every candidate and try to exclude
    each violator from the class; the report aggregates all verdicts."""
    c = Fraction(c)
    config = CampaignConfig(
        spec=spec, cheeger_c=c, max_size=int(t), surface="disk",
        jobs=jobs, checkpoint_dir=checkpoint_dir,
    )
    if candidates is None:
        candidates = enumerate_disk_graphs(
            int(t), girth_min=spec.girth_min
        )
    return _run_campaign(
        config, candidates, _process_disk_shard, (spec, c, int(t)), abort_after
    )


def verify_strongly_hyperbolic_up_to(
    spec: ClassSpec,
    f: BoundFunction,
    t: int,
    candidates: Iterable[CylinderGraph] | None = None,
    *,
    jobs: int = 1,
    checkpoint_dir: str | None = None,
    abort_after: int | None = None,
) -> CampaignReport:
    """Cylinder campaign: content against f, exclusions on violators."""
    config = CampaignConfig(
        spec=spec, cheeger_c=Fraction(0), max_size=int(t), surface="cylinder",
        f=f, jobs=jobs, checkpoint_dir=checkpoint_dir,
    )
    cfg_dict = config.to_dict()
    cfg_dict.pop("cheeger_c", None)
    if candidates is None:
        candidates = enumerate_cylinder_graphs(
            int(t), girth_min=spec.girth_min
        )
    report = _run_campaign(
        config, candidates, _process_cylinder_shard, (spec, f, int(t)),
        abort_after,
    )
    report.config = cfg_dict
    return report
