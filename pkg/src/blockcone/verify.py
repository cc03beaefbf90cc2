"""Exhaustive certification of blocking / minimality / triviality / planarity.

The blocking scan accumulates dually: for each point of the set it bumps the
counters of all hyperplanes through that point, so the work is
|S| * (hyperplanes per point) counter updates instead of one incidence test
per (hyperplane, point) pair.  Counters saturate at 255, which is safe:
blocking needs `>= 1` and minimality only distinguishes 1 from `>= 2`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import pg
from .pg import PointSet, ProjSpace, Subspace, span_in

_SAT = 255
_UNCOVERED_SAMPLE = 32


@dataclass
class CoverageResult:
    space: ProjSpace
    set_size: int
    counts: np.ndarray  # uint8, one cell per hyperplane rank, saturating
    uncovered_total: int
    uncovered_sample: list[int]
    checksum: int
    elapsed_ms: float

    @property
    def blocking(self) -> bool:
        return self.uncovered_total == 0


@dataclass
class MinimalityResult:
    essential: list[tuple[int, int]]  # (point rank, tangent hyperplane rank)
    inessential: list[int]
    elapsed_ms: float

    @property
    def minimal(self) -> bool:
        return not self.inessential


def _checksum(ps: PointSet) -> int:
    return hash((ps.space, ps.ranks.tobytes()))


def _point_hyperplane_ranges(n_points: int, workers: int):
    """Deterministic range partition; shards merge by saturating addition, so
    the result is independent of the partitioning."""
    workers = max(1, int(workers))
    bounds = np.linspace(0, n_points, workers + 1, dtype=np.int64)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if a < b]


def blocking_check(ps: PointSet, workers: int = 1) -> CoverageResult:
    """Coverage counter per hyperplane rank; blocking iff every counter >= 1."""
    t0 = time.perf_counter()
    space = ps.space
    counts = np.zeros(space.n_points, dtype=np.uint8)
    vecs = ps.vecs()
    for lo, hi in _point_hyperplane_ranges(len(vecs), workers):
        shard = np.zeros_like(counts)
        for v in vecs[lo:hi]:
            hyps = pg.incident_dual_ranks(space, v)
            c = shard[hyps]
            shard[hyps] = c + (c < _SAT)
        free = _SAT - counts
        np.minimum(shard, free, out=shard)
        counts += shard
    uncovered = np.flatnonzero(counts == 0)
    return CoverageResult(
        space=space,
        set_size=len(ps),
        counts=counts,
        uncovered_total=int(uncovered.size),
        uncovered_sample=[int(x) for x in uncovered[:_UNCOVERED_SAMPLE]],
        checksum=_checksum(ps),
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
    )


def minimality_check(ps: PointSet, coverage: CoverageResult) -> MinimalityResult:
    """A point is essential iff some hyperplane through it has counter exactly
    1 (that hyperplane is then a tangent witness)."""
    if coverage.checksum != _checksum(ps):
        raise ValueError("coverage array does not belong to this point set")
    t0 = time.perf_counter()
    counts = coverage.counts
    essential, inessential = [], []
    for rank, v in zip(ps.ranks, ps.vecs()):
        hyps = pg.incident_dual_ranks(ps.space, v)
        tangent = hyps[counts[hyps] == 1]
        if tangent.size:
            essential.append((int(rank), int(tangent.min())))
        else:
            inessential.append(int(rank))
    return MinimalityResult(essential, inessential,
                            (time.perf_counter() - t0) * 1e3)


def naive_coverage(ps: PointSet) -> np.ndarray:
    """Independent double-loop oracle: for each hyperplane, count incident set
    points.  Only for spaces small enough to enumerate densely."""
    space = ps.space
    if space.n_points > 10**4:
        raise ValueError("naive oracle restricted to <= 10^4 hyperplanes")
    duals = pg.unrank_batch(space, np.arange(space.n_points))
    vecs = ps.vecs()
    counts = np.zeros(space.n_points, dtype=np.int64)
    for v in vecs:
        prod = pg.dot(space, duals, np.broadcast_to(v, duals.shape))
        counts += prod == 0
    return counts


def triviality_check(ps: PointSet) -> bool:
    """True iff the set contains a full line.  Any contained line is spanned
    by two of its points, so the pair scan is exact."""
    space = ps.space
    if len(ps) < space.q + 1:
        return False
    ranks = set(int(x) for x in ps.ranks)
    vecs = ps.vecs()
    f = space.field
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            # points of the line <v_i, v_j> beyond the two generators
            lam = np.arange(1, space.q, dtype=np.int64)
            others = f.add_table[vecs[i][None, :],
                                 f.mul_table[lam[:, None], vecs[j][None, :]]]
            others = pg.normalize_batch(space, others)
            rr = pg.rank_batch(space, others)
            if all(int(x) in ranks for x in rr):
                return True
    return False


def planarity_check(ps: PointSet) -> tuple[int, bool]:
    """(span dimension, planar?) with planar meaning span dimension <= 2."""
    if len(ps) == 0:
        raise ValueError("empty point set")
    S = span_in(ps.space, ps.vecs())
    return S.dim, S.dim <= 2


@dataclass
class VerificationReport:
    manifest: dict
    space: str
    set_size: int
    blocking: dict | None = None
    minimality: dict | None = None
    trivial: bool | None = None
    planar: dict | None = None
    spectra: dict | None = None
    timings_ms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "manifest": self.manifest,
            "space": self.space,
            "sizes": {"set": self.set_size},
            "timings_ms": self.timings_ms,
        }
        for k in ("blocking", "minimality", "trivial", "planar", "spectra"):
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        return out


def run_checks(ps: PointSet, manifest: dict, checks, workers: int = 1,
               spectra: dict | None = None) -> VerificationReport:
    rep = VerificationReport(manifest=manifest, space=repr(ps.space),
                             set_size=len(ps))
    coverage = None
    if "blocking" in checks or "minimal" in checks:
        coverage = blocking_check(ps, workers=workers)
        rep.blocking = {
            "total": int(coverage.space.n_points),
            "uncovered": coverage.uncovered_sample,
            "uncovered_total": coverage.uncovered_total,
            "blocking": coverage.blocking,
        }
        rep.timings_ms["blocking"] = round(coverage.elapsed_ms, 3)
    if "minimal" in checks:
        mres = minimality_check(ps, coverage)
        rep.minimality = {
            "essential": [{"point": p, "witness": w} for p, w in mres.essential],
            "inessential": mres.inessential,
            "minimal": mres.minimal,
        }
        rep.timings_ms["minimality"] = round(mres.elapsed_ms, 3)
    if "trivial" in checks:
        t0 = time.perf_counter()
        rep.trivial = triviality_check(ps)
        rep.timings_ms["trivial"] = round((time.perf_counter() - t0) * 1e3, 3)
    if "planar" in checks:
        t0 = time.perf_counter()
        dim, planar = planarity_check(ps)
        rep.planar = {"span_dim": dim, "planar": planar}
        rep.timings_ms["planar"] = round((time.perf_counter() - t0) * 1e3, 3)
    if spectra is not None:
        rep.spectra = spectra
    return rep
