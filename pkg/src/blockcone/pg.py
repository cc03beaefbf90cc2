"""Projective geometry substrate over GF(q): canonical points, subspaces,
span/meet, incidence, and rank/unrank enumeration for PG(m,q).

Points are canonical coordinate vectors (leftmost nonzero coordinate 1) and
are usually carried around as their lexicographic rank; hyperplanes are dual
points with the same normalization and ranking.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .gf import FieldSpec, cached_field


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class ProjSpace:
    m: int  # projective dimension
    field: FieldSpec

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n_points(self) -> int:
        return (self.q ** (self.m + 1) - 1) // (self.q - 1)

    n_hyperplanes = n_points

    def hyperplanes_per_point(self) -> int:
        return (self.q**self.m - 1) // (self.q - 1)

    # number of canonical vectors whose pivot position is > j
    def _thresh(self, j: int) -> int:
        return (self.q ** (self.m - j) - 1) // (self.q - 1)

    def __repr__(self):
        return f"PG({self.m},{self.q})"


# ---------------------------------------------------------------------------
# canonical points and ranking


def normalize(space: ProjSpace, vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.int64)
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        raise GeometryError("zero vector has no projective class")
    lead = int(v[nz[0]])
    if lead != 1:
        v = space.field.mul_table[space.field.inv_table[lead], v]
    return v


def normalize_batch(space: ProjSpace, vecs: np.ndarray) -> np.ndarray:
    v = np.asarray(vecs, dtype=np.int64)
    piv = np.argmax(v != 0, axis=1)
    lead = v[np.arange(len(v)), piv]
    scale = space.field.inv_table[lead]
    return space.field.mul_table[scale[:, None], v].astype(np.int64)


def rank_of(space: ProjSpace, vec) -> int:
    return int(rank_batch(space, np.asarray(vec, dtype=np.int64)[None, :])[0])


def rank_batch(space: ProjSpace, vecs: np.ndarray) -> np.ndarray:
    """Ranks of canonical vectors, lexicographic by coordinate encodings."""
    v = np.asarray(vecs, dtype=np.int64)
    m, q = space.m, space.q
    piv = np.argmax(v != 0, axis=1)
    w = q ** np.arange(m, -1, -1, dtype=np.int64)  # weight q^(m-i)
    idx = np.arange(m + 1)
    val = ((v * w[None, :]) * (idx[None, :] > piv[:, None])).sum(axis=1)
    thresh = np.array([space._thresh(j) for j in range(m + 1)], dtype=np.int64)
    return thresh[piv] + val


def unrank(space: ProjSpace, i: int) -> np.ndarray:
    return unrank_batch(space, np.array([i]))[0]


def unrank_batch(space: ProjSpace, ranks: np.ndarray) -> np.ndarray:
    r = np.asarray(ranks, dtype=np.int64)
    m, q = space.m, space.q
    if r.size and (r.min() < 0 or r.max() >= space.n_points):
        raise GeometryError("rank out of range")
    thresh = np.array([space._thresh(j) for j in range(m + 1)], dtype=np.int64)
    # thresh is decreasing in j; pivot = largest j with thresh[j] <= rank
    piv = (m + 1) - np.searchsorted(thresh[::-1], r, side="right")
    rest = r - thresh[piv]
    out = np.zeros((len(r), m + 1), dtype=np.int64)
    out[np.arange(len(r)), piv] = 1
    for i in range(m, 0, -1):
        digit = rest % q
        rest = rest // q
        sel = piv < i
        out[sel, i] = digit[sel]
    return out


def enumerate_points(space: ProjSpace, start: int = 0, stop: int | None = None,
                     chunk: int = 1 << 14):
    """Canonical point vectors in rank order, yielded as (ranks, vecs) chunks."""
    stop = space.n_points if stop is None else stop
    for lo in range(start, stop, chunk):
        hi = min(lo + chunk, stop)
        ranks = np.arange(lo, hi, dtype=np.int64)
        yield ranks, unrank_batch(space, ranks)


def incident(pt_vec, hyp_vec, space: ProjSpace) -> bool:
    return dot(space, np.asarray(pt_vec), np.asarray(hyp_vec)) == 0


def dot(space: ProjSpace, u: np.ndarray, v: np.ndarray):
    f = space.field
    acc = None
    for i in range(space.m + 1):
        term = f.mul_table[u[..., i], v[..., i]]
        acc = term if acc is None else f.add_table[acc, term]
    return acc


def incident_dual_ranks(space: ProjSpace, vec) -> np.ndarray:
    """Ranks of all canonical dual vectors a with a . vec = 0, enumerated per
    pivot position in closed form (no normalization pass needed)."""
    v = np.asarray(vec, dtype=np.int64)
    m, q = space.m, space.q
    f = space.field
    add, mul, neg, inv = f.add_table, f.mul_table, f.neg_table, f.inv_table
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        raise GeometryError("zero vector")
    istar = int(nz[-1])
    w = q ** np.arange(m, -1, -1, dtype=np.int64)
    out = []
    for j in range(m + 1):
        if j == istar:
            continue
        if j > istar:
            base = space._thresh(j)
            out.append(np.arange(base, base + q ** (m - j), dtype=np.int64))
            continue
        free = [i for i in range(j + 1, m + 1) if i != istar]
        total = q ** len(free)
        ranks = np.full(total, space._thresh(j), dtype=np.int64)
        rhs = np.full(total, int(v[j]), dtype=np.int64)  # a_j = 1 contribution
        span = np.arange(total, dtype=np.int64)
        for pos, i in enumerate(reversed(free)):
            digit = (span // q**pos) % q
            ranks += digit * w[i]
            if v[i]:
                rhs = add[rhs, mul[int(v[i]), digit]]
        a_star = mul[int(neg[inv[v[istar]]]), rhs]
        ranks += a_star * w[istar]
        out.append(ranks)
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def hyperplanes_through(space: ProjSpace, vec) -> np.ndarray:
    """Dual ranks of all hyperplanes through the point, sorted."""
    r = incident_dual_ranks(space, vec)
    r.sort()
    return r


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Projective subspace as an RREF generator matrix; canonical, hashable.

    An empty matrix is the empty subspace (projective dimension -1)."""

    __slots__ = ("space", "mat", "pivots", "_key")

    def __init__(self, space: ProjSpace, mat: np.ndarray, *, _canonical=False):
        self.space = space
        mat = np.asarray(mat, dtype=np.int64).reshape(-1, space.m + 1)
        if _canonical:
            self.mat = mat
            self.pivots = tuple(int(np.argmax(row != 0)) for row in mat)
        else:
            self.mat, self.pivots = linalg.rref(mat, space.field)
        self.mat.setflags(write=False)
        self._key = (space, self.mat.tobytes())

    @property
    def dim(self) -> int:
        return self.mat.shape[0] - 1

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.space})"

    @classmethod
    def empty(cls, space: ProjSpace) -> "Subspace":
        return cls(space, np.zeros((0, space.m + 1), dtype=np.int64))

    @classmethod
    def full(cls, space: ProjSpace) -> "Subspace":
        return cls(space, np.eye(space.m + 1, dtype=np.int64))

    @classmethod
    def from_points(cls, space: ProjSpace, vecs) -> "Subspace":
        return cls(space, np.atleast_2d(np.asarray(vecs, dtype=np.int64)))

    def contains(self, vec) -> bool:
        return linalg.row_space_contains(self.mat, self.pivots,
                                         np.asarray(vec), self.space.field)

    def contains_sub(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.mat)

    def coords_of(self, vec) -> np.ndarray:
        """Coefficients of vec in the generator rows."""
        return linalg.solve_in_row_space(self.mat, self.pivots,
                                         np.asarray(vec), self.space.field)

    def n_points(self) -> int:
        q = self.space.q
        return (q ** (self.dim + 1) - 1) // (q - 1)

    def point_vecs(self) -> np.ndarray:
        """All canonical point vectors of the subspace (rank-sorted)."""
        if self.dim < 0:
            return np.zeros((0, self.space.m + 1), dtype=np.int64)
        coeff_space = ProjSpace(self.dim, self.space.field)
        coeffs = unrank_batch(coeff_space, np.arange(coeff_space.n_points))
        vecs = linalg.matmul(coeffs, self.mat, self.space.field)
        vecs = normalize_batch(self.space, vecs)
        order = np.argsort(rank_batch(self.space, vecs))
        return vecs[order]

    def point_ranks(self) -> np.ndarray:
        vecs = self.point_vecs()
        return rank_batch(self.space, vecs)

    def dual_forms(self) -> np.ndarray:
        """RREF basis of the linear forms vanishing on the subspace."""
        return linalg.kernel_basis(self.mat, self.space.field)


def span(items) -> Subspace:
    """Span of a nonempty list of Subspaces and/or point vectors."""
    items = list(items)
    if not items:
        raise GeometryError("span of empty input")
    space = None
    rows = []
    for it in items:
        if isinstance(it, Subspace):
            if space is None:
                space = it.space
            elif it.space != space:
                raise GeometryError("span across different spaces")
            rows.append(it.mat)
        else:
            rows.append(np.atleast_2d(np.asarray(it, dtype=np.int64)))
    if space is None:
        raise GeometryError("span needs at least one Subspace or a space hint")
    stacked = np.concatenate([np.asarray(r).reshape(-1, space.m + 1) for r in rows])
    return Subspace(space, stacked)


def span_in(space: ProjSpace, vecs) -> Subspace:
    return Subspace(space, np.atleast_2d(np.asarray(vecs, dtype=np.int64)))


def meet(A: Subspace, B: Subspace) -> Subspace:
    if A.space != B.space:
        raise GeometryError("meet across different spaces")
    if A.mat.shape[0] == 0 or B.mat.shape[0] == 0:
        return Subspace.empty(A.space)
    M = linalg.meet_row_spaces(A.mat, B.mat, A.space.field)
    return Subspace(A.space, M, _canonical=True)


# ---------------------------------------------------------------------------
# point sets


@dataclass(frozen=True)
class PointSet:
    """Sorted, deduplicated point ranks in a fixed ambient space."""

    space: ProjSpace
    ranks: np.ndarray = dc_field(compare=False)

    def __post_init__(self):
        r = np.unique(np.asarray(self.ranks, dtype=np.int64))
        if r.size and (r[0] < 0 or r[-1] >= self.space.n_points):
            raise GeometryError("point rank out of range")
        r.setflags(write=False)
        object.__setattr__(self, "ranks", r)

    def __len__(self):
        return int(self.ranks.size)

    def __eq__(self, other):
        return (isinstance(other, PointSet) and self.space == other.space
                and np.array_equal(self.ranks, other.ranks))

    def __hash__(self):
        return hash((self.space, self.ranks.tobytes()))

    def __contains__(self, rank: int):
        i = np.searchsorted(self.ranks, rank)
        return i < self.ranks.size and self.ranks[i] == rank

    @classmethod
    def from_vecs(cls, space: ProjSpace, vecs) -> "PointSet":
        vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        if vecs.shape[0] == 0:
            return cls(space, np.zeros(0, dtype=np.int64))
        return cls(space, rank_batch(space, normalize_batch(space, vecs)))

    def vecs(self) -> np.ndarray:
        return unrank_batch(self.space, self.ranks)

    def union(self, other: "PointSet") -> "PointSet":
        return PointSet(self.space, np.concatenate([self.ranks, other.ranks]))

    def minus(self, other: "PointSet") -> "PointSet":
        return PointSet(self.space, np.setdiff1d(self.ranks, other.ranks))

    def intersect(self, other: "PointSet") -> "PointSet":
        return PointSet(self.space, np.intersect1d(self.ranks, other.ranks))


def save_point_set(ps: PointSet, path) -> None:
    """Text format: header `p k m+1`, then one point per line as
    space-separated element encodings."""
    f = ps.space.field
    with open(path, "w") as fh:
        fh.write(f"{f.p} {f.k} {ps.space.m + 1}\n")
        for row in ps.vecs():
            fh.write(" ".join(map(str, row.tolist())) + "\n")


def load_point_set(path) -> PointSet:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise GeometryError(f"bad point-set header in {path}")
        p, k, width = map(int, header)
        space = ProjSpace(width - 1, cached_field(p, k))
        rows = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            row = list(map(int, line.split()))
            if len(row) != width:
                raise GeometryError(f"bad point width in {path}")
            rows.append(row)
    if not rows:
        return PointSet(space, np.zeros(0, dtype=np.int64))
    raw = np.array(rows, dtype=np.int64)
    canon = normalize_batch(space, raw)
    if not np.array_equal(canon, raw):
        warnings.warn(f"{path}: points were not canonical; re-normalized")
    ranks = rank_batch(space, canon)
    if len(np.unique(ranks)) != len(ranks) or not np.array_equal(
            ranks, np.sort(ranks)):
        warnings.warn(f"{path}: points were not sorted/deduplicated; fixed")
    return PointSet(space, ranks)
