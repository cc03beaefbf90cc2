"""Field-reduction desarguesian spreads and the Barlotti-Cofman model.

The big space PG(r, q1^n) is represented inside Sigma' = PG(rn, q1): its
affine points correspond to the points of Sigma' off the fixed hyperplane
Sigma = {last coordinate 0}, its infinite points to the elements of the
desarguesian (n-1)-spread of Sigma obtained by field reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, pg
from .gf import FieldTower, cached_tower, is_prime
from .pg import GeometryError, ProjSpace, Subspace


def make_model(q1: int, n: int, r: int, xprime_index: int = 1) -> "BCModel":
    """Build the model for PG(r, q1^n) from the small-field order q1."""
    p = None
    for cand in range(2, q1 + 1):
        if is_prime(cand) and q1 % cand == 0:
            p = cand
            break
    t = 0
    m = q1
    while m > 1:
        if m % p:
            raise GeometryError(f"{q1} is not a prime power")
        m //= p
        t += 1
    return BCModel(cached_tower(p, t, n), r, xprime_index)


@dataclass(frozen=True)
class Spread:
    """Desarguesian (n-1)-spread of Sigma = PG(rn-1, q1), indexed by the rank
    of the corresponding point of PG(r-1, q1^n).  Elements are generated on
    demand; the index of the element through a Sigma-point is computed by
    reconstituting its coordinate blocks, so no global lookup table is kept."""

    tower: FieldTower
    r: int

    @property
    def n(self) -> int:
        return self.tower.n

    @property
    def sigma_space(self) -> ProjSpace:
        return ProjSpace(self.r * self.n - 1, self.tower.sub)

    @property
    def big_space(self) -> ProjSpace:
        return ProjSpace(self.r - 1, self.tower.sup)

    @property
    def n_elements(self) -> int:
        return self.big_space.n_points

    def element_point_vecs(self, index: int) -> np.ndarray:
        """Canonical Sigma-coordinate vectors (length rn) of one element."""
        x = pg.unrank(self.big_space, index)
        sup = self.tower.sup
        lam = np.arange(1, sup.q, dtype=np.int64)
        scaled = sup.mul_table[lam[:, None], x[None, :]]  # (q-1, r) big coords
        blocks = self.tower.coords(scaled)  # (q-1, r, n)
        vecs = blocks.reshape(len(lam), self.r * self.n)
        vecs = pg.normalize_batch(self.sigma_space, vecs)
        ranks = np.unique(pg.rank_batch(self.sigma_space, vecs))
        return pg.unrank_batch(self.sigma_space, ranks)

    def element_of_vec(self, vec) -> int:
        """Spread element index of a Sigma-point (length rn coordinates)."""
        v = np.asarray(vec, dtype=np.int64)
        big = self.tower.reconstitute(v.reshape(self.r, self.n))
        if not big.any():
            raise GeometryError("zero vector")
        big = pg.normalize(self.big_space, big)
        return pg.rank_of(self.big_space, big)


class BCModel:
    """The Barlotti-Cofman frame Pi_r(Sigma', Sigma, S) ~ PG(r, q1^n).

    Immutable after construction; X is the spread element of big-point rank 0,
    X' (used by the cone example) a second element selected by `xprime_index`,
    and the vertex point p the least-rank point of X.
    """

    def __init__(self, tower: FieldTower, r: int, xprime_index: int = 1):
        self.tower = tower
        self.n = tower.n
        self.r = r
        self.q1 = tower.sub.q
        n = self.n
        self.spread = Spread(self.tower, r)
        self.sigma_prime = ProjSpace(r * n, self.tower.sub)
        self.pi_space = ProjSpace(r, self.tower.sup)
        sig = np.zeros((r * n, r * n + 1), dtype=np.int64)
        sig[:, : r * n] = np.eye(r * n, dtype=np.int64)
        self.sigma = Subspace(self.sigma_prime, sig)
        self.x_index = 0
        if not 0 < xprime_index < self.spread.n_elements:
            raise GeometryError("invalid X' index")
        self.xprime_index = xprime_index
        self.X = self.element_subspace(self.x_index)
        self.Xprime = self.element_subspace(self.xprime_index)
        self.vertex_p = self.X.point_vecs()[0]

    # -- spread elements in Sigma' coordinates ------------------------------

    def _lift(self, sigma_vecs: np.ndarray) -> np.ndarray:
        out = np.zeros((sigma_vecs.shape[0], self.r * self.n + 1), dtype=np.int64)
        out[:, : self.r * self.n] = sigma_vecs
        return out

    def element_subspace(self, index: int) -> Subspace:
        # feed all element points to rref: a prefix of the canonical point
        # list need not be independent
        vecs = self.spread.element_point_vecs(index)
        return Subspace(self.sigma_prime, self._lift(vecs))

    def element_point_vecs(self, index: int) -> np.ndarray:
        return self._lift(self.spread.element_point_vecs(index))

    def spread_element_of(self, vec) -> int:
        v = np.asarray(vec, dtype=np.int64)
        if v[-1] != 0:
            raise GeometryError("point is not in Sigma")
        return self.spread.element_of_vec(v[:-1])

    # -- the two-way point map ----------------------------------------------

    def bc_to_pg_vec(self, vec) -> np.ndarray:
        """Affine Sigma'-point -> canonical point of PG(r, q1^n)."""
        v = np.asarray(vec, dtype=np.int64)
        if v[-1] == 0:
            raise GeometryError("point of Sigma passed as affine")
        return self.bc_to_pg_batch(v[None, :])[0]

    def bc_to_pg_batch(self, vecs: np.ndarray) -> np.ndarray:
        v = np.asarray(vecs, dtype=np.int64)
        if np.any(v[:, -1] == 0):
            raise GeometryError("point of Sigma passed as affine")
        sub = self.tower.sub
        scale = sub.inv_table[v[:, -1]]
        v = sub.mul_table[scale[:, None], v]
        blocks = v[:, : self.r * self.n].reshape(-1, self.r, self.n)
        big = self.tower.reconstitute(blocks)  # (N, r)
        out = np.concatenate([big, np.ones((len(big), 1), dtype=np.int64)], axis=1)
        return pg.normalize_batch(self.pi_space, out)

    def spread_to_pg_vec(self, index: int) -> np.ndarray:
        x = pg.unrank(self.spread.big_space, index)
        out = np.concatenate([x, np.zeros(1, dtype=np.int64)])
        return pg.normalize(self.pi_space, out)

    def pg_to_bc(self, vec):
        """Point of PG(r, q1^n) -> affine Sigma'-point vector, or ('spread', i)."""
        v = np.asarray(vec, dtype=np.int64)
        if v[-1] == 0:
            return ("spread", pg.rank_of(self.spread.big_space, v[:-1]))
        sup = self.tower.sup
        scale = sup.inv_table[v[-1]]
        v = sup.mul_table[scale, v]
        blocks = self.tower.coords(v[:-1]).reshape(-1)
        out = np.concatenate([blocks, np.ones(1, dtype=np.int64)])
        return pg.normalize(self.sigma_prime, out)

    # -- hyperplane blow-up --------------------------------------------------

    def blowup_forms(self, dual_vec) -> np.ndarray:
        """(n, rn+1) matrix of small-field linear forms whose common kernel is
        the blow-up of the hyperplane with the given dual point."""
        a = np.asarray(dual_vec, dtype=np.int64)
        forms = np.zeros((self.n, self.r * self.n + 1), dtype=np.int64)
        for i in range(self.r):
            M = self.tower.blowup_matrix(int(a[i]))
            forms[:, i * self.n : (i + 1) * self.n] = M
        forms[:, -1] = self.tower.coords(int(a[self.r]))
        return forms

    def hyperplane_blowup(self, dual_vec) -> Subspace:
        forms = self.blowup_forms(dual_vec)
        gens = linalg.kernel_basis(forms, self.tower.sub)
        return Subspace(self.sigma_prime, gens, _canonical=True)

    # -- reguli --------------------------------------------------------------

    def regulus_of_line(self, line: Subspace) -> tuple[int, ...]:
        """Indices of the spread elements meeting a line of Sigma that is not
        inside a single element."""
        if line.dim != 1 or not self.sigma.contains_sub(line):
            raise GeometryError("expected a line inside Sigma")
        idx = sorted({self.spread_element_of(v) for v in line.point_vecs()})
        if len(idx) == 1:
            raise GeometryError("line is contained in a spread element")
        return tuple(idx)

    def is_pi_line(self, S: Subspace) -> bool:
        """A line of Pi_r: an n-subspace of Sigma' meeting Sigma in a spread
        element."""
        if S.dim != self.n:
            return False
        inf = pg.meet(S, self.sigma)
        if inf.dim != self.n - 1:
            return False
        pts = inf.point_vecs()
        return len({self.spread_element_of(v) for v in pts}) == 1

    def manifest(self) -> dict:
        return {
            "q1": self.q1,
            "n": self.n,
            "r": self.r,
            "small_modulus": self.tower.sub.manifest(),
            "big_modulus": self.tower.sup.manifest(),
            "basis": list(self.tower.basis.elements),
            "x_index": self.x_index,
            "xprime_index": self.xprime_index,
            "vertex_p": self.vertex_p.tolist(),
        }
