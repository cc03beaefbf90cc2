"""The non-planar cone example in PG(3, q^6).

Works inside Sigma' = PG(9, q^2) with the 2-spread of Sigma: two spread
elements X, X' are fixed, a Baer-subplane cone over a vertex point of
Theta = Gamma cap X is punctured along its unique real line through a point
t of X' and repaired with one generator (Bbar), a second cone over three
lines of X' from an outside point h supplies the affine part Btilde, and
B = K(p, Bbar cup Btilde) cup {X} is a minimal non-planar blocking set of
PG(3, q^6) whose cardinality 4q^6 - 3q^4 + q^2 + 1 rules out the plain
cone-over-hyperplane-blocking-set family on divisibility grounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import pg
from .gf import cached_field, is_prime, subfield_embed
from .linalg import kernel_basis, matmul, rref
from .model import BCModel, make_model
from .mps import MPSFrame, cone, mps_build, mps_size_predict, \
    pi_hyperplane_ranks_avoiding_x
from .pg import GeometryError, PointSet, ProjSpace, Subspace, meet, span, span_in


@dataclass(eq=False)
class Example36Frame:
    q: int
    seed: int
    model: BCModel
    mps: MPSFrame          # Omega = {p}, s = 0
    r_pt: np.ndarray       # least-rank point of Theta (cone vertex)
    q_tilde: np.ndarray    # second point of Theta
    t: np.ndarray          # least-rank point of X'
    pi: Subspace           # plane of Gamma' with pi cap Sigma = <t, q_tilde>
    V: PointSet            # Baer subplane of pi through q_tilde
    L: Subspace            # the unique real line of pi through t
    s_pt: np.ndarray       # least-rank point of V cap L
    t_tilde: np.ndarray    # the distinguished second point of X' (regulus)
    h: np.ndarray          # cone point outside <X, X', pi>
    lines_xp: tuple[Subspace, Subspace, Subspace]  # L1, L2, L3 in X'
    bbar: PointSet         # Sigma' ranks
    btilde: PointSet       # Sigma' ranks

    @property
    def gamma(self) -> Subspace:
        return self.mps.gamma

    @property
    def gamma_prime(self) -> Subspace:
        return self.mps.gamma_prime

    @property
    def theta(self) -> Subspace:
        return self.mps.theta


@dataclass(eq=False)
class Bundle:
    frame: Example36Frame
    B: PointSet  # Pi_3 = PG(3, q^6) ranks

    def manifest(self) -> dict:
        fr = self.frame
        m = fr.model
        sp = m.sigma_prime
        return {
            **m.manifest(),
            "q": fr.q,
            "seed": fr.seed,
            "sizes": {"bbar": len(fr.bbar), "btilde": len(fr.btilde),
                      "B": len(self.B)},
            "r_pt": int(pg.rank_of(sp, fr.r_pt)),
            "q_tilde": int(pg.rank_of(sp, fr.q_tilde)),
            "t": int(pg.rank_of(sp, fr.t)),
            "s_pt": int(pg.rank_of(sp, fr.s_pt)),
            "t_tilde": int(pg.rank_of(sp, fr.t_tilde)),
            "h": int(pg.rank_of(sp, fr.h)),
        }


def _check_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            e = 0
            m = q
            while m > 1:
                if m % p:
                    raise GeometryError(f"{q} is not a prime power")
                m //= p
                e += 1
            return p, e
    raise GeometryError(f"{q} is not a prime power")


def frame36_make(q: int, seed: int = 0) -> Example36Frame:
    """Deterministic frame for the PG(3, q^6) example: X = element 0,
    X' = element 1 + (seed mod 8), p = least point of X, Gamma = the least
    hyperplane of Sigma containing X' and missing p."""
    _check_prime_power(q)
    model = make_model(q * q, 3, 3, xprime_index=1 + seed % 8)
    sp = model.sigma_prime
    rn = 9
    p_vec = model.vertex_p

    # duals of Sigma vanishing on X': kernel of the generator matrix acting on
    # coefficient vectors
    sint = ProjSpace(rn - 1, model.tower.sub)
    xp_int = Subspace(sint, model.Xprime.mat[:, :rn])
    basis = kernel_basis(xp_int.mat, sint.field)
    coeff_space = ProjSpace(basis.shape[0] - 1, sint.field)
    coeffs = pg.unrank_batch(coeff_space, np.arange(coeff_space.n_points))
    duals = pg.normalize_batch(sint, matmul(coeffs, basis, sint.field))
    order = np.argsort(pg.rank_batch(sint, duals))
    gamma = None
    p_int = p_vec[:rn]
    for f in duals[order]:
        if pg.dot(sint, p_int, f) != 0:
            gam_int = Subspace(sint, kernel_basis(f[None, :], sint.field),
                               _canonical=True)
            gamma = Subspace(
                sp, np.hstack([gam_int.mat,
                               np.zeros((gam_int.mat.shape[0], 1),
                                        dtype=np.int64)]))
            break
    if gamma is None:
        raise GeometryError("no hyperplane of Sigma through X' missing p")

    omega = span_in(sp, [p_vec])
    theta = meet(gamma, model.X)
    gamma_prime = span([gamma, pg.unrank(sp, 0)])
    frame0 = MPSFrame(model, 0, omega, gamma, gamma_prime, theta)
    frame0.validate()

    theta_pts = theta.point_vecs()
    r_pt, q_tilde = theta_pts[0], theta_pts[1]
    t = model.Xprime.point_vecs()[0]
    e = pg.unrank(sp, 0)  # the least-rank affine point; lies in Gamma'
    pi = span_in(sp, [t, q_tilde, e])
    tangent = span_in(sp, [t, q_tilde])
    if pi.dim != 2 or meet(pi, model.sigma) != tangent:
        raise GeometryError("plane pi does not meet Sigma in <t, q_tilde>")

    V = baer_subplane(pi, q_tilde, tangent, q, seed=seed)

    L = _unique_real_line_through(pi, t, V, q)
    vl = sorted(set(int(x) for x in V.ranks)
                & set(int(x) for x in L.point_ranks()))
    s_pt = pg.unrank(sp, vl[0])

    bbar = _bbar_build(model, r_pt, V, L, s_pt, theta)

    t_tilde = t_tilde_find(model, t, r_pt, p_vec)

    lines_xp = _choose_xprime_lines(model, t, t_tilde)
    h = _least_h(model, gamma_prime, pi)
    btilde = _btilde_build(model, h, lines_xp)

    if len(bbar.intersect(btilde)):
        raise GeometryError("Bbar and Btilde are not disjoint")
    return Example36Frame(q=q, seed=seed, model=model, mps=frame0,
                          r_pt=r_pt, q_tilde=q_tilde, t=t, pi=pi, V=V, L=L,
                          s_pt=s_pt, t_tilde=t_tilde, h=h,
                          lines_xp=lines_xp, bbar=bbar, btilde=btilde)


# ---------------------------------------------------------------------------
# Baer subplanes and line classification


def _solve_square(cols: np.ndarray, rhs: np.ndarray, field) -> np.ndarray:
    """Solve cols @ x = rhs for square cols over the field."""
    aug = np.hstack([cols, rhs[:, None]])
    R, piv = rref(aug, field)
    n = cols.shape[1]
    if piv[-1:] == (n,) or len(piv) != n:
        raise GeometryError("singular system")
    x = np.zeros(n, dtype=np.int64)
    for row, pc in enumerate(piv):
        x[pc] = R[row, -1]
    return x


def baer_subplane(pi: Subspace, q_tilde: np.ndarray, tangent_line: Subspace,
                  q: int, seed: int = 0) -> PointSet:
    """Subfield subplane of order q inside the plane pi (order q^2) through
    q_tilde, chosen by deterministic quadrangle search so that it meets the
    tangent line exactly in {q_tilde}."""
    space = pi.space
    big = space.field  # GF(q^2)
    p, e = _check_prime_power(q)
    small = cached_field(p, e)
    emb = subfield_embed(small, big)

    pts = pi.point_vecs()
    qt_rank = pg.rank_of(space, q_tilde)
    cand = [v for v in pts if pg.rank_of(space, v) != qt_rank]
    tangent_ranks = set(int(x) for x in tangent_line.point_ranks())
    e0 = pi.coords_of(q_tilde)

    coeff_small = pg.unrank_batch(ProjSpace(2, small),
                                  np.arange(q * q + q + 1))
    coeff_emb = emb.table[coeff_small]

    n = len(cand)
    offset = seed % n
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                trio = [cand[(i + offset) % n], cand[(j + offset) % n],
                        cand[(k + offset) % n]]
                e1, e2, d = (pi.coords_of(v) for v in trio)
                M = np.stack([e0, e1, e2], axis=1)  # columns
                try:
                    c = _solve_square(M, d, big)
                except GeometryError:
                    continue
                if not np.all(c):  # some 3 of the quadrangle are collinear
                    continue
                rows = np.stack([big.mul_table[c[0], e0],
                                 big.mul_table[c[1], e1],
                                 big.mul_table[c[2], e2]])
                internal = matmul(coeff_emb, rows, big)
                vecs = matmul(internal, pi.mat, big)
                V = PointSet.from_vecs(space, vecs)
                if len(V) != q * q + q + 1:
                    raise GeometryError("degenerate subfield subplane")
                hit = tangent_ranks & set(int(x) for x in V.ranks)
                if hit == {qt_rank}:
                    return V
    raise GeometryError("no admissible Baer subplane (cannot happen)")


def line_class(line: Subspace, target: PointSet, q: int,
               vertex: np.ndarray | None = None) -> tuple[str, int]:
    """Classify a line against a Baer subplane (or a Baer cone, in which case
    the cone vertex must not lie on the line): 'real' iff it meets the target
    in q+1 points, 'imaginary' iff in exactly one."""
    if line.dim != 1:
        raise GeometryError("line expected")
    if vertex is not None and line.contains(vertex):
        raise GeometryError("line through the cone vertex")
    hits = sum(1 for r in line.point_ranks() if int(r) in target)
    if hits == q + 1:
        return "real", hits
    if hits == 1:
        return "imaginary", hits
    if hits == 0:
        return "external", hits
    raise GeometryError(f"broken frame: line meets target in {hits} points")


def _unique_real_line_through(pi: Subspace, t: np.ndarray, V: PointSet,
                              q: int) -> Subspace:
    space = pi.space
    lines = []
    seen = set()
    for v in pi.point_vecs():
        L = span_in(space, [t, v])
        if L.dim != 1 or L in seen:
            continue
        seen.add(L)
        lines.append(L)
    real = [L for L in lines if line_class(L, V, q)[0] == "real"]
    if len(real) != 1:
        raise GeometryError(f"expected one real line through t, got {len(real)}")
    return real[0]


# ---------------------------------------------------------------------------
# the two cones


def _bbar_build(model: BCModel, r_pt, V: PointSet, L: Subspace, s_pt,
                theta: Subspace) -> PointSet:
    sp = model.sigma_prime
    q4 = model.q1 ** 2
    base_ranks = np.setdiff1d(V.ranks, L.point_ranks())
    base_ranks = np.union1d(base_ranks, [pg.rank_of(sp, s_pt)])
    base = PointSet(sp, base_ranks)
    bbar = cone(span_in(sp, [r_pt]), base)
    vecs = bbar.vecs()
    aff = int(np.sum(vecs[:, -1] != 0))
    if aff != q4:
        raise GeometryError(f"|Bbar \\ Sigma| = {aff}, expected {q4}")
    sig = np.sort(bbar.ranks[vecs[:, -1] == 0])
    if not np.array_equal(sig, np.sort(theta.point_ranks())):
        raise GeometryError("Bbar cap Sigma != Theta")
    return bbar


def bbar_build(frame: Example36Frame) -> PointSet:
    return _bbar_build(frame.model, frame.r_pt, frame.V, frame.L, frame.s_pt,
                       frame.theta)


def t_tilde_find(model: BCModel, t, r_pt, p_vec) -> np.ndarray:
    """The unique point of X' \\ {t} lying, over the vertex p, above the
    regulus of the line <t, r_pt>; found by the direct definition scan and
    cross-checked against the regulus characterization."""
    sp = model.sigma_prime
    big = model.spread.big_space
    line_tr = span_in(sp, [t, r_pt])
    xline = span_in(big, [pg.unrank(big, model.x_index),
                          pg.unrank(big, model.xprime_index)])
    element_indices = [int(r) for r in xline.point_ranks()]

    xp_pts = model.Xprime.point_vecs()
    t_rank = pg.rank_of(sp, t)
    alive = {pg.rank_of(sp, v): v for v in xp_pts}
    alive.pop(t_rank, None)
    for idx in element_indices:
        S2 = model.element_subspace(idx)
        if meet(S2, line_tr).dim >= 0:
            continue  # regulus element; no constraint from it
        # y in <p, S2> for an element off the regulus disqualifies y
        SP = span([span_in(sp, [p_vec]), S2])
        for rk in [rk for rk, v in alive.items() if SP.contains(v)]:
            alive.pop(rk)
    if len(alive) != 1:
        raise GeometryError(
            f"regulus point not unique: {len(alive)} qualifiers")
    t_tilde = next(iter(alive.values()))

    reg = set(model.regulus_of_line(line_tr))
    ell = span_in(sp, [p_vec, t_tilde])
    reg2 = set(model.regulus_of_line(ell))
    if reg != reg2:
        raise GeometryError("regulus characterization disagrees with the scan")
    return t_tilde


def _choose_xprime_lines(model: BCModel, t, t_tilde):
    """First three lines of X' (internal dual-rank order) avoiding t and
    t_tilde with empty common intersection."""
    sp = model.sigma_prime
    xp = model.Xprime
    f = model.tower.sub
    int_space = ProjSpace(2, f)
    t_c = xp.coords_of(t)
    tt_c = xp.coords_of(t_tilde)
    chosen: list[Subspace] = []
    chosen_duals: list[np.ndarray] = []
    for d in range(int_space.n_points):
        a = pg.unrank(int_space, d)
        if pg.dot(int_space, a, t_c) == 0 or pg.dot(int_space, a, tt_c) == 0:
            continue
        if len(chosen) == 2:
            # the putative common point of L1 and L2 must be off L3
            common = kernel_basis(np.stack(chosen_duals), f)
            if pg.dot(int_space, a, common[0]) == 0:
                continue
        internal = kernel_basis(a[None, :], f)
        gens = matmul(internal, xp.mat, f)
        chosen.append(Subspace(sp, gens))
        chosen_duals.append(a)
        if len(chosen) == 3:
            return tuple(chosen)
    raise GeometryError("no admissible line triple in X'")


def _least_h(model: BCModel, gamma_prime: Subspace, pi: Subspace) -> np.ndarray:
    """Least-rank point of Gamma' outside Sigma and outside <X, X', pi>."""
    sp = model.sigma_prime
    W = span([model.X, model.Xprime, pi])
    gp_forms = gamma_prime.dual_forms()
    w_forms = W.dual_forms()
    for ranks, vecs in pg.enumerate_points(sp, chunk=1 << 13):
        affine = vecs[:, -1] != 0
        in_gp = np.ones(len(vecs), dtype=bool)
        for fvec in gp_forms:
            in_gp &= pg.dot(sp, vecs, np.broadcast_to(fvec, vecs.shape)) == 0
        out_w = np.zeros(len(vecs), dtype=bool)
        for fvec in w_forms:
            out_w |= pg.dot(sp, vecs, np.broadcast_to(fvec, vecs.shape)) != 0
        ok = affine & in_gp & out_w
        if np.any(ok):
            return vecs[np.argmax(ok)]
    raise GeometryError("no admissible h (cannot happen)")


def _btilde_build(model: BCModel, h, lines_xp) -> PointSet:
    sp = model.sigma_prime
    base = PointSet(sp, np.concatenate([L.point_ranks() for L in lines_xp]))
    full = cone(span_in(sp, [h]), base)
    vecs = full.vecs()
    btilde = PointSet(sp, full.ranks[vecs[:, -1] != 0])
    q2 = model.q1
    expect = 3 * q2 * q2 - 3 * q2 + 1
    if len(btilde) != expect:
        raise GeometryError(f"|Btilde| = {len(btilde)}, expected {expect}")
    return btilde


def btilde_build(frame: Example36Frame) -> PointSet:
    return _btilde_build(frame.model, frame.h, frame.lines_xp)


def example_build(q: int, seed: int = 0) -> Bundle:
    """Full pipeline: frame, Bbar, Btilde, and B = K(p, Bbar u Btilde) u {X}
    in PG(3, q^6) coordinates, with the closed-form cardinalities enforced."""
    frame = frame36_make(q, seed)
    bbar_union = frame.bbar.union(frame.btilde)
    B = mps_build(frame.mps, bbar_union)
    expect = 4 * q**6 - 3 * q**4 + q**2 + 1
    if len(B) != expect:
        raise GeometryError(f"|B| = {len(B)}, expected {expect}")
    predicted = mps_size_predict(len(bbar_union), frame.model.q1, 3, 0)
    assert predicted == expect
    return Bundle(frame=frame, B=B)


# ---------------------------------------------------------------------------
# vectorized membership machinery for the hyperplane family of Pi_3


class FamilyScanner:
    """Evaluates, for every hyperplane H of Pi_3 missing X at once, whether a
    Sigma'-point u lies in S7 = <blowup(H), p>.

    With F(u) the big-field linear form of H evaluated on u's coordinate
    blocks, u lies in S7 iff F(u) is a GF(q^2)-multiple of F(p), F(p) never
    being zero because p sits on X which H misses."""

    def __init__(self, model: BCModel):
        self.model = model
        sp = model.pi_space
        self.ranks = pi_hyperplane_ranks_avoiding_x(model)
        self.duals = pg.unrank_batch(sp, self.ranks)
        xp_vec = model.spread_to_pg_vec(model.xprime_index)
        self.ht_mask = pg.dot(sp, self.duals,
                              np.broadcast_to(xp_vec, self.duals.shape)) == 0
        sup = model.tower.sup
        lut = np.zeros(sup.q, dtype=bool)
        lut[model.tower.embedding.table] = True
        self._in_small = lut
        self._fp = self._form_values(model.vertex_p)
        if np.any(self._fp == 0):
            raise GeometryError("F(p) vanished; hyperplane family is broken")
        self._fp_inv = sup.inv_table[self._fp]

    def _form_values(self, u) -> np.ndarray:
        model = self.model
        r, n = model.r, model.n
        sup = model.tower.sup
        u = np.asarray(u, dtype=np.int64)
        blocks = u[: r * n].reshape(r, n)
        big = model.tower.reconstitute(blocks)  # (r,) big-field coords
        acc = None
        for i in range(r):
            term = sup.mul_table[self.duals[:, i], int(big[i])]
            acc = term if acc is None else sup.add_table[acc, term]
        last = int(model.tower.embedding.table[u[-1]])
        return sup.add_table[acc, sup.mul_table[self.duals[:, r], last]]

    def membership(self, u) -> np.ndarray:
        """Boolean vector over the family: u in S7?"""
        ratio = self.model.tower.sup.mul_table[self._form_values(u),
                                               self._fp_inv]
        return self._in_small[ratio]

    def counts(self, ps: PointSet) -> np.ndarray:
        acc = np.zeros(len(self.ranks), dtype=np.int32)
        for u in ps.vecs():
            acc += self.membership(u)
        return acc

    def s7_subspace(self, position: int) -> Subspace:
        blow = self.model.hyperplane_blowup(self.duals[position])
        return span([blow, self.model.vertex_p])


def spectrum_scan(bundle: Bundle, target: str, structural_sample: int = 200,
                  rng_seed: int = 0) -> dict:
    """Intersection spectrum of Bbar or Btilde over the whole family; any
    value outside the proved spectra aborts with the offending dual point."""
    fr = bundle.frame
    q = fr.q
    scanner = FamilyScanner(fr.model)
    if target == "bbar":
        ps, allowed = fr.bbar, {0, 1, q, q + 1}
    elif target == "btilde":
        bt = len(fr.btilde)
        ps, allowed = fr.btilde, {0, 1, 2, 3, q * q, bt}
    else:
        raise GeometryError("target must be 'bbar' or 'btilde'")
    counts = scanner.counts(ps)
    bad = ~np.isin(counts, sorted(allowed))
    if np.any(bad):
        i = int(np.argmax(bad))
        raise GeometryError(
            f"spectrum violation: |S7 cap {target}| = {counts[i]} at dual "
            f"{scanner.duals[i].tolist()} (rank {scanner.ranks[i]})")
    result = {"target": target,
              "histogram": {int(v): int(c) for v, c in
                            zip(*np.unique(counts, return_counts=True))}}
    if target == "btilde":
        ht = counts[scanner.ht_mask]
        if not set(np.unique(ht).tolist()) <= {0, len(fr.btilde)}:
            raise GeometryError("dichotomy on the X'-family fails")
        off = counts[~scanner.ht_mask]
        if not set(np.unique(off).tolist()) <= {1, 2, 3, q * q}:
            raise GeometryError("off-X'-family spectrum violation")
        result["ht_histogram"] = {int(v): int(c) for v, c in
                                  zip(*np.unique(ht, return_counts=True))}
    if structural_sample:
        result["structural"] = _structural_checks(bundle, scanner,
                                                  structural_sample, rng_seed)
    return result


def _structural_checks(bundle: Bundle, scanner: FamilyScanner,
                       sample: int, rng_seed: int) -> dict:
    """Sampled dimension facts: S7 cap <Bbar> is a line off Sigma (through t
    on the X'-subfamily, and then contained in <t, r, s> whenever real), and
    S7 cap <Btilde> is a line off Sigma outside that subfamily."""
    fr = bundle.frame
    model = fr.model
    sp = model.sigma_prime
    rng = np.random.default_rng(rng_seed)
    S3 = span([fr.pi, fr.r_pt])
    cone_v = cone(span_in(sp, [fr.r_pt]), fr.V)
    trs = span_in(sp, [fr.t, fr.r_pt, fr.s_pt])
    btilde_span = span([model.Xprime, fr.h])
    idx = rng.choice(len(scanner.ranks), size=min(sample, len(scanner.ranks)),
                     replace=False)
    n_ht = n_off = n_real_t = 0
    for i in idx:
        S7 = scanner.s7_subspace(int(i))
        line = meet(S7, S3)
        if line.dim != 1 or model.sigma.contains_sub(line):
            raise GeometryError("S7 cap <Bbar-solid> is not a line off Sigma")
        if scanner.ht_mask[i]:
            n_ht += 1
            if not line.contains(fr.t):
                raise GeometryError("X'-subfamily meet line misses t")
            kind, _ = line_class(line, cone_v, fr.q, vertex=fr.r_pt)
            if kind == "real" and line.contains(fr.t):
                if not trs.contains_sub(line):
                    raise GeometryError(
                        "real meet line through t escapes <t, r, s>")
                n_real_t += 1
        else:
            n_off += 1
            tline = meet(S7, btilde_span)
            if tline.dim != 1 or model.sigma.contains_sub(tline):
                raise GeometryError(
                    "S7 cap <Btilde> is not a line off Sigma")
    return {"sampled": int(len(idx)), "ht": n_ht, "off": n_off,
            "real_through_t": n_real_t}


def tangency_scan(bundle: Bundle) -> dict:
    """For every point u of (Bbar u Btilde) \\ Sigma, a family element meeting
    Bbar u Btilde exactly in u, with the witness located in the X'-subfamily
    for u in Bbar and outside it for u in Btilde."""
    fr = bundle.frame
    scanner = FamilyScanner(fr.model)
    union = fr.bbar.union(fr.btilde)
    vecs = union.vecs()
    core = vecs[vecs[:, -1] != 0]
    member = np.stack([scanner.membership(u) for u in core], axis=1)
    totals = member.sum(axis=1)
    bbar_ranks = set(int(x) for x in fr.bbar.ranks)
    sp = fr.model.sigma_prime
    witnesses = []
    missing = []
    for col, u in enumerate(core):
        u_rank = int(pg.rank_batch(sp, u[None, :])[0])
        in_bbar = u_rank in bbar_ranks
        expected = scanner.ht_mask if in_bbar else ~scanner.ht_mask
        cand = member[:, col] & (totals == 1) & expected
        if not np.any(cand):
            missing.append(u_rank)
            continue
        i = int(np.argmax(cand))
        witnesses.append({"point": u_rank,
                          "witness": int(scanner.ranks[i]),
                          "in_xprime_family": bool(scanner.ht_mask[i]),
                          "part": "bbar" if in_bbar else "btilde"})
    if missing:
        raise GeometryError(f"points without tangent witness: {missing}")
    return {"witnesses": witnesses, "count": len(witnesses)}


# ---------------------------------------------------------------------------
# exclusion of the plain cone family on cardinality grounds


def mps_excluder(size: int, p: int, e: int) -> dict:
    """For every factorization 6e = n*t with n >= 2, test the necessary
    divisibility p^(t(n-1)) | size - 1 of a cone-over-hyperplane-blocking-set
    of that shape; 'excluded' iff every factorization fails."""
    if size < 2:
        raise GeometryError("size must be >= 2")
    if not is_prime(p):
        raise GeometryError(f"{p} is not prime")
    admissible = []
    tried = []
    for n in range(2, 6 * e + 1):
        if (6 * e) % n:
            continue
        t = 6 * e // n
        passes = (size - 1) % p ** (t * (n - 1)) == 0
        tried.append({"n": n, "t": t, "divisor": p ** (t * (n - 1)),
                      "divides": passes})
        if passes:
            admissible.append((n, t))
    return {"size": size, "p": p, "e": e, "factorizations": tried,
            "excluded": not admissible, "admissible": admissible}


# ---------------------------------------------------------------------------
# bundle (de)serialization


def bundle_to_dict(bundle: Bundle) -> dict:
    fr = bundle.frame
    return {
        "kind": "example36",
        "q": fr.q,
        "seed": fr.seed,
        "manifest": bundle.manifest(),
        "bbar": [int(x) for x in fr.bbar.ranks],
        "btilde": [int(x) for x in fr.btilde.ranks],
        "B": [int(x) for x in bundle.B.ranks],
    }


def save_bundle(bundle: Bundle, path) -> None:
    with open(path, "w") as fh:
        json.dump(bundle_to_dict(bundle), fh)
        fh.write("\n")


def load_bundle(path, strict: bool = True) -> Bundle:
    """Rebuild the frame deterministically from (q, seed); with strict=True
    the stored point sets must match the rebuild exactly, otherwise the
    stored B replaces the rebuilt one (so tampered bundles can be verified
    and honestly fail)."""
    with open(path) as fh:
        data = json.load(fh)
    if data.get("kind") != "example36":
        raise GeometryError(f"{path} is not an example bundle")
    bundle = example_build(int(data["q"]), int(data["seed"]))
    mismatch = [key for key, ps in (("bbar", bundle.frame.bbar),
                                    ("btilde", bundle.frame.btilde),
                                    ("B", bundle.B))
                if [int(x) for x in ps.ranks] != data[key]]
    if mismatch:
        if strict:
            raise GeometryError(
                f"stored {', '.join(mismatch)} does not match the rebuild")
        stored = PointSet(bundle.B.space,
                          np.array(data["B"], dtype=np.int64))
        bundle = Bundle(frame=bundle.frame, B=stored)
    return bundle
