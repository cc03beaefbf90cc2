"""Exact arithmetic in GF(p^k), subfield towers and blow-up of extension scalars.

Elements are encoded as integers in [0, p^k): the base-p digits of the
encoding are the coefficients of the residue polynomial, digit i being the
coefficient of x^i.  The encoding order doubles as the total order used for
every "least element" tie-break elsewhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Above this size the dense q x q tables are not built and only scalar
# polynomial arithmetic is available.
_TABLE_LIMIT = 1 << 13


class FieldError(ValueError):
    pass


def _digits(n: int, p: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        n, d = divmod(n, p)
        out.append(d)
    return tuple(out)


def _encode(digs, p: int) -> int:
    n = 0
    for d in reversed(digs):
        n = n * p + int(d)
    return n


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p); polys are little-endian coefficient tuples


def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mod(a, b, p):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    lb_inv = pow(lb, p - 2, p)
    for i in range(len(a) - 1, db - 1, -1):
        f = a[i] * lb_inv % p
        if f:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - f * b[j]) % p
    return _poly_trim(a[:db])


def _poly_mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(prod, m, p)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def poly_is_irreducible(modulus, p: int) -> bool:
    """Trial division against every monic polynomial of degree <= deg/2."""
    modulus = _poly_trim(modulus)
    k = len(modulus) - 1
    if k < 1 or modulus[-1] != 1:
        return False
    if k == 1:
        return True
    if modulus[0] == 0:  # divisible by x
        return False
    for d in range(1, k // 2 + 1):
        for low in range(p**d):
            div = _digits(low, p, d) + (1,)
            if not _poly_mod(modulus, div, p):
                return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree k over GF(p) with least low-part encoding."""
    if k == 1:
        return (0, 1)
    for low in range(p**k):
        cand = _digits(low, p, k) + (1,)
        if poly_is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


# ---------------------------------------------------------------------------


class FieldSpec:
    """GF(p^k) with an explicit monic irreducible modulus.

    Immutable; all operations are pure.  Dense add/mul/inv numpy tables are
    built once for fields small enough to hold them and drive both the scalar
    API and the vectorized geometry kernels.
    """

    def __init__(self, p: int, k: int, modulus=None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("degree must be >= 1")
        if modulus is None:
            modulus = least_irreducible(p, k)
        else:
            modulus = _poly_trim(modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree k")
            if not poly_is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._tables = None
        if self.q <= _TABLE_LIMIT:
            self._build_tables()

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def manifest(self) -> str:
        """Header form: `p k c0 c1 ... ck`."""
        return " ".join(map(str, (self.p, self.k) + self.modulus))

    # -- table construction ------------------------------------------------

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        digs = np.zeros((q, k), dtype=np.int64)
        n = np.arange(q)
        for i in range(k):
            digs[:, i] = n % p
            n = n // p
        pw = p ** np.arange(k)

        add = np.zeros((q, q), dtype=np.int32)
        for i in range(k):
            add += ((digs[:, None, i] + digs[None, :, i]) % p) * pw[i]
        neg = ((-digs) % p) @ pw

        # multiply-by-x map, then mul via digit expansion of one factor
        shifted = np.zeros((q, k), dtype=np.int64)
        shifted[:, 1:] = digs[:, :-1]
        carry = digs[:, -1]
        mod_low = np.array(self.modulus[:k])
        shifted = (shifted - carry[:, None] * mod_low[None, :]) % p
        mulx = shifted @ pw

        smul = np.zeros((p, q), dtype=np.int64)  # prime-scalar times element
        for d in range(p):
            smul[d] = ((digs * d) % p) @ pw

        mul = np.zeros((q, q), dtype=np.int32)
        col = np.arange(q)  # encodings of a * x^j for all a
        for j in range(k):
            term = smul[digs[:, j]][:, col]  # [b, a]
            mul = add[mul, term.T.astype(np.int32)]
            col = mulx[col]

        inv = np.zeros(q, dtype=np.int32)
        nz = mul[1:, :] == 1
        inv[1:] = np.argmax(nz, axis=1)

        self._tables = {
            "add": add.astype(np.int32),
            "neg": neg.astype(np.int32),
            "mul": mul,
            "inv": inv,
        }

    @property
    def has_tables(self) -> bool:
        return self._tables is not None

    @property
    def add_table(self) -> np.ndarray:
        if self._tables is None:
            raise FieldError(f"{self} too large for dense tables")
        return self._tables["add"]

    @property
    def mul_table(self) -> np.ndarray:
        if self._tables is None:
            raise FieldError(f"{self} too large for dense tables")
        return self._tables["mul"]

    @property
    def neg_table(self) -> np.ndarray:
        if self._tables is None:
            raise FieldError(f"{self} too large for dense tables")
        return self._tables["neg"]

    @property
    def inv_table(self) -> np.ndarray:
        if self._tables is None:
            raise FieldError(f"{self} too large for dense tables")
        return self._tables["inv"]

    # -- scalar ops --------------------------------------------------------

    def _check(self, *els):
        for a in els:
            if not 0 <= a < self.q:
                raise FieldError(f"{a} is not an element of {self}")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        if self._tables is not None:
            return int(self._tables["add"][a, b])
        da, db = _digits(a, self.p, self.k), _digits(b, self.p, self.k)
        return _encode([(x + y) % self.p for x, y in zip(da, db)], self.p)

    def neg(self, a: int) -> int:
        self._check(a)
        if self._tables is not None:
            return int(self._tables["neg"][a])
        return _encode([(-x) % self.p for x in _digits(a, self.p, self.k)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        if self._tables is not None:
            return int(self._tables["mul"][a, b])
        r = _poly_mulmod(
            _poly_trim(_digits(a, self.p, self.k)),
            _poly_trim(_digits(b, self.p, self.k)),
            self.modulus,
            self.p,
        )
        return _encode(r + (0,) * (self.k - len(r)), self.p)

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise FieldError("inverse of zero")
        if self._tables is not None:
            return int(self._tables["inv"][a])
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        r, b = 1, a
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    @property
    def generator(self) -> int:
        """The residue class of x (encoding p); a basis seed, not necessarily
        a multiplicative generator."""
        if self.k == 1:
            raise FieldError("prime field has no extension generator")
        return self.p

    def eval_poly(self, coeffs, x: int) -> int:
        """Evaluate a polynomial with prime-subfield coefficients at x."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c % self.p)
        return acc


def field_make(p: int, k: int, modulus=None) -> FieldSpec:
    return FieldSpec(p, k, modulus)


def field_arith(spec: FieldSpec, op: str, *operands) -> int:
    fns = {"add": spec.add, "mul": spec.mul, "inv": spec.inv, "pow": spec.pow,
           "neg": spec.neg, "sub": spec.sub}
    if op not in fns:
        raise FieldError(f"unknown operation {op!r}")
    return fns[op](*operands)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubfieldEmbedding:
    """Field homomorphism GF(p^t) -> GF(p^k), t | k, as a dense image table."""

    sub: FieldSpec
    sup: FieldSpec
    table: np.ndarray = field(compare=False)

    def __call__(self, a: int) -> int:
        return int(self.table[a])


def subfield_embed(sub: FieldSpec, sup: FieldSpec) -> SubfieldEmbedding:
    """Deterministic embedding: the image of sub's generator is the least root
    (in encoding order) of sub's modulus inside sup."""
    if sub.p != sup.p or sup.k % sub.k != 0:
        raise FieldError(f"no embedding of {sub} into {sup}")
    if sub.k == 1:
        table = np.arange(sub.q, dtype=np.int64)
        return SubfieldEmbedding(sub, sup, table)
    root = None
    for x in range(sup.q):
        if sup.eval_poly(sub.modulus, x) == 0:
            root = x
            break
    if root is None:
        raise FieldError("modulus has no root in the extension (impossible)")
    powers = [1]
    for _ in range(1, sub.k):
        powers.append(sup.mul(powers[-1], root))
    table = np.zeros(sub.q, dtype=np.int64)
    for a in range(sub.q):
        img = 0
        for c, pw in zip(_digits(a, sub.p, sub.k), powers):
            img = sup.add(img, sup.mul(c, pw))
        table[a] = img
    emb = SubfieldEmbedding(sub, sup, table)
    _validate_embedding(emb)
    return emb


def _validate_embedding(emb: SubfieldEmbedding):
    sub, sup, t = emb.sub, emb.sup, emb.table
    if len(np.unique(t)) != sub.q:
        raise FieldError("embedding not injective")
    if t[0] != 0 or t[1] != 1:
        raise FieldError("embedding does not fix 0 and 1")
    # exhaustive homomorphism check for small subfields, sampled otherwise
    if sub.q <= 256:
        idx = np.arange(sub.q)
        a, b = np.meshgrid(idx, idx, indexing="ij")
    else:
        rng = np.random.default_rng(0)
        a = rng.integers(0, sub.q, size=4096)
        b = rng.integers(0, sub.q, size=4096)
    ta, tb = t[a], t[b]
    if not np.array_equal(t[sub.add_table[a, b]], sup.add_table[ta, tb]):
        raise FieldError("embedding does not preserve addition")
    if not np.array_equal(t[sub.mul_table[a, b]], sup.mul_table[ta, tb]):
        raise FieldError("embedding does not preserve multiplication")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowupBasis:
    """n elements of the big field forming a basis over the small field."""

    sub: FieldSpec
    sup: FieldSpec
    elements: tuple[int, ...]


class FieldTower:
    """GF(q1) inside GF(q1^n) with coordinate maps for field reduction.

    Fixes the power basis {1, g, ..., g^(n-1)} of the big field's generator,
    precomputes the decomposition big-element -> n small-field coordinates
    and the reconstitution tables used by the geometry kernels.
    """

    def __init__(self, sub: FieldSpec, sup: FieldSpec):
        if sup.k % sub.k != 0 or sub.p != sup.p:
            raise FieldError(f"{sup} is not an extension of {sub}")
        self.sub = sub
        self.sup = sup
        self.n = sup.k // sub.k
        self.embedding = subfield_embed(sub, sup)
        g = sup.generator if sup.k > 1 else 1
        els = [1]
        for _ in range(1, self.n):
            els.append(sup.mul(els[-1], g))
        self.basis = BlowupBasis(sub, sup, tuple(els))

        p, K = sup.p, sup.k
        t = sub.k
        # GF(p)-matrix whose columns are digits of e(gs^u) * b_j
        cols = []
        for j in range(self.n):
            for u in range(t):
                # gs^u for gs the class of x in the subfield encodes as p^u
                el = sup.mul(int(self.embedding.table[sub.p**u]), els[j])
                cols.append(_digits(el, p, K))
        M = np.array(cols, dtype=np.int64).T % p  # K x K
        Minv = _gfp_matinv(M, p)

        digs = np.zeros((sup.q, K), dtype=np.int64)
        nn = np.arange(sup.q)
        for i in range(K):
            digs[:, i] = nn % p
            nn = nn // p
        lam = (digs @ Minv.T) % p  # coords in the (j,u) basis
        lam = lam.reshape(sup.q, self.n, t)
        pw = sub.p ** np.arange(t)
        self.coords_table = lam @ pw  # (sup.q, n) small-field encodings

        # reconstitution: rec[j][c] = e(c) * b_j
        self.rec_tables = []
        for j in range(self.n):
            bj = els[j]
            col = np.array([sup.mul(int(self.embedding.table[c]), bj)
                            for c in range(sub.q)], dtype=np.int64)
            self.rec_tables.append(col)
        self.rec_tables = np.array(self.rec_tables)

        if not np.array_equal(self.reconstitute(self.coords(np.arange(sup.q))),
                              np.arange(sup.q)):
            raise FieldError("tower coordinate maps are not mutually inverse")

    def coords(self, a) -> np.ndarray:
        """Big-field element(s) -> (n,) / (N, n) small-field coordinates."""
        return self.coords_table[a]

    def reconstitute(self, c) -> np.ndarray:
        """Small-field coordinate rows -> big-field element(s)."""
        c = np.asarray(c)
        acc = self.rec_tables[0][c[..., 0]]
        add = self.sup.add_table
        for j in range(1, self.n):
            acc = add[acc, self.rec_tables[j][c[..., j]]]
        return acc

    def blowup_matrix(self, a: int) -> np.ndarray:
        """n x n matrix over the small field of multiplication by a, i.e.
        coords(a*y) = M @ coords(y) for every big-field y."""
        self.sup._check(a)
        cols = [self.coords(self.sup.mul(a, b)) for b in self.basis.elements]
        return np.array(cols, dtype=np.int64).T


def blowup_matrix(a: int, tower: FieldTower) -> np.ndarray:
    return tower.blowup_matrix(a)


def _gfp_matinv(M: np.ndarray, p: int) -> np.ndarray:
    n = M.shape[0]
    A = np.concatenate([M % p, np.eye(n, dtype=np.int64)], axis=1)
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, n):
            if A[r, col] % p:
                piv = r
                break
        if piv is None:
            raise FieldError("matrix not invertible over GF(p)")
        A[[row, piv]] = A[[piv, row]]
        A[row] = (A[row] * pow(int(A[row, col]), p - 2, p)) % p
        for r in range(n):
            if r != row and A[r, col]:
                A[r] = (A[r] - A[r, col] * A[row]) % p
        row += 1
    return A[:, n:]


@lru_cache(maxsize=None)
def cached_field(p: int, k: int) -> FieldSpec:
    return FieldSpec(p, k)


@lru_cache(maxsize=None)
def cached_tower(p: int, t: int, n: int) -> FieldTower:
    return FieldTower(cached_field(p, t), cached_field(p, t * n))
