"""Dense and sparse matrix containers, permutations, random generation,
and exchange-format I/O.

Dense matrices wrap a numpy 2-D array holding canonical field elements;
the dtype is int64 when two canonical elements multiply without overflow
and object (python ints) otherwise, so all arithmetic stays exact.
"""

from __future__ import annotations

import io as _io

import numpy as np

from .errors import DimensionError, DomainError, ParseError
from .field import PrimeField, Rep
from .rng import SplitMix64

FORMATS = ("sms", "mtx", "dense-text")


# ---------------------------------------------------------------------------
# exact integer products


def exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer product of two 2-D integer arrays.

    Chooses int64 matmul, a 16-bit split of the right operand, or an
    object-dtype fallback so the result is never silently wrapped.
    """
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"inner dimensions differ: {a.shape} x {b.shape}")
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.dtype == object or b.dtype == object:
        return a.astype(object).dot(b.astype(object))
    ma = int(np.abs(a).max(initial=0))
    mb = int(np.abs(b).max(initial=0))
    if k * ma * mb < 2**63:
        return a @ b
    if ma < 2**31 and k * ma * ((mb >> 16) + 1) < 2**62 and k * ma * (1 << 16) < 2**63:
        bh = b >> 16
        bl = b - (bh << 16)
        high = (a @ bh).astype(object)
        return (high << 16) + (a @ bl)
    return a.astype(object).dot(b.astype(object))


def exact_matvec(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    return exact_matmul(a, v.reshape(-1, 1)).reshape(-1)


# ---------------------------------------------------------------------------
# containers


class DenseMatrix:
    """Row-major dense matrix of canonical field elements."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx: PrimeField, data: np.ndarray, *, _canonical=False):
        arr = np.asarray(data)
        if arr.ndim != 2:
            raise DimensionError("dense matrix data must be 2-D")
        if not _canonical:
            arr = ctx.canon_array(arr)
        self.ctx = ctx
        self.data = arr

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, ctx, m, n):
        return cls(ctx, np.zeros((m, n), dtype=ctx.dtype), _canonical=True)

    @classmethod
    def identity(cls, ctx, n):
        eye = np.zeros((n, n), dtype=ctx.dtype)
        for i in range(n):
            eye[i, i] = 1
        return cls(ctx, eye, _canonical=True)

    @classmethod
    def from_rows(cls, ctx, rows):
        m = len(rows)
        n = len(rows[0]) if m else 0
        arr = np.zeros((m, n), dtype=ctx.dtype)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DimensionError("ragged rows")
            for j, v in enumerate(row):
                arr[i, j] = v
        return cls(ctx, arr)

    @classmethod
    def random(cls, ctx, m, n, rng: SplitMix64):
        return cls(ctx, ctx.random_array(rng, (m, n)), _canonical=True)

    # shape / access ---------------------------------------------------------

    @property
    def m(self):
        return self.data.shape[0]

    @property
    def n(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def __getitem__(self, idx):
        return self.data[idx]

    def __eq__(self, other):
        return (
            isinstance(other, DenseMatrix)
            and self.ctx == other.ctx
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self):
        return f"DenseMatrix({self.m}x{self.n} over GF({self.ctx.p}))"

    def copy(self):
        return DenseMatrix(self.ctx, self.data.copy(), _canonical=True)

    def transpose(self):
        return DenseMatrix(self.ctx, self.data.T.copy(), _canonical=True)

    def to_rows(self):
        return [[int(v) for v in row] for row in self.data]

    def with_rep(self, rep: Rep) -> "DenseMatrix":
        if rep == self.ctx.rep:
            return self
        ctx = PrimeField(self.ctx.p, rep)
        return DenseMatrix(ctx, ctx.canon_array(self.data))

    # arithmetic -------------------------------------------------------------

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise DimensionError(f"matvec expects length-{self.n} vector")
        return self.ctx.canon_array(exact_matvec(self.data, v))

    def matvec_transpose(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.m,):
            raise DimensionError(f"transpose matvec expects length-{self.m} vector")
        return self.ctx.canon_array(exact_matmul(v.reshape(1, -1), self.data).reshape(-1))

    def to_sparse(self) -> "SparseMatrix":
        rows = []
        for i in range(self.m):
            nz = np.nonzero(self.data[i])[0]
            rows.append([(int(j), int(self.data[i, j])) for j in nz])
        return SparseMatrix(self.ctx, self.m, self.n, rows)

    def density(self) -> float:
        total = self.m * self.n
        if total == 0:
            return 0.0
        return float(np.count_nonzero(self.data)) / total


class SparseMatrix:
    """Row-wise coordinate storage: per row a sorted list of (col, value)."""

    __slots__ = ("ctx", "m", "n", "rows", "_csr")

    def __init__(self, ctx: PrimeField, m: int, n: int, rows):
        if len(rows) != m:
            raise DimensionError("row list length must equal m")
        clean = []
        for row in rows:
            r = [(int(j), ctx.canon(int(v))) for j, v in row]
            r = [(j, v) for j, v in sorted(r) if v != 0]
            cols = [j for j, _ in r]
            if any(not 0 <= j < n for j in cols):
                raise DimensionError("column index out of range")
            if len(set(cols)) != len(cols):
                raise DomainError("duplicate column index in a row")
            clean.append(r)
        self.ctx = ctx
        self.m = m
        self.n = n
        self.rows = clean
        self._csr = None

    @classmethod
    def from_triplets(cls, ctx, m, n, triplets):
        rows = [[] for _ in range(m)]
        for i, j, v in triplets:
            if not (0 <= i < m and 0 <= j < n):
                raise DimensionError(f"entry ({i},{j}) out of bounds for {m}x{n}")
            rows[i].append((j, v))
        return cls(ctx, m, n, rows)

    @property
    def shape(self):
        return (self.m, self.n)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def density(self) -> float:
        total = self.m * self.n
        return self.nnz() / total if total else 0.0

    def triplets(self):
        for i, row in enumerate(self.rows):
            for j, v in row:
                yield (i, j, v)

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.ctx == other.ctx
            and (self.m, self.n) == (other.m, other.n)
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"SparseMatrix({self.m}x{self.n}, nnz={self.nnz()} over GF({self.ctx.p}))"

    def to_dense(self) -> DenseMatrix:
        arr = np.zeros((self.m, self.n), dtype=self.ctx.dtype)
        for i, row in enumerate(self.rows):
            for j, v in row:
                arr[i, j] = v
        return DenseMatrix(self.ctx, arr, _canonical=True)

    def transpose(self) -> "SparseMatrix":
        rows = [[] for _ in range(self.n)]
        for i, row in enumerate(self.rows):
            for j, v in row:
                rows[j].append((i, v))
        return SparseMatrix(self.ctx, self.n, self.m, rows)

    def _ensure_csr(self):
        if self._csr is None:
            indptr = np.zeros(self.m + 1, dtype=np.int64)
            cols, vals = [], []
            for i, row in enumerate(self.rows):
                indptr[i + 1] = indptr[i] + len(row)
                for j, v in row:
                    cols.append(j)
                    vals.append(v)
            self._csr = (
                indptr,
                np.array(cols, dtype=np.int64),
                np.array(vals, dtype=self.ctx.dtype),
            )
        return self._csr

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise DimensionError(f"matvec expects length-{self.n} vector")
        indptr, cols, vals = self._ensure_csr()
        if len(cols) == 0:
            return np.zeros(self.m, dtype=self.ctx.dtype)
        prod = vals * v[cols]
        if self.ctx.dtype is np.int64:
            # keep per-row partial sums inside int64: reduce terms first
            prod %= self.ctx.p
        starts = np.minimum(indptr[:-1], len(prod) - 1)  # reduceat needs in-range starts
        sums = np.add.reduceat(prod, starts)
        sums[indptr[:-1] == indptr[1:]] = 0
        return self.ctx.canon_array(sums)

    def matvec_transpose(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.m,):
            raise DimensionError(f"transpose matvec expects length-{self.m} vector")
        out = np.zeros(self.n, dtype=object if self.ctx.dtype is object else np.int64)
        for i, row in enumerate(self.rows):
            vi = v[i]
            if vi == 0:
                continue
            for j, val in row:
                out[j] = (out[j] + vi * val) % self.ctx.p
        return self.ctx.canon_array(out)


class Permutation:
    """Bijection on {0..n-1}; optionally remembers a transposition sequence.

    As a matrix, P maps e_j to e_{images[j]}:  (P @ M)[images[j]] = M[j].
    """

    __slots__ = ("images", "transpositions")

    def __init__(self, images, transpositions=None):
        images = list(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise DomainError("not a bijection")
        self.images = images
        self.transpositions = transpositions

    @classmethod
    def identity(cls, n):
        return cls(list(range(n)), transpositions=[])

    @classmethod
    def from_transpositions(cls, n, tlist):
        """P = T_1 T_2 ... T_s as a matrix product (T applied right-to-left)."""
        images = list(range(n))
        for i, j in tlist:
            images[i], images[j] = images[j], images[i]
        return cls(images, transpositions=list(tlist))

    @property
    def n(self):
        return len(self.images)

    def sign(self) -> int:
        if self.transpositions is not None:
            swaps = sum(1 for i, j in self.transpositions if i != j)
            return -1 if swaps % 2 else 1
        seen = [False] * self.n
        sign = 1
        for start in range(self.n):
            if seen[start]:
                continue
            length = 0
            cur = start
            while not seen[cur]:
                seen[cur] = True
                cur = self.images[cur]
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign

    def apply_rows(self, arr: np.ndarray) -> np.ndarray:
        """Return P @ arr."""
        out = np.empty_like(arr)
        out[self.images] = arr
        return out

    def apply_rows_inverse(self, arr: np.ndarray) -> np.ndarray:
        """Return P^T @ arr (= P^{-1} @ arr)."""
        return arr[self.images]

    def apply_cols_inverse(self, arr: np.ndarray) -> np.ndarray:
        """Return arr @ P^T."""
        out = np.empty_like(arr)
        out[:, self.images] = arr
        return out

    def apply_cols(self, arr: np.ndarray) -> np.ndarray:
        """Return arr @ P."""
        return arr[:, self.images]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, i in enumerate(self.images):
            inv[i] = j
        return Permutation(inv)

    def matrix(self, ctx) -> DenseMatrix:
        arr = np.zeros((self.n, self.n), dtype=ctx.dtype)
        for j, i in enumerate(self.images):
            arr[i, j] = 1
        return DenseMatrix(ctx, arr, _canonical=True)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __repr__(self):
        return f"Permutation({self.images})"


class BlackboxOperator:
    """Matrix seen only through v -> A v and u -> A^T u."""

    __slots__ = ("m", "n", "_apply", "_apply_t", "applications")

    def __init__(self, m, n, apply, apply_transpose):
        self.m = m
        self.n = n
        self._apply = apply
        self._apply_t = apply_transpose
        self.applications = 0

    @classmethod
    def from_matrix(cls, mat) -> "BlackboxOperator":
        return cls(mat.shape[0], mat.shape[1], mat.matvec, mat.matvec_transpose)

    def apply(self, v: np.ndarray) -> np.ndarray:
        self.applications += 1
        return self._apply(v)

    def apply_transpose(self, u: np.ndarray) -> np.ndarray:
        self.applications += 1
        return self._apply_t(u)


# ---------------------------------------------------------------------------
# random matrices with prescribed rank


def random_matrix_with_rank(
    ctx: PrimeField, m: int, n: int, r: int, rng: SplitMix64, verify: bool = True
) -> DenseMatrix:
    """Random m x n matrix of rank exactly r: a random unit-lower-triangular
    m x r factor times a random r x n echelon factor with random pivot
    columns, then row-permuted.  Exercises non-generic rank profiles."""
    if r > min(m, n) or r < 0:
        raise DomainError(f"rank {r} impossible for {m}x{n}")
    left = ctx.random_array(rng, (m, r))
    for i in range(r):
        left[i, i] = 1
        left[i, i + 1 :] = 0
    pivots = sorted(_sample_without_replacement(rng, n, r))
    right = ctx.random_array(rng, (r, n))
    for i, c in enumerate(pivots):
        right[i, :c] = 0
        right[i, c] = 1
    prod = ctx.canon_array(exact_matmul(left, right))
    order = list(range(m))
    rng.shuffle(order)
    out = DenseMatrix(ctx, prod[order], _canonical=True)
    if verify:
        from .elimination import rank as _rank  # deferred: avoids an import cycle

        got = _rank(out)
        if got != r:
            raise AssertionError(f"rank construction broken: wanted {r} got {got}")
    return out


def _sample_without_replacement(rng, n, k):
    chosen = set()
    while len(chosen) < k:
        chosen.add(rng.below(n))
    return list(chosen)


# ---------------------------------------------------------------------------
# file formats: SMS, MatrixMarket coordinate integer general, dense text


def read_matrix(stream, fmt: str, ctx: PrimeField):
    """Parse a matrix; sms/mtx yield SparseMatrix, dense-text a DenseMatrix.

    Values are reduced into the canonical range of ctx on read.
    """
    if isinstance(stream, str):
        stream = _io.StringIO(stream)
    if fmt == "sms":
        return _read_sms(stream, ctx)
    if fmt == "mtx":
        return _read_mtx(stream, ctx)
    if fmt == "dense-text":
        return _read_dense(stream, ctx)
    raise ParseError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def write_matrix(mat, stream, fmt: str) -> None:
    if fmt == "sms":
        _write_sms(mat, stream)
    elif fmt == "mtx":
        _write_mtx(mat, stream)
    elif fmt == "dense-text":
        _write_dense(mat, stream)
    else:
        raise ParseError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _int_tokens(line, count, lineno, what):
    parts = line.split()
    if len(parts) != count:
        raise ParseError(f"expected {count} fields for {what}, got {len(parts)}", lineno)
    try:
        return [int(t) for t in parts]
    except ValueError:
        raise ParseError(f"non-integer token in {what}: {line.strip()!r}", lineno)


def _read_sms(stream, ctx):
    lineno = 0
    header = None
    for raw in stream:
        lineno += 1
        if raw.strip():
            header = raw.split()
            break
    if header is None:
        raise ParseError("empty SMS stream", lineno)
    if len(header) != 3 or header[2] != "M":
        raise ParseError(f"SMS header must be 'm n M', got {' '.join(header)!r}", lineno)
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("non-integer dimensions in SMS header", lineno)
    triplets = []
    terminated = False
    for raw in stream:
        lineno += 1
        if not raw.strip():
            continue
        i, j, v = _int_tokens(raw, 3, lineno, "SMS triplet")
        if (i, j, v) == (0, 0, 0):
            terminated = True
            break
        if not (1 <= i <= m and 1 <= j <= n):
            raise ParseError(f"index ({i},{j}) out of bounds for {m}x{n}", lineno)
        triplets.append((i - 1, j - 1, v))
    if not terminated:
        raise ParseError("missing '0 0 0' terminator", lineno)
    return SparseMatrix.from_triplets(ctx, m, n, triplets)


def _write_sms(mat, stream):
    sp = mat if isinstance(mat, SparseMatrix) else mat.to_sparse()
    stream.write(f"{sp.m} {sp.n} M\n")
    for i, j, v in sp.triplets():
        stream.write(f"{i + 1} {j + 1} {v}\n")
    stream.write("0 0 0\n")


_MTX_HEADER = "%%MatrixMarket matrix coordinate integer general"


def _read_mtx(stream, ctx):
    lineno = 1
    first = stream.readline()
    if first.strip().lower() != _MTX_HEADER.lower():
        raise ParseError(f"unsupported MatrixMarket header: {first.strip()!r}", lineno)
    size = None
    for raw in stream:
        lineno += 1
        s = raw.strip()
        if not s or s.startswith("%"):
            continue
        size = _int_tokens(raw, 3, lineno, "size line")
        break
    if size is None:
        raise ParseError("missing size line", lineno)
    m, n, nnz = size
    triplets = []
    for raw in stream:
        lineno += 1
        s = raw.strip()
        if not s or s.startswith("%"):
            continue
        i, j, v = _int_tokens(raw, 3, lineno, "coordinate entry")
        if not (1 <= i <= m and 1 <= j <= n):
            raise ParseError(f"index ({i},{j}) out of bounds for {m}x{n}", lineno)
        triplets.append((i - 1, j - 1, v))
    if len(triplets) != nnz:
        raise ParseError(f"declared {nnz} entries, found {len(triplets)}", lineno)
    return SparseMatrix.from_triplets(ctx, m, n, triplets)


def _write_mtx(mat, stream):
    sp = mat if isinstance(mat, SparseMatrix) else mat.to_sparse()
    stream.write(_MTX_HEADER + "\n")
    stream.write(f"{sp.m} {sp.n} {sp.nnz()}\n")
    for i, j, v in sp.triplets():
        stream.write(f"{i + 1} {j + 1} {v}\n")


def _read_dense(stream, ctx):
    lineno = 1
    header = stream.readline()
    if not header.strip():
        raise ParseError("empty dense-text stream", lineno)
    m, n = _int_tokens(header, 2, lineno, "dense header")
    arr = np.zeros((m, n), dtype=ctx.dtype)
    for i in range(m):
        lineno += 1
        raw = stream.readline()
        if not raw:
            raise ParseError(f"expected {m} rows, stream ended after {i}", lineno)
        vals = _int_tokens(raw, n, lineno, "dense row")
        for j, v in enumerate(vals):
            arr[i, j] = ctx.canon(v)
    return DenseMatrix(ctx, arr, _canonical=True)


def _write_dense(mat, stream):
    dm = mat if isinstance(mat, DenseMatrix) else mat.to_dense()
    stream.write(f"{dm.m} {dm.n}\n")
    for row in dm.data:
        stream.write(" ".join(str(int(v)) for v in row) + "\n")


def sniff_format(first_line: str) -> str:
    s = first_line.strip()
    if s.lower().startswith("%%matrixmarket"):
        return "mtx"
    parts = s.split()
    if len(parts) == 3 and parts[2] == "M":
        return "sms"
    return "dense-text"
