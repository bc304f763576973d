"""Exact dense multiplication: classical, delayed-reduction, Strassen-Winograd.

All three kernels return bit-identical results; they differ in how modular
reductions are scheduled.  fgemm accumulates over the largest inner block
whose exact integer sums fit the configured accumulator, reducing once per
block.  The Strassen recursion is gated by the tight intermediate-value
bound ((1+3^l)/2)^2 * floor(k/2^l) * (p-1)^2: levels that would overflow
are refused, never silently reduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DimensionError, RepresentationError
from .field import PrimeField, Rep
from .matrix_core import DenseMatrix, exact_matmul


@dataclass
class OpCounter:
    """Field-operation tally.  `base_mults` counts recursive leaf products,
    `base_mult_volume` their total m*k*n volume."""

    muls: int = 0
    adds: int = 0
    invs: int = 0
    reductions: int = 0
    base_mults: int = 0
    base_mult_volume: int = 0
    max_intermediate: int = 0

    def total_ops(self) -> int:
        return self.muls + self.adds + self.invs

    def count_gemm(self, m, k, n):
        self.muls += m * k * n
        self.adds += m * k * n

    def observe(self, arr) -> None:
        if arr.size:
            self.max_intermediate = max(self.max_intermediate, int(np.abs(arr).max()))

    def as_dict(self) -> dict:
        return {
            "muls": self.muls,
            "adds": self.adds,
            "invs": self.invs,
            "reductions": self.reductions,
            "base_mults": self.base_mults,
            "base_mult_volume": self.base_mult_volume,
            "total_ops": self.total_ops(),
        }


@dataclass
class MulConfig:
    """Multiplication policy: accumulator capacity, Strassen gating, counting.

    `beta` is the capacity exponent of one machine accumulator; levels whose
    intermediate bound fits 2^(beta+1) run on int64.  With `wide_fallback`
    (the default) larger requests run exactly on multiword integers instead;
    strict mode refuses them outright.
    """

    beta: int = 62
    strassen_threshold: int = 64
    max_levels: int | None = None
    count_ops: bool = False
    track_intermediates: bool = False
    wide_fallback: bool = True
    counter: OpCounter = field(default_factory=OpCounter)

    def __post_init__(self):
        if not 1 <= self.beta <= 63:
            raise ConfigError("beta must be in [1, 63] (integer accumulation)")
        if self.strassen_threshold < 2:
            raise ConfigError("strassen_threshold must be >= 2")


def _check_dims(a: DenseMatrix, b: DenseMatrix):
    if a.ctx.p != b.ctx.p:
        raise DimensionError("operands live over different fields")
    if a.n != b.m:
        raise DimensionError(f"inner dimensions differ: {a.shape} x {b.shape}")


# ---------------------------------------------------------------------------
# classical product


def gemm_classic(a: DenseMatrix, b: DenseMatrix, cfg: MulConfig | None = None) -> DenseMatrix:
    """C = A*B by the classical formula; 2*m*k*n field operations."""
    _check_dims(a, b)
    out = a.ctx.canon_array(exact_matmul(a.data, b.data))
    if cfg is not None and cfg.count_ops:
        cfg.counter.count_gemm(a.m, a.n, b.n)
        cfg.counter.base_mults += 1
        cfg.counter.base_mult_volume += a.m * a.n * b.n
    return DenseMatrix(a.ctx, out, _canonical=True)


# ---------------------------------------------------------------------------
# delayed-reduction product (centered representation)


def fgemm_block_depth(p: int, beta: int) -> int:
    """Largest inner-block depth k with k*(p-1)^2 < 2^(beta+1) (at least 1)."""
    if p == 2:
        return 1 << beta
    cap = 1 << (beta + 1)
    return max(1, (cap - 1) // (p - 1) ** 2)


def fgemm(a: DenseMatrix, b: DenseMatrix, cfg: MulConfig | None = None) -> DenseMatrix:
    """Delayed-reduction product over an odd prime in centered form.

    Splits the inner dimension into blocks of the largest depth satisfying
    k*(p-1)^2 < 2^(beta+1); each block accumulates exactly and is reduced
    once, so each output entry sees at most ceil(k/k_max) reductions.
    """
    _check_dims(a, b)
    ctx = a.ctx
    if ctx.p == 2 or ctx.p % 2 == 0:
        raise RepresentationError("fgemm needs an odd prime; route GF(2) to tiny_fields")
    cfg = cfg or MulConfig()
    cctx = ctx if ctx.rep is Rep.CENTERED else PrimeField(ctx.p, Rep.CENTERED)
    ad = cctx.canon_array(a.data)
    bd = cctx.canon_array(b.data)
    k = a.n
    kmax = fgemm_block_depth(ctx.p, cfg.beta)
    acc = cctx.zeros((a.m, b.n))
    for lo in range(0, max(k, 1), kmax):
        hi = min(lo + kmax, k)
        if lo >= hi:
            break
        part = exact_matmul(ad[:, lo:hi], bd[lo:hi, :])
        acc = cctx.canon_array(acc + cctx.canon_array(part))
        if cfg.count_ops:
            cfg.counter.reductions += a.m * b.n
    if cfg.count_ops:
        cfg.counter.count_gemm(a.m, k, b.n)
    return DenseMatrix(ctx, ctx.canon_array(acc), _canonical=True)


# ---------------------------------------------------------------------------
# Strassen-Winograd


def strassen_bound(p: int, k: int, l: int) -> int:
    """Largest magnitude any intermediate can reach in l recursion levels
    of the Winograd schedule with inputs in {0..p-1}; tight.  l = 0 gives
    the classical accumulation bound k*(p-1)^2."""
    return ((1 + 3**l) // 2) ** 2 * (k >> l) * (p - 1) ** 2


def max_strassen_levels(p: int, k: int, beta: int) -> int:
    """Largest l >= 0 whose bound stays below the 2^(beta+1) capacity."""
    cap = 1 << (beta + 1)
    l = 0
    while (1 << (l + 1)) <= k and strassen_bound(p, k, l + 1) < cap:
        l += 1
    if l == 0 and strassen_bound(p, k, 0) >= cap:
        return -1  # even classical accumulation overflows; caller must block
    return l


def gemm_strassen(a: DenseMatrix, b: DenseMatrix, cfg: MulConfig | None = None) -> DenseMatrix:
    """Strassen-Winograd product with delayed reduction: the requested
    levels run on exact integers and a single final reduction is applied.

    Raises ConfigError when the requested levels exceed max_strassen_levels
    for the inner dimension: the computation would overflow, so it refuses.
    """
    _check_dims(a, b)
    cfg = cfg or MulConfig(max_levels=1)
    levels = cfg.max_levels if cfg.max_levels is not None else 64
    ctx = a.ctx
    use = min(levels, _natural_levels(a.m, a.n, b.n, cfg.strassen_threshold))
    safe = max_strassen_levels(ctx.p, max(a.n, 1), cfg.beta)
    wide = ctx.dtype is object
    if use > safe or safe < 0:
        if not cfg.wide_fallback:
            raise ConfigError(
                f"{use} Strassen levels exceed the intermediate bound 2^{cfg.beta + 1} "
                f"for p={ctx.p}, k={a.n} (at most {max(safe, 0)} allowed); refusing "
                "rather than overflowing"
            )
        wide = True  # exact multiword accumulation instead of int64
    ad = a.data.astype(object) if wide and a.data.dtype != object else a.data
    bd = b.data.astype(object) if wide and b.data.dtype != object else b.data
    out = _strassen_int(ad, bd, use, cfg)
    return DenseMatrix(ctx, ctx.canon_array(out), _canonical=True)


def addmul(a: DenseMatrix, b: DenseMatrix, beta_scalar: int, c: DenseMatrix,
           cfg: MulConfig | None = None) -> DenseMatrix:
    """Fused A*B + beta*C with the product's delayed-reduction schedule."""
    _check_dims(a, b)
    if c.shape != (a.m, b.n):
        raise DimensionError("accumulator shape mismatch")
    cfg = cfg or MulConfig(max_levels=1)
    ctx = a.ctx
    levels = cfg.max_levels if cfg.max_levels is not None else 64
    use = min(levels, _natural_levels(a.m, a.n, b.n, cfg.strassen_threshold))
    safe = max_strassen_levels(ctx.p, max(a.n + 1, 1), cfg.beta)
    if use > max(safe, 0) or safe < 0:
        raise ConfigError("requested levels exceed the fused intermediate bound")
    big = ctx.dtype is object
    ad = a.data.astype(object) if big else a.data
    bd = b.data.astype(object) if big else b.data
    prod = _strassen_int(ad, bd, use, cfg)
    fused = prod + ctx.canon(beta_scalar) * c.data
    if cfg.count_ops:
        cfg.counter.muls += c.data.size
        cfg.counter.adds += c.data.size
    if cfg.track_intermediates:
        cfg.counter.observe(fused)
    return DenseMatrix(ctx, ctx.canon_array(fused), _canonical=True)


def _natural_levels(m: int, k: int, n: int, threshold: int) -> int:
    """Levels the recursion takes on its own: split while every dimension
    is still at least the threshold (and at least 2)."""
    d = min(m, k, n)
    t = max(threshold, 2)
    l = 0
    while (d >> l) >= t:
        l += 1
    return l


def _i_add(x, y, cfg):
    if cfg.count_ops:
        cfg.counter.adds += x.size
    out = x + y
    if cfg.track_intermediates:
        cfg.counter.observe(out)
    return out


def _i_sub(x, y, cfg):
    if cfg.count_ops:
        cfg.counter.adds += x.size
    out = x - y
    if cfg.track_intermediates:
        cfg.counter.observe(out)
    return out


def _base_mul(x, y, cfg):
    if cfg.count_ops:
        cfg.counter.count_gemm(x.shape[0], x.shape[1], y.shape[1])
        cfg.counter.base_mults += 1
        cfg.counter.base_mult_volume += x.shape[0] * x.shape[1] * y.shape[1]
    out = exact_matmul(x, y)
    if cfg.track_intermediates:
        cfg.counter.observe(out)
    return out


def _strassen_int(a: np.ndarray, b: np.ndarray, levels: int, cfg: MulConfig) -> np.ndarray:
    """Exact integer Strassen-Winograd; odd trailing row/column handled by
    dynamic peeling so no padding is allocated."""
    m, k = a.shape
    n = b.shape[1]
    if levels <= 0 or min(m, k, n) < 2:
        return _base_mul(a, b, cfg)
    m2, k2, n2 = (m // 2) * 2, (k // 2) * 2, (n // 2) * 2
    core = _strassen_even(a[:m2, :k2], b[:k2, :n2], levels, cfg)
    if k2 < k:  # rank-1 fixup for the stripped inner slice
        core = _i_add(core, _base_mul(a[:m2, k2:], b[k2:, :n2], cfg), cfg)
    if m2 == m and n2 == n:
        return core
    out = np.zeros((m, n), dtype=a.dtype)
    out[:m2, :n2] = core
    if n2 < n:
        out[:m2, n2:] = _base_mul(a[:m2, :], b[:, n2:], cfg)
    if m2 < m:
        out[m2:, :] = _base_mul(a[m2:, :], b, cfg)
    return out


def _strassen_even(a, b, levels, cfg):
    m, k = a.shape
    n = b.shape[1]
    h_m, h_k, h_n = m // 2, k // 2, n // 2
    a11, a12 = a[:h_m, :h_k], a[:h_m, h_k:]
    a21, a22 = a[h_m:, :h_k], a[h_m:, h_k:]
    b11, b12 = b[:h_k, :h_n], b[:h_k, h_n:]
    b21, b22 = b[h_k:, :h_n], b[h_k:, h_n:]

    def rec(x, y):
        return _strassen_int(x, y, levels - 1, cfg)

    # schedule of the Winograd variant: 7 products, 15 block additions
    s1 = _i_add(a21, a22, cfg)
    s2 = _i_sub(s1, a11, cfg)
    s3 = _i_sub(a11, a21, cfg)
    s4 = _i_sub(a12, s2, cfg)
    t1 = _i_sub(b12, b11, cfg)
    t2 = _i_sub(b22, t1, cfg)
    t3 = _i_sub(b22, b12, cfg)
    t4 = _i_sub(t2, b21, cfg)
    p1 = rec(a11, b11)
    p2 = rec(a12, b21)
    p3 = rec(s4, b22)
    p4 = rec(a22, t4)
    p5 = rec(s1, t1)
    p6 = rec(s2, t2)
    p7 = rec(s3, t3)
    c11 = _i_add(p1, p2, cfg)
    u2 = _i_add(p1, p6, cfg)
    u3 = _i_add(u2, p7, cfg)
    u4 = _i_add(u2, p5, cfg)
    c12 = _i_add(u4, p3, cfg)
    c21 = _i_sub(u3, p4, cfg)
    c22 = _i_add(u3, p5, cfg)
    top = np.concatenate([c11, c12], axis=1)
    bottom = np.concatenate([c21, c22], axis=1)
    return np.concatenate([top, bottom], axis=0)


def worst_case_pair(ctx: PrimeField, k: int, l: int):
    """Inputs driving the level-l Winograd recursion to its printed bound:
    the S2 = A21+A22-A11 and T2 = B22-B12+B11 chains saturate, so the P6
    product's entries hit the bound exactly.  l in {1, 2}; k divisible by
    2^l."""
    if l not in (1, 2):
        raise ConfigError("adversarial construction provided for l in {1, 2}")
    if k % (1 << l):
        raise ConfigError("k must be divisible by 2^l")
    p = ctx.p
    top = p - 1
    a = np.zeros((k, k), dtype=np.int64)
    b = np.zeros((k, k), dtype=np.int64)
    h = k // 2
    if l == 1:
        a[h:, :] = top        # A21 = A22 = max, A11 = 0 -> S2 = 2(p-1)
        b[:h, :h] = top       # B11 = max
        b[h:, h:] = top       # B22 = max, B12 = 0 -> T2 = 2(p-1)
    else:
        q = h // 2

        def block(mat, bi, bj, val):
            mat[bi * q : (bi + 1) * q, bj * q : (bj + 1) * q] = val

        # level-1 S2 quadrants: (2,1),(2,2) = +2(p-1), (1,1) = -(p-1); then
        # the level-2 S2 inside P6 reaches 2+2+1 = 5 times (p-1)
        for quad_j in (0, 1):              # A21 and A22 quadrants
            block(a, 3, 2 * quad_j + 0, top)
            block(a, 3, 2 * quad_j + 1, top)
        block(a, 0, 0, top)                # A11 sub-block (1,1)
        # level-1 T2 quadrants: (1,1),(2,2) = +2(p-1), (1,2) = -(p-1)
        for quad in ((0, 0), (1, 1)):      # B11 and B22 quadrants
            bi, bj = 2 * quad[0], 2 * quad[1]
            block(b, bi, bj, top)
            block(b, bi + 1, bj + 1, top)
        block(b, 0, 3, top)                # B12 sub-block (1,2)
    if ctx.dtype is object:
        a = a.astype(object)
        b = b.astype(object)
    return DenseMatrix(ctx, a), DenseMatrix(ctx, b)
