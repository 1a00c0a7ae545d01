"""b-adic histogram measures, entropy estimators, and dimension probes.

The graph measure mu is the pushforward of Lebesgue measure on [0, 1) under
x -> (x, W(x)); its flow projections pi_code mu are one-dimensional
measures sampled here as values W(x) - Gamma(x, code).  Histograms live on
the b-adic cell lattice: a value v occupies cell floor(v * b^level) and
coarsening by integer division is exact, which makes entropy chain-rule
identities hold to rounding rather than to statistical error.

Entropies are reported in log base b throughout, so entropy-per-level
slopes are dimension estimates directly comparable with D = 2 + log_b lam.
Sampling is stratified by default (one point per fine cell of [0, 1)) with
jitter drawn from fixed-width substream blocks, so a histogram assembled
in any number of shards is identical to the single-shard result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import phi as phimod
from ._util import ceil_log_ratio, ols_fit, substream
from .kernel import Code, eval_gamma_vec, seeded_code
from .weier import eval_w_vec

__all__ = [
    "BadicHistogram",
    "histogram_from_values",
    "histogram_from_points",
    "entropy",
    "conditional_entropy",
    "coarsen",
    "refine",
    "component_measure",
    "add_histograms",
    "histogram_quantiles",
    "hist_to_text",
    "hist_from_text",
    "EntropyCurve",
    "curve_to_csv",
    "sample_projected_measure",
    "projected_values",
    "stratified_x",
    "alpha_estimate",
    "AlphaReport",
    "graph_box_dimension",
    "BoxDimReport",
    "dim_mu_check",
    "DimMuReport",
    "n_hat",
    "decompose_projection",
    "DecompositionReport",
    "ucas_probe",
    "UcasReport",
    "porosity_probe",
    "PorosityReport",
]


# ---------------------------------------------------------------------------
# histograms


@dataclass
class BadicHistogram:
    """Sparse nonnegative measure on the level-``level`` b-adic lattice.

    ``keys`` holds cell indices (shape (m,) in one dimension, (m, 2) in
    two), sorted, unique, with strictly positive ``masses``.  ``window``
    is the level-0 bounding box, one (lo, hi) pair per axis with hi
    exclusive.  ``total`` caches the mass sum.
    """

    b: int
    level: int
    keys: np.ndarray
    masses: np.ndarray
    window: tuple[tuple[int, int], ...]
    total: float
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return 1 if self.keys.ndim == 1 else int(self.keys.shape[1])

    @property
    def n_cells(self) -> int:
        return int(len(self.masses))

    def window_cell_count(self) -> int:
        out = 1
        for lo, hi in self.window:
            out *= max(hi - lo, 1)
        return out


def _window_of(keys: np.ndarray, b: int, level: int) -> tuple[tuple[int, int], ...]:
    scale = b**level
    cols = keys.reshape(-1, 1) if keys.ndim == 1 else keys
    out = []
    for a in range(cols.shape[1]):
        lo = int(cols[:, a].min()) // scale
        hi = int(cols[:, a].max()) // scale + 1
        out.append((lo, hi))
    return tuple(out)


def _pack_histogram(
    b: int, level: int, keys: np.ndarray, masses: np.ndarray, meta: dict | None = None
) -> BadicHistogram:
    """Sort, merge duplicate cells, drop zeros, and wrap."""
    if keys.ndim == 1:
        order = np.argsort(keys, kind="stable")
        keys = keys[order]
        masses = masses[order]
        boundary = np.empty(len(keys), dtype=bool)
        boundary[0] = True
        np.not_equal(keys[1:], keys[:-1], out=boundary[1:])
    else:
        order = np.lexsort((keys[:, 1], keys[:, 0]))
        keys = keys[order]
        masses = masses[order]
        boundary = np.empty(len(keys), dtype=bool)
        boundary[0] = True
        boundary[1:] = np.any(keys[1:] != keys[:-1], axis=1)
    starts = np.flatnonzero(boundary)
    merged = np.add.reduceat(masses, starts)
    keys = keys[starts]
    keep = merged > 0.0
    keys, merged = keys[keep], merged[keep]
    if len(merged) == 0:
        raise ValueError("histogram has zero total mass")
    return BadicHistogram(
        b=b,
        level=level,
        keys=keys,
        masses=merged,
        window=_window_of(keys, b, level),
        total=float(merged.sum()),
        meta=dict(meta or {}),
    )


def histogram_from_values(
    values: np.ndarray,
    b: int,
    level: int,
    weights: np.ndarray | None = None,
    meta: dict | None = None,
) -> BadicHistogram:
    """One-dimensional histogram of floor(values * b^level).

    A dense ``bincount`` path handles the common case of a narrow value
    range; wide or pathological ranges fall back to sort-and-merge.
    """
    values = np.asarray(values, dtype=np.float64)
    if len(values) == 0:
        raise ValueError("histogram needs at least one value")
    scaled = values * float(b) ** level
    if np.max(np.abs(scaled)) >= 2.0**62:
        raise ValueError("cell indices would overflow; lower the level")
    idx = np.floor(scaled).astype(np.int64)
    lo = int(idx.min())
    hi = int(idx.max())
    span = hi - lo + 1
    if weights is None and span <= max(4 * len(idx), 1 << 22):
        counts = np.bincount(idx - lo, minlength=span)
        keys = np.flatnonzero(counts) + lo
        masses = counts[keys - lo].astype(np.float64)
        return _pack_histogram(b, level, keys.astype(np.int64), masses, meta)
    w = np.ones(len(idx)) if weights is None else np.asarray(weights, dtype=np.float64)
    return _pack_histogram(b, level, idx, w, meta)


def histogram_from_points(
    xs: np.ndarray,
    ys: np.ndarray,
    b: int,
    level: int,
    meta: dict | None = None,
) -> BadicHistogram:
    """Two-dimensional histogram of the point set on level-``level`` squares."""
    scale = float(b) ** level
    ix = np.floor(np.asarray(xs, dtype=np.float64) * scale).astype(np.int64)
    iy = np.floor(np.asarray(ys, dtype=np.float64) * scale).astype(np.int64)
    keys = np.stack([ix, iy], axis=1)
    return _pack_histogram(b, level, keys, np.ones(len(ix)), meta)


def entropy(hist: BadicHistogram, base_b: int | None = None) -> float:
    """Shannon entropy in log base ``base_b`` (the histogram's b when omitted).

    The 0 log 0 = 0 convention is automatic because zero-mass cells never
    survive packing.
    """
    if hist.total <= 0.0:
        raise ValueError("entropy of a zero-mass histogram is undefined")
    base = hist.b if base_b is None else base_b
    p = hist.masses / hist.total
    return float(-(p * np.log(p)).sum() / math.log(base))


def coarsen(hist: BadicHistogram, new_level: int) -> BadicHistogram:
    """Exact pushforward to a coarser lattice by integer index division."""
    if new_level > hist.level:
        raise ValueError("coarsen target must not exceed the current level")
    if new_level == hist.level:
        return hist
    d = hist.b ** (hist.level - new_level)
    keys = hist.keys // d
    return _pack_histogram(hist.b, new_level, keys, hist.masses.copy(), hist.meta)


def refine(hist: BadicHistogram, new_level: int) -> BadicHistogram:
    """Redistribute each cell's mass uniformly among its descendants.

    Mass is conserved exactly; the uniform split encodes that the
    histogram carries no information below its stored level.
    """
    if new_level < hist.level:
        raise ValueError("refine target must not precede the current level")
    steps = new_level - hist.level
    if steps == 0:
        return hist
    children = hist.b**steps
    if hist.dim == 1:
        offsets = np.arange(children, dtype=np.int64)
        keys = (hist.keys[:, None] * children + offsets[None, :]).ravel()
        masses = np.repeat(hist.masses / children, children)
    else:
        off = np.arange(children, dtype=np.int64)
        ox, oy = np.meshgrid(off, off, indexing="ij")
        ox, oy = ox.ravel(), oy.ravel()
        keys = np.empty((hist.n_cells * children * children, 2), dtype=np.int64)
        keys[:, 0] = (hist.keys[:, 0:1] * children + ox[None, :]).ravel()
        keys[:, 1] = (hist.keys[:, 1:2] * children + oy[None, :]).ravel()
        masses = np.repeat(hist.masses / children**2, children * children)
    return _pack_histogram(hist.b, new_level, keys, masses, hist.meta)


def conditional_entropy(hist: BadicHistogram, m: int, base_b: int | None = None) -> float:
    """Entropy of the level-``hist.level`` refinement given the level-``m``
    coarsening, i.e. H_n - H_m."""
    if m > hist.level:
        raise ValueError("conditioning level must be at most the histogram level")
    return entropy(hist, base_b) - entropy(coarsen(hist, m), base_b)


def component_measure(
    hist: BadicHistogram, cell_level: int, cell_index
) -> BadicHistogram:
    """Normalized restriction of the measure to one coarser cell.

    The component keeps absolute coordinates and the original level; its
    total is 1.  Mixing all components of a level with their cell masses
    recovers the measure exactly.
    """
    if cell_level > hist.level:
        raise ValueError("component cell must be at a coarser or equal level")
    d = hist.b ** (hist.level - cell_level)
    if hist.dim == 1:
        sel = hist.keys // d == int(cell_index)
    else:
        ci = np.asarray(cell_index, dtype=np.int64)
        sel = np.all(hist.keys // d == ci[None, :], axis=1)
    if not np.any(sel):
        raise ValueError("component cell carries no mass")
    masses = hist.masses[sel]
    return BadicHistogram(
        b=hist.b,
        level=hist.level,
        keys=hist.keys[sel].copy(),
        masses=masses / masses.sum(),
        window=hist.window,
        total=1.0,
        meta=dict(hist.meta),
    )


def add_histograms(parts: Sequence[BadicHistogram], weights: Sequence[float] | None = None
                   ) -> BadicHistogram:
    """Weighted sum of histograms at a common b and level."""
    if not parts:
        raise ValueError("no histograms to add")
    b, level = parts[0].b, parts[0].level
    for h in parts:
        if h.b != b or h.level != level or h.dim != parts[0].dim:
            raise ValueError("histograms must share b, level, and dimension")
    w = [1.0] * len(parts) if weights is None else list(weights)
    keys = np.concatenate([h.keys for h in parts])
    masses = np.concatenate([wi * h.masses for wi, h in zip(w, parts)])
    return _pack_histogram(b, level, keys, masses)


def histogram_quantiles(hist: BadicHistogram, qs: Sequence[float]) -> np.ndarray:
    """Value-scale quantiles of a one-dimensional histogram (cell centers)."""
    if hist.dim != 1:
        raise ValueError("quantiles need a one-dimensional histogram")
    cum = np.cumsum(hist.masses) / hist.total
    scale = float(hist.b) ** hist.level
    picks = np.searchsorted(cum, np.asarray(qs, dtype=np.float64), side="left")
    picks = np.clip(picks, 0, hist.n_cells - 1)
    return (hist.keys[picks] + 0.5) / scale


def hist_to_text(hist: BadicHistogram) -> str:
    """Serialize as a header line ``dim level window`` then ``cell_index mass``
    lines; two-dimensional cell indices join their coordinates with a comma."""
    win = " ".join(f"{lo} {hi}" for lo, hi in hist.window)
    lines = [f"{hist.dim} {hist.level} {win}"]
    if hist.dim == 1:
        for k, m in zip(hist.keys.tolist(), hist.masses.tolist()):
            lines.append(f"{k} {m!r}")
    else:
        for (kx, ky), m in zip(hist.keys.tolist(), hist.masses.tolist()):
            lines.append(f"{kx},{ky} {m!r}")
    return "\n".join(lines) + "\n"


def hist_from_text(text: str, b: int) -> BadicHistogram:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    head = lines[0].split()
    dim, level = int(head[0]), int(head[1])
    keys = []
    masses = []
    for ln in lines[1:]:
        cell, mass = ln.split()
        if dim == 1:
            keys.append(int(cell))
        else:
            a, b_ = cell.split(",")
            keys.append((int(a), int(b_)))
        masses.append(float(mass))
    arr = np.asarray(keys, dtype=np.int64)
    return _pack_histogram(b, level, arr, np.asarray(masses, dtype=np.float64))


# ---------------------------------------------------------------------------
# entropy curves


@dataclass
class EntropyCurve:
    """Entropy per level with an OLS slope over a declared window.

    values are in log base b, nondecreasing in the level, and bounded by
    level + log_b(level-0 window cell count).
    """

    levels: tuple[int, ...]
    values: tuple[float, ...]
    window: tuple[int, ...]
    slope: float
    slope_stderr: float

    def value_at(self, level: int) -> float:
        return self.values[self.levels.index(level)]


def _fit_curve(levels: Sequence[int], values: Sequence[float],
               window: Sequence[int]) -> EntropyCurve:
    win = tuple(sorted(window))
    xs = np.array([lv for lv in levels if lv in win], dtype=np.float64)
    ys = np.array([v for lv, v in zip(levels, values) if lv in win])
    if len(xs) < 2:
        raise ValueError("slope window needs at least two levels")
    slope, _, stderr = ols_fit(xs, ys)
    return EntropyCurve(
        levels=tuple(int(lv) for lv in levels),
        values=tuple(float(v) for v in values),
        window=win,
        slope=float(slope),
        slope_stderr=float(stderr),
    )


def curve_to_csv(curve: EntropyCurve) -> str:
    lines = ["level,H,slope_window_flag"]
    for lv, v in zip(curve.levels, curve.values):
        flag = 1 if lv in curve.window else 0
        lines.append(f"{lv},{v!r},{flag}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# sampling


_JITTER_BLOCK = 1 << 16


def stratified_x(n_strata: int, lo_stratum: int, hi_stratum: int, seed: int,
                 key: int = 0) -> np.ndarray:
    """Jittered stratified points (s + u_s) / n_strata for s in [lo, hi).

    Jitter comes from fixed-width substream blocks keyed by the global
    stratum index, so any partition of the stratum range into shards
    reproduces the same points.  ``key`` separates independent sampling
    contexts under one root seed.
    """
    out = np.empty(hi_stratum - lo_stratum, dtype=np.float64)
    pos = 0
    blk = lo_stratum // _JITTER_BLOCK
    while pos < len(out):
        blk_lo = blk * _JITTER_BLOCK
        blk_hi = min(blk_lo + _JITTER_BLOCK, n_strata)
        u = substream(seed, 0x5A17, key, blk).random(blk_hi - blk_lo)
        a = max(lo_stratum, blk_lo)
        b_ = min(hi_stratum, blk_hi)
        out[pos : pos + (b_ - a)] = u[a - blk_lo : b_ - blk_lo]
        pos += b_ - a
        blk += 1
    idx = np.arange(lo_stratum, hi_stratum, dtype=np.float64)
    return (idx + out) / n_strata


def _strata_level(b: int, n_samples: int) -> int:
    level = 0
    cells = 1
    while cells < n_samples:
        cells *= b
        level += 1
    return level


def projected_values(
    params,
    phi: phimod.Phi,
    code: Code,
    xs: np.ndarray,
    tol: float = 1e-9,
    chunk: int = 1 << 22,
) -> np.ndarray:
    """Values W(x) - Gamma(x, code) of the projected measure, chunked."""
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty_like(xs)
    for a in range(0, len(xs), chunk):
        part = xs[a : a + chunk]
        out[a : a + chunk] = eval_w_vec(params, phi, part, tol) - eval_gamma_vec(
            params, phi, part, code, tol
        )
    return out


def sample_projected_measure(
    params,
    phi: phimod.Phi,
    code: Code,
    n_samples: int,
    level: int,
    seed: int = 0,
    stratified: bool = True,
    tol: float = 1e-9,
) -> BadicHistogram:
    """Histogram at ``level`` of the flow projection of the graph measure.

    Stratified mode places one x per cell of the level-ceil(log_b
    n_samples) partition of [0, 1); the histogram is then deterministic
    given the seed and independent of sharding.  The ``undersampled``
    meta flag marks n_samples < b^level.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if stratified:
        s_level = _strata_level(params.b, n_samples)
        n = params.b**s_level
        xs = stratified_x(n, 0, n, seed)
        meta_sampling = {"stratified": True, "strata_level": s_level}
    else:
        n = n_samples
        xs = substream(seed, 0x11D).random(n)
        meta_sampling = {"stratified": False}
    vals = projected_values(params, phi, code, xs, tol)
    meta = {
        "seed": seed,
        "n_samples": int(n),
        "undersampled": bool(n_samples < params.b**level),
        **meta_sampling,
    }
    return histogram_from_values(vals, params.b, level, meta=meta)


# ---------------------------------------------------------------------------
# alpha and dimension estimators


@dataclass
class AlphaReport:
    curves: list[EntropyCurve]
    alphas: tuple[float, ...]
    median: float
    iqr: float
    meta: dict


def alpha_estimate(
    params,
    phi: phimod.Phi,
    codes: Sequence[Code],
    levels: Sequence[int],
    n_samples: int,
    seed: int = 0,
    tol: float = 1e-9,
) -> AlphaReport:
    """Entropy dimension of the projected measures, one slope per code.

    Every code shares the same stratified x sample, so code-to-code
    spread reflects the projection direction alone.  Entropies at all
    levels up to the window top come from one finest histogram by exact
    coarsening; the summary is the median slope with interquartile range.
    """
    levels = sorted(int(lv) for lv in levels)
    if len(levels) < 2:
        raise ValueError("alpha_estimate needs at least two levels")
    top = levels[-1]
    s_level = _strata_level(params.b, n_samples)
    n = params.b**s_level
    xs = stratified_x(n, 0, n, seed)
    w = np.empty_like(xs)
    chunk = 1 << 22
    for a in range(0, n, chunk):
        w[a : a + chunk] = eval_w_vec(params, phi, xs[a : a + chunk], tol)
    curves = []
    alphas = []
    for code in codes:
        vals = np.empty_like(xs)
        for a in range(0, n, chunk):
            vals[a : a + chunk] = w[a : a + chunk] - eval_gamma_vec(
                params, phi, xs[a : a + chunk], code, tol
            )
        fine = histogram_from_values(vals, params.b, top)
        hs = []
        all_levels = list(range(1, top + 1))
        for lv in all_levels:
            hs.append(entropy(coarsen(fine, lv)))
        curve = _fit_curve(all_levels, hs, levels)
        curves.append(curve)
        alphas.append(curve.slope)
    arr = np.array(alphas)
    q1, q3 = np.percentile(arr, [25, 75])
    return AlphaReport(
        curves=curves,
        alphas=tuple(float(a) for a in arr),
        median=float(np.median(arr)),
        iqr=float(q3 - q1),
        meta={
            "seed": seed,
            "n_samples": int(n),
            "strata_level": s_level,
            "shared_x": True,
            "levels": tuple(levels),
        },
    )


@dataclass
class BoxDimReport:
    levels: tuple[int, ...]
    counts: tuple[int, ...]
    log_counts: tuple[float, ...]
    window: tuple[int, ...]
    slope: float
    slope_stderr: float
    column_level: int
    n_samples: int
    d_reference: float


def graph_box_dimension(
    params,
    phi: phimod.Phi,
    levels: Sequence[int],
    n_samples: int,
    seed: int = 0,
    column_margin: int = 3,
    tol: float = 1e-9,
    chunk_columns: int = 1 << 16,
) -> BoxDimReport:
    """Box-counting dimension estimate of the graph of W.

    One stratified sample per level-L column, with L the larger of
    ceil(log_b n_samples) and max(levels) + column_margin; per-column
    minima and maxima of W then yield the number of level-n squares the
    sampled graph meets, N_n = sum over columns of floor(b^n max) -
    floor(b^n min) + 1, for every n at once.  The slope of log_b N_n
    over the declared window estimates the dimension (a constant wave
    gives exactly 1).  The margin keeps several samples in every counted
    column so that sampled column ranges track the true oscillation.
    """
    levels = sorted(int(lv) for lv in levels)
    if len(levels) < 2:
        raise ValueError("graph_box_dimension needs at least two levels")
    n_max = levels[-1]
    col_level = max(_strata_level(params.b, n_samples), n_max + column_margin)
    n_cols_fine = params.b**n_max
    per_col = params.b ** (col_level - n_max)
    total = params.b**col_level
    col_min = np.full(n_cols_fine, np.inf)
    col_max = np.full(n_cols_fine, -np.inf)
    step = max(chunk_columns, 1) * per_col
    for start in range(0, total, step):
        stop = min(start + step, total)
        xs = stratified_x(total, start, stop, seed)
        ys = eval_w_vec(params, phi, xs, tol)
        cols = (stop - start) // per_col
        blk = ys.reshape(cols, per_col)
        c0 = start // per_col
        col_min[c0 : c0 + cols] = blk.min(axis=1)
        col_max[c0 : c0 + cols] = blk.max(axis=1)
    all_levels = list(range(1, n_max + 1))
    counts = []
    for n in all_levels:
        fold = params.b ** (n_max - n)
        mn = col_min.reshape(-1, fold).min(axis=1)
        mx = col_max.reshape(-1, fold).max(axis=1)
        scale = float(params.b) ** n
        boxes = np.floor(mx * scale) - np.floor(mn * scale) + 1.0
        counts.append(int(boxes.sum()))
    logs = [math.log(c) / math.log(params.b) for c in counts]
    curve = _fit_curve(all_levels, logs, levels)
    return BoxDimReport(
        levels=tuple(all_levels),
        counts=tuple(counts),
        log_counts=tuple(logs),
        window=curve.window,
        slope=curve.slope,
        slope_stderr=curve.slope_stderr,
        column_level=col_level,
        n_samples=int(total),
        d_reference=params.dim,
    )


@dataclass
class DimMuReport:
    dim_mu_est: float
    alpha_median: float
    rhs: float
    gap: float
    curve: EntropyCurve


def dim_mu_check(
    params,
    phi: phimod.Phi,
    code_count: int,
    levels: Sequence[int],
    n_samples: int,
    seed: int = 0,
    tol: float = 1e-9,
) -> DimMuReport:
    """Consistency gap between the graph-measure dimension and 1 + (D-1) alpha.

    The left side is the entropy slope of the two-dimensional histogram
    of (x, W(x)); alpha comes from ``alpha_estimate`` over ``code_count``
    seeded codes at the same levels.
    """
    levels = sorted(int(lv) for lv in levels)
    if len(levels) < 2:
        raise ValueError("dim_mu_check needs at least two levels")
    top = levels[-1]
    s_level = _strata_level(params.b, n_samples)
    n = params.b**s_level
    xs = stratified_x(n, 0, n, seed)
    ys = np.empty_like(xs)
    chunk = 1 << 22
    for a in range(0, n, chunk):
        ys[a : a + chunk] = eval_w_vec(params, phi, xs[a : a + chunk], tol)
    fine = histogram_from_points(xs, ys, params.b, top)
    hs = []
    all_levels = list(range(1, top + 1))
    for lv in all_levels:
        hs.append(entropy(coarsen(fine, lv)))
    curve = _fit_curve(all_levels, hs, levels)
    codes = [seeded_code(params.b, seed, i) for i in range(code_count)]
    alpha = alpha_estimate(params, phi, codes, levels, n_samples, seed, tol)
    rhs = 1.0 + (params.dim - 1.0) * alpha.median
    return DimMuReport(
        dim_mu_est=curve.slope,
        alpha_median=alpha.median,
        rhs=rhs,
        gap=abs(curve.slope - rhs),
        curve=curve,
    )


def n_hat(params, n: int) -> int:
    """Depth at which lam-scale first falls below the b-adic scale b^-n.

    The returned m satisfies lam^m <= b^-n < lam^(m-1); the comparison is
    settled in exact integer arithmetic, so no float log can misround it.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 0
    return ceil_log_ratio(n, params.b, params.lam)


# ---------------------------------------------------------------------------
# decomposition of a projection into word components


@dataclass
class DecompositionReport:
    components: list[tuple[float, BadicHistogram]]
    mixture: BadicHistogram
    direct: BadicHistogram
    tv_at_level: float
    max_cell_gap: float
    tolerance: float


def decompose_projection(
    params,
    phi: phimod.Phi,
    code: Code,
    n_decomp: int,
    level: int,
    n_samples: int,
    seed: int = 0,
    component_cap: int = 1 << 12,
    tol: float = 1e-9,
) -> DecompositionReport:
    """Split the projected measure into its b^n_decomp word components.

    Component u is sampled as the projection of the graph pushed through
    the word map g_u, each with its own stratified sample; the
    equal-weight mixture is compared against an independent direct sample
    of the projection at the same level.  Both the total variation and
    the worst single-cell discrepancy are reported against the
    statistical tolerance 3 / sqrt(n_samples).
    """
    if n_decomp < 0:
        raise ValueError("n_decomp must be nonnegative")
    n_comp = params.b**n_decomp
    if n_comp > component_cap:
        raise ValueError(f"{n_comp} components exceed the cap {component_cap}")
    per = max(1, -(-n_samples // n_comp))
    s_level = _strata_level(params.b, per)
    m = params.b**s_level
    comps: list[tuple[float, BadicHistogram]] = []
    lam = params.lam
    for ci in range(n_comp):
        xs = stratified_x(m, 0, m, seed, key=ci + 1)
        ys = eval_w_vec(params, phi, xs, tol)
        gx = xs
        gy = ys
        digits = []
        v = ci
        for _ in range(n_decomp):
            digits.append(v % params.b)
            v //= params.b
        for s in digits:  # rightmost word symbol first
            gx = (gx + s) / params.b
            gy = lam * gy + phimod.eval_phi(phi, gx)
        vals = gy - eval_gamma_vec(params, phi, gx, code, tol)
        comps.append((1.0 / n_comp, histogram_from_values(vals, params.b, level)))
    mixture = add_histograms([h for _, h in comps], [w for w, _ in comps])
    direct = sample_projected_measure(
        params, phi, code, n_comp * m, level, seed=seed + 1, tol=tol
    )
    keys = np.union1d(mixture.keys, direct.keys)
    pm = np.zeros(len(keys))
    pd = np.zeros(len(keys))
    pm[np.searchsorted(keys, mixture.keys)] = mixture.masses / mixture.total
    pd[np.searchsorted(keys, direct.keys)] = direct.masses / direct.total
    gaps = np.abs(pm - pd)
    return DecompositionReport(
        components=comps,
        mixture=mixture,
        direct=direct,
        tv_at_level=float(gaps.sum() / 2.0),
        max_cell_gap=float(gaps.max()),
        tolerance=3.0 / math.sqrt(n_comp * m),
    )


# ---------------------------------------------------------------------------
# continuity across scales


class _ProratedCdf:
    """Piecewise-linear CDF of a one-dimensional histogram.

    Mass inside each cell spreads uniformly, so interval masses vary
    linearly in the endpoints (the proration of boundary cells).
    """

    def __init__(self, hist: BadicHistogram):
        self.scale = float(hist.b) ** hist.level
        lo = int(hist.keys.min())
        hi = int(hist.keys.max())
        dense = np.zeros(hi - lo + 1)
        dense[hist.keys - lo] = hist.masses / hist.total
        self.lo = lo
        self.cum = np.concatenate([[0.0], np.cumsum(dense)])
        self.dense = dense

    def cdf(self, t: float) -> float:
        u = t * self.scale - self.lo
        if u <= 0.0:
            return 0.0
        if u >= len(self.dense):
            return float(self.cum[-1])
        cell = int(u)
        frac = u - cell
        return float(self.cum[cell] + frac * self.dense[cell])

    def interval_mass(self, a: float, b: float) -> float:
        return max(0.0, self.cdf(b) - self.cdf(a))


@dataclass
class UcasReport:
    sup_ratio: float
    delta: float
    degenerate_atom: bool
    n_ratios: int
    level: int
    meta: dict


def ucas_probe(
    params,
    phi: phimod.Phi,
    codes: Sequence[Code],
    delta: float,
    r_grid: Sequence[float] | None = None,
    x_grid: Sequence[float] | None = None,
    n_samples: int = 1 << 20,
    seed: int = 0,
    tol: float = 1e-9,
) -> UcasReport:
    """Worst observed ball-mass ratio mass(B(x, delta r)) / mass(B(x, r)).

    Ratios come from a histogram two levels finer than the smallest inner
    radius, with boundary cells prorated linearly.  The x grid defaults
    to quantiles of each projected measure so denominators stay positive;
    zero-denominator queries are skipped.  A cell holding most of the
    mass marks the degenerate atom case (where the ratio is pinned at 1).
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    if r_grid is None:
        r_grid = [float(params.b) ** -k for k in range(1, 5)]
    inner = delta * min(r_grid)
    level = max(1, math.ceil(-math.log(inner) / math.log(params.b))) + 2
    sup = 0.0
    count = 0
    degenerate = False
    for code in codes:
        hist = sample_projected_measure(
            params, phi, code, n_samples, level, seed=seed, tol=tol
        )
        if float(hist.masses.max()) / hist.total > 0.5:
            degenerate = True
        cdf = _ProratedCdf(hist)
        xg = (
            histogram_quantiles(hist, np.linspace(0.02, 0.98, 33))
            if x_grid is None
            else np.asarray(x_grid, dtype=np.float64)
        )
        for x in xg:
            for r in r_grid:
                den = cdf.interval_mass(x - r, x + r)
                if den <= 0.0:
                    continue
                num = cdf.interval_mass(x - delta * r, x + delta * r)
                sup = max(sup, num / den)
                count += 1
    return UcasReport(
        sup_ratio=sup,
        delta=delta,
        degenerate_atom=degenerate,
        n_ratios=count,
        level=level,
        meta={"seed": seed, "n_samples": n_samples, "r_grid": tuple(r_grid)},
    )


@dataclass
class PorosityReport:
    fraction: float
    threshold: float
    per_scale: dict[int, float]
    porous: bool
    delta: float


def porosity_probe(
    params,
    phi: phimod.Phi,
    code: Code,
    h: float,
    delta: float,
    m: int,
    n1: int,
    n2: int,
    level_cap: int = 26,
    n_samples: int = 1 << 20,
    seed: int = 0,
    tol: float = 1e-9,
    hist: BadicHistogram | None = None,
) -> PorosityReport:
    """Mass-weighted frequency of low-entropy components across scales.

    For each scale i in [n1, n2] and each level-i cell, the component
    measure's entropy over the next m levels is compared to m (h +
    delta); the fraction is the average over scales of the mass carried
    by components below the threshold.  A fraction above 1 - delta
    reports the measure as entropy-porous at these parameters.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if n1 > n2 or n1 < 0:
        raise ValueError("need 0 <= n1 <= n2")
    if n2 + m > level_cap:
        raise ValueError("n2 + m exceeds level_cap")
    if hist is None:
        hist = sample_projected_measure(
            params, phi, code, n_samples, n2 + m, seed=seed, tol=tol
        )
    elif hist.level < n2 + m:
        raise ValueError("supplied histogram is too coarse for n2 + m")
    logb = math.log(params.b)
    per_scale: dict[int, float] = {}
    for i in range(n1, n2 + 1):
        fine = coarsen(hist, i + m)
        group = fine.keys // (params.b**m)
        boundary = np.empty(len(group), dtype=bool)
        boundary[0] = True
        np.not_equal(group[1:], group[:-1], out=boundary[1:])
        starts = np.flatnonzero(boundary)
        cell_mass = np.add.reduceat(fine.masses, starts)
        plogp = fine.masses * np.log(fine.masses)
        sums = np.add.reduceat(plogp, starts)
        # H(component at L_{i+m}) = log(cell_mass) - sums/cell_mass, in nats
        h_comp = (np.log(cell_mass) - sums / cell_mass) / logb
        event = h_comp / m < h + delta
        per_scale[i] = float(cell_mass[event].sum() / cell_mass.sum())
    fraction = float(np.mean(list(per_scale.values())))
    return PorosityReport(
        fraction=fraction,
        threshold=h + delta,
        per_scale=per_scale,
        porous=fraction > 1.0 - delta,
        delta=delta,
    )
