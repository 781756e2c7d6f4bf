"""Transcendental eigenvalue functions and pole-aware root finding.

The regular spectrum of each model is the zero set of

    F(E) = R_0(E) + a_0(E),

where R_0 is the minimal-ratio continued fraction and a_0 the first recurrence
coefficient.  Roots are located by scanning a pole-aware grid for sign changes
and refining each bracket by bisection with secant acceleration.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .contfrac import CFValue, DEFAULT_MAX_DEPTH, DEFAULT_REL_TOL, eval_continued_fraction
from .errors import CollapseRegimeWarning, EmptyWindow, PoleCollision, SignLostWarning
from .models import (
    ModelKind,
    ModelParams,
    Sector,
    bogoliubov_params,
    distance_to_pole_set,
    pole_energy,
    pole_spacing,
    three_term_coeffs,
)

# Pole-handling constants (in units of omega where dimensionful).
EPS_POLE_GUARD_FACTOR = 1e-6   # grid points are kept this far away from poles
EPS_EXC_FACTOR = 1e-5          # roots closer than this to a pole are exceptional candidates
RESIDUAL_CAP = 1e-4            # refined roots above this |F| are rejected
BLOWUP_THRESHOLD = 1e5         # sign changes with samples above this are pole artifacts
REFINE_THRESHOLD = 1e-2        # same-sign intervals with |F| below this get subdivided
COLLAPSE_ROOT_FACTOR = 0.05    # below this Omega/Lambda, grids are tightened
_SUBDIVISIONS = 8
_MAX_SUBDIVIDE_DEPTH = 3


@dataclass(frozen=True)
class SpectralSample:
    """One evaluation of the transcendental function."""

    energy: float
    value: float
    cf: CFValue
    near_pole: bool


@dataclass(frozen=True)
class Bracket:
    """Sign-change interval free of analytic poles."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float


@dataclass(frozen=True)
class RootRecord:
    energy: float
    residual: float
    bracket_width: float
    iterations: int
    sign_lost: bool = False


@dataclass(frozen=True)
class SpectrumOptions:
    grid_step: float | None = None
    cf_rel_tol: float = DEFAULT_REL_TOL
    cf_max_depth: int = DEFAULT_MAX_DEPTH
    root_abs_tol: float = 1e-10


@dataclass(frozen=True)
class SpectrumResult:
    """Regular roots, pole set and exceptional candidates found in a window."""

    roots: list[RootRecord]
    poles: list[float]
    flagged: list[RootRecord]
    window: tuple[float, float]
    grid_points: int
    brackets_found: int
    brackets_rejected: int
    model: ModelParams
    sector: Sector

    @property
    def energies(self) -> list[float]:
        return [r.energy for r in self.roots]


def _guard(model: ModelParams) -> float:
    return EPS_POLE_GUARD_FACTOR * model.omega


def eps_exceptional(model: ModelParams) -> float:
    return EPS_EXC_FACTOR * model.omega


def poles_in_window(
    model: ModelParams, sector: Sector, e_min: float, e_max: float
) -> list[float]:
    """Analytic pole energies lying in [e_min, e_max]."""
    first = pole_energy(model, sector, 0)
    spacing = pole_spacing(model, sector)
    if e_max < first:
        return []
    n_hi = int(math.floor((e_max - first) / spacing)) + 1
    return [
        p
        for p in (first + n * spacing for n in range(n_hi + 1))
        if e_min <= p <= e_max
    ]


def spectral_function(
    model: ModelParams,
    sector: Sector,
    energy: float,
    rel_tol: float = DEFAULT_REL_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> SpectralSample:
    """Evaluate F(E) = R_0(E) + a_0(E) (G and Q for the other models).

    Raises PoleCollision within eps_pole of the pole set; ``near_pole`` flags
    samples within the wider grid-guard distance.
    """
    coeffs = three_term_coeffs(model, sector, energy)  # raises ZeroCoupling/PoleCollision
    cf = eval_continued_fraction(coeffs, start=0, rel_tol=rel_tol, max_depth=max_depth)
    dist = distance_to_pole_set(model, sector, energy)
    return SpectralSample(
        energy=energy,
        value=cf.value + coeffs.a(0),
        cf=cf,
        near_pole=dist < _guard(model),
    )


def _forward_ratio(coeffs, k: int) -> float:
    """K_{k+1}/K_k from forward recursion of the single-ended sequence, K_0 = 1.

    Exact (no minimality subtlety) for the small k used here; normalized each
    step so intermediate magnitudes stay bounded.
    """
    curr = -coeffs.a(0)  # K_1
    prev = 1.0           # K_0
    for m in range(1, k + 1):
        nxt = -coeffs.a(m) * curr - coeffs.b(m) * prev
        prev, curr = curr, nxt
        scale = max(abs(prev), abs(curr))
        if scale > 1e150:
            prev /= scale
            curr /= scale
    if curr == 0.0 and prev == 0.0:
        return math.nan
    if prev == 0.0:
        return math.inf if curr > 0 else -math.inf
    return curr / prev


def split_spectral_value(
    model: ModelParams,
    sector: Sector,
    energy: float,
    split: int,
    rel_tol: float = DEFAULT_REL_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> float:
    """Eigenvalue mismatch at split index k: CF tail ratio minus forward ratio.

    For split = 0 this is exactly F(E).  Its zero set is the same regular
    spectrum for every split, but the pole structure differs: near the k-th
    analytic pole energy the continued fraction starting at k consumes no
    divergent coefficient, while the forward ratio has an explicit simple pole
    exactly there.  That turns eigenvalues hugging the k-th pole, which can
    hide from a sign scan of F inside tight zero/pole pairs, into clean sign
    changes on a ladder of samples around the known pole location.
    """
    coeffs = three_term_coeffs(model, sector, energy)
    cf = eval_continued_fraction(coeffs, start=split, rel_tol=rel_tol, max_depth=max_depth)
    return cf.value - _forward_ratio(coeffs, split)


def _grid_points(
    model: ModelParams, sector: Sector, e_min: float, e_max: float, grid_step: float
) -> list[float]:
    """Uniform grid plus pole-adjacent guard points, all off the pole set."""
    guard = _guard(model)
    pts: list[float] = []
    n_steps = int(math.ceil((e_max - e_min) / grid_step))
    for i in range(n_steps + 1):
        pts.append(min(e_min + i * grid_step, e_max))
    for p in poles_in_window(model, sector, e_min - guard, e_max + guard):
        if p - guard >= e_min:
            pts.append(p - guard)
        if p + guard <= e_max:
            pts.append(p + guard)
    pts.sort()
    kept = [
        x
        for x in pts
        if distance_to_pole_set(model, sector, x) >= guard * (1.0 - 1e-9)
    ]
    # drop duplicates from the merge
    out: list[float] = []
    for x in kept:
        if not out or x - out[-1] > 1e-15 * max(1.0, abs(x)):
            out.append(x)
    return out


def _pole_strictly_inside(model, sector, lo: float, hi: float) -> bool:
    first = pole_energy(model, sector, 0)
    spacing = pole_spacing(model, sector)
    n_lo = int(math.ceil((lo - first) / spacing - 1e-12))
    n_hi = int(math.floor((hi - first) / spacing + 1e-12))
    for n in range(max(n_lo, 0), n_hi + 1):
        if lo < first + n * spacing < hi:
            return True
    return False


def scan_brackets(
    model: ModelParams,
    sector: Sector,
    window: tuple[float, float],
    grid_step: float,
    cf_rel_tol: float = DEFAULT_REL_TOL,
    cf_max_depth: int = DEFAULT_MAX_DEPTH,
) -> list[Bracket]:
    """Locate sign-change brackets of F in ``window``.

    Sign changes straddling an analytic pole, and sign changes whose samples
    exceed the blowup threshold (pole artifacts, not roots), are discarded.
    Same-sign intervals where |F| dips below the refinement threshold are
    subdivided to catch near-degenerate pairs.
    """
    e_min, e_max = window
    if not e_min < e_max:
        raise ValueError("window must satisfy E_min < E_max")
    if grid_step <= 0.0:
        raise ValueError("grid_step must be positive")
    pts = _grid_points(model, sector, e_min, e_max, grid_step)
    if len(pts) < 2:
        raise EmptyWindow("no usable grid points in window")

    def f(e: float) -> float:
        return spectral_function(model, sector, e, cf_rel_tol, cf_max_depth).value

    samples = [(x, f(x)) for x in pts]
    brackets: list[Bracket] = []
    for (x1, f1), (x2, f2) in zip(samples, samples[1:]):
        brackets.extend(
            _brackets_between(model, sector, x1, f1, x2, f2, f, depth=0)
        )
    return brackets


def _brackets_between(model, sector, x1, f1, x2, f2, f, depth: int) -> list[Bracket]:
    if not (math.isfinite(f1) and math.isfinite(f2)):
        return []
    if _pole_strictly_inside(model, sector, x1, x2):
        return []
    opposite = (f1 < 0.0) != (f2 < 0.0) or f1 == 0.0 or f2 == 0.0
    if opposite:
        if max(abs(f1), abs(f2)) > BLOWUP_THRESHOLD:
            return []
        return [Bracket(x1, x2, f1, f2)]
    if (
        depth < _MAX_SUBDIVIDE_DEPTH
        and min(abs(f1), abs(f2)) < REFINE_THRESHOLD
        and x2 - x1 > 64.0 * _guard(model)
    ):
        xs = [x1 + (x2 - x1) * i / _SUBDIVISIONS for i in range(_SUBDIVISIONS + 1)]
        fs = [f1] + [f(x) for x in xs[1:-1]] + [f2]
        out: list[Bracket] = []
        for (a, fa), (b, fb) in zip(zip(xs, fs), zip(xs[1:], fs[1:])):
            out.extend(_brackets_between(model, sector, a, fa, b, fb, f, depth + 1))
        return out
    return []


def refine_root(
    model: ModelParams,
    sector: Sector,
    bracket: Bracket,
    abs_tol: float = 1e-10,
    cf_rel_tol: float = DEFAULT_REL_TOL,
    cf_max_depth: int = DEFAULT_MAX_DEPTH,
) -> RootRecord:
    """Shrink a bracket to ``abs_tol`` by bisection with secant acceleration.

    The sign change is preserved at every step.  If floating point loses it
    (evaluation at the trial point is zero or non-finite) the best enclosure
    is returned flagged via ``sign_lost``.
    """
    if abs_tol <= 0.0:
        raise ValueError("abs_tol must be positive")

    def f(e: float) -> float:
        try:
            return spectral_function(model, sector, e, cf_rel_tol, cf_max_depth).value
        except PoleCollision:
            return math.nan

    mid, width, iterations, sign_lost = _bisect(
        f, bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi, abs_tol
    )
    resid = abs(f(mid))
    return RootRecord(
        energy=mid,
        residual=resid if math.isfinite(resid) else math.inf,
        bracket_width=width,
        iterations=iterations,
        sign_lost=sign_lost,
    )


def _bisect(f, lo, hi, f_lo, f_hi, abs_tol) -> tuple[float, float, int, bool]:
    """Sign-preserving bisection with interior secant steps on a callable.

    ``f`` must return nan (never raise) on unusable points.  Returns
    (midpoint, final width, iterations, sign_lost).
    """
    if not lo < hi or (f_lo < 0.0) == (f_hi < 0.0):
        raise ValueError("invalid bracket")
    iterations = 0
    sign_lost = False
    while hi - lo > abs_tol:
        iterations += 1
        x = 0.5 * (lo + hi)
        if f_hi != f_lo:
            secant = (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
            margin = 0.1 * (hi - lo)
            if lo + margin < secant < hi - margin:
                x = secant
        fx = f(x)
        if not math.isfinite(fx):
            # retreat to plain bisection away from the bad point
            x = 0.5 * (lo + hi) if x != 0.5 * (lo + hi) else lo + 0.25 * (hi - lo)
            fx = f(x)
            if not math.isfinite(fx):
                sign_lost = True
                warnings.warn(
                    "root refinement hit non-finite evaluations; returning enclosure",
                    SignLostWarning,
                )
                break
        if fx == 0.0:
            lo = hi = x
            f_lo = f_hi = 0.0
            break
        if (fx < 0.0) == (f_lo < 0.0):
            lo, f_lo = x, fx
        else:
            hi, f_hi = x, fx
        if iterations > 200:
            sign_lost = True
            warnings.warn("root refinement iteration cap reached", SignLostWarning)
            break
    return 0.5 * (lo + hi), hi - lo, iterations, sign_lost


_LADDER_RATIO = 1.6   # geometric growth of sample distances from a pole
_LADDER_REACH = 0.45  # ladder extent per side, in units of the pole spacing


def _split_eval(model, sector, energy: float, split: int, opts: SpectrumOptions) -> float:
    try:
        v = split_spectral_value(
            model, sector, energy, split, opts.cf_rel_tol, opts.cf_max_depth
        )
    except PoleCollision:
        return math.nan
    return v if math.isfinite(v) else math.nan


def _refine_split(
    model: ModelParams,
    sector: Sector,
    split: int,
    lo: float,
    hi: float,
    f_lo: float,
    f_hi: float,
    opts: SpectrumOptions,
) -> RootRecord | None:
    """Refine a sign change of the split function; None if it was a pole artifact.

    Acceptance is judged on the split function itself (smooth at the root even
    when F sits in a tight zero/pole pair there); the recorded residual is |F|
    where that is finite.
    """

    def w(e: float) -> float:
        return _split_eval(model, sector, e, split, opts)

    mid, width, iters, lost = _bisect(w, lo, hi, f_lo, f_hi, opts.root_abs_tol)
    w_mid = abs(w(mid))
    if lost or not math.isfinite(w_mid) or w_mid > RESIDUAL_CAP:
        return None
    try:
        resid = abs(
            spectral_function(model, sector, mid, opts.cf_rel_tol, opts.cf_max_depth).value
        )
    except PoleCollision:
        resid = math.inf
    return RootRecord(
        energy=mid,
        residual=resid if math.isfinite(resid) else w_mid,
        bracket_width=width,
        iterations=iters,
        sign_lost=False,
    )


def _nearest_pole_index(model: ModelParams, sector: Sector, energy: float) -> int:
    first = pole_energy(model, sector, 0)
    spacing = pole_spacing(model, sector)
    return max(0, round((energy - first) / spacing))


def _split_grid_roots(
    model: ModelParams,
    sector: Sector,
    window: tuple[float, float],
    grid_step: float,
    opts: SpectrumOptions,
) -> tuple[list[RootRecord], int, int]:
    """Grid scan of the split function with the locally matching pole index.

    F can hide roots anywhere inside tight zero/pole pairs (its hidden poles
    are continuant zeros, not restricted to the analytic pole set); the split
    function with the nearest pole index is smooth there and shows the same
    roots as plain sign changes.  Returns (records, found, rejected).
    """
    pts = _grid_points(model, sector, window[0], window[1], grid_step)
    records: list[RootRecord] = []
    found = 0
    rejected = 0
    cache: dict[tuple[int, float], float] = {}

    def w(split: int, e: float) -> float:
        key = (split, e)
        if key not in cache:
            cache[key] = _split_eval(model, sector, e, split, opts)
        return cache[key]

    for x1, x2 in zip(pts, pts[1:]):
        if _pole_strictly_inside(model, sector, x1, x2):
            continue
        base = _nearest_pole_index(model, sector, 0.5 * (x1 + x2))
        # two split indices: their hidden poles (continuant zeros) differ, so
        # a root invisible at one index is a plain sign change at the other
        for split in (base, base + 1):
            f1, f2 = w(split, x1), w(split, x2)
            if not (math.isfinite(f1) and math.isfinite(f2)):
                continue
            if (f1 < 0.0) == (f2 < 0.0) and f1 != 0.0 and f2 != 0.0:
                continue
            if max(abs(f1), abs(f2)) > BLOWUP_THRESHOLD:
                continue
            found += 1
            rec = _refine_split(model, sector, split, x1, x2, f1, f2, opts)
            if rec is None:
                rejected += 1
            else:
                records.append(rec)
    return records, found, rejected


def _near_pole_roots(
    model: ModelParams,
    sector: Sector,
    window: tuple[float, float],
    opts: SpectrumOptions,
) -> tuple[list[RootRecord], int, int]:
    """Sweep the split-index eigencondition around every pole near the window.

    Eigenvalues that hug a pole energy sit inside zero/pole pairs of F too
    tight for the uniform grid to see; on the split function with the matching
    index they are ordinary sign changes.  Returns (records, brackets found,
    brackets rejected); records still carry |F| residuals where finite.
    """
    e_min, e_max = window
    spacing = pole_spacing(model, sector)
    reach = _LADDER_REACH * spacing
    guard = _guard(model)
    first = pole_energy(model, sector, 0)
    n_lo = max(0, int(math.ceil((e_min - reach - first) / spacing - 1e-12)))
    n_hi = int(math.floor((e_max + reach - first) / spacing + 1e-12))
    records: list[RootRecord] = []
    found = 0
    rejected = 0
    for n in range(n_lo, n_hi + 1):
        p = first + n * spacing
        for side in (-1.0, +1.0):
            xs: list[float] = []
            d = guard
            while d < reach:
                x = p + side * d
                if e_min <= x <= e_max:
                    xs.append(x)
                d *= _LADDER_RATIO
            if len(xs) < 2:
                continue
            samples = [(x, _split_eval(model, sector, x, n, opts)) for x in xs]
            for (x1, f1), (x2, f2) in zip(samples, samples[1:]):
                if not (math.isfinite(f1) and math.isfinite(f2)):
                    continue
                if (f1 < 0.0) == (f2 < 0.0) and f1 != 0.0 and f2 != 0.0:
                    continue
                found += 1
                lo, hi = (x1, x2) if x1 < x2 else (x2, x1)
                flo, fhi = (f1, f2) if x1 < x2 else (f2, f1)
                rec = _refine_split(model, sector, n, lo, hi, flo, fhi, opts)
                if rec is None:
                    rejected += 1
                else:
                    records.append(rec)
    return records, found, rejected


def default_grid_step(model: ModelParams) -> float:
    """Several samples per inter-pole interval, tightened near spectral collapse."""
    w = model.omega
    if model.kind is ModelKind.DRIVEN_RABI:
        return w / 40.0
    root = bogoliubov_params(model).root_factor
    step = min(2.0 * w * root, w) / 40.0
    if root < COLLAPSE_ROOT_FACTOR:
        step *= root / COLLAPSE_ROOT_FACTOR
    return step


def default_window_min(model: ModelParams, sector: Sector) -> float:
    """Lower scan bound guaranteed to sit below the ground state."""
    p0 = pole_energy(model, sector, 0)
    return min(p0, -model.omega) - model.delta - abs(model.drive) - 1.0


def compute_spectrum(
    model: ModelParams,
    sector: Sector,
    window: tuple[float, float],
    opts: SpectrumOptions | None = None,
) -> SpectrumResult:
    """Full pipeline: pole set, bracket scan, refinement, exceptional flagging.

    Roots within the exceptional tolerance of a pole energy are reported in
    ``flagged`` (exceptional-spectrum candidates; the truncation constraints
    are not checked).  Refined brackets whose residual exceeds the cap are
    pole artifacts and are counted in ``brackets_rejected``.
    """
    if opts is None:
        opts = SpectrumOptions()
    e_min, e_max = window
    if not e_min < e_max:
        raise ValueError("window must satisfy E_min < E_max")

    grid_step = opts.grid_step if opts.grid_step is not None else default_grid_step(model)
    if model.kind is not ModelKind.DRIVEN_RABI:
        root = bogoliubov_params(model).root_factor
        if root < COLLAPSE_ROOT_FACTOR:
            warnings.warn(
                f"root factor {root:.3g} < {COLLAPSE_ROOT_FACTOR}: near spectral "
                "collapse, grid tightened; results may still miss levels",
                CollapseRegimeWarning,
            )

    brackets = scan_brackets(
        model, sector, window, grid_step, opts.cf_rel_tol, opts.cf_max_depth
    )
    eps_exc = eps_exceptional(model)
    roots: list[RootRecord] = []
    flagged: list[RootRecord] = []
    rejected = 0
    for br in brackets:
        rec = refine_root(
            model, sector, br, opts.root_abs_tol, opts.cf_rel_tol, opts.cf_max_depth
        )
        if distance_to_pole_set(model, sector, rec.energy) < eps_exc:
            flagged.append(rec)
        elif rec.residual <= RESIDUAL_CAP and not rec.sign_lost:
            roots.append(rec)
        else:
            rejected += 1

    # second pass: the split function on the same grid sees roots hidden inside
    # tight zero/pole pairs of F; third pass: geometric ladders around each
    # pole for roots hugging the pole set closer than the grid resolves
    split_recs, split_found, split_rejected = _split_grid_roots(
        model, sector, window, grid_step, opts
    )
    near, near_found, near_rejected = _near_pole_roots(model, sector, window, opts)
    merge_tol = max(50.0 * opts.root_abs_tol, 1e-12 * model.omega)
    for rec in split_recs + near:
        if any(abs(rec.energy - r.energy) < merge_tol for r in roots + flagged):
            continue
        if distance_to_pole_set(model, sector, rec.energy) < eps_exc:
            flagged.append(rec)
        else:
            roots.append(rec)

    roots.sort(key=lambda r: r.energy)
    flagged.sort(key=lambda r: r.energy)
    n_grid = len(_grid_points(model, sector, e_min, e_max, grid_step))
    return SpectrumResult(
        roots=roots,
        poles=poles_in_window(model, sector, e_min, e_max),
        flagged=flagged,
        window=(e_min, e_max),
        grid_points=n_grid,
        brackets_found=len(brackets) + split_found + near_found,
        brackets_rejected=rejected + split_rejected + near_rejected,
        model=model,
        sector=sector,
    )
