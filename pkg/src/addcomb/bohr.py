"""Bohr sets: membership, dilation, intersection, regularity, size bounds.

B(Gamma, eps) = {x : ||gamma_j . x|| < eps_j for all j}, strict inequality,
where ||.|| is distance of the pairing phase to the nearest integer.  All
membership decisions reduce to integer comparisons: the phase of gamma_j at x
is c_j(x)/N with c_j an integer, so ||gamma_j . x|| < eps_j iff
min(c_j, N - c_j) * denom(eps_j) < N * numer(eps_j).

Scaling all radii by rho rescales one shared per-element statistic, so a
single sorted table answers size queries for every dilate of a spec.  That
makes regularity grids and radius searches cheap after one group pass.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .groups import (
    MAX_COORDS_TABLE,
    MAX_MEMBERSHIP_ORDER,
    GroupMismatchError,
    GroupSpec,
    SizeLimitError,
    coords_table,
)
from .report import CheckRecord, record_ge, record_le, require
from .setstat import GroupSet, group_set

_INT64_SAFE = 1 << 62
_DEFAULT_GRID_STEPS = 10
_RADIUS_ROUNDS = (256, 1024, 4096)
_RADIUS_DENOM = 1 << 30


class RegularRadiusError(RuntimeError):
    """No candidate radius passed the regularity grid; carries the trace."""

    def __init__(self, message: str, trace: list[tuple[Fraction, int]]):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class BohrSpec:
    group: GroupSpec
    gamma: tuple[int, ...]
    eps: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.gamma) != len(self.eps):
            raise ValueError("one radius per character required")
        for t in self.gamma:
            if not 0 <= t < self.group.order:
                raise ValueError(f"character index {t} out of range")
        for e in self.eps:
            if not 0 < e <= 1:
                raise ValueError(f"radius {e} outside (0, 1]")

    @property
    def d(self) -> int:
        return len(self.gamma)


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    worst_margin: float | None
    grid: tuple[Fraction, ...]
    sizes: tuple[tuple[Fraction, int], ...]
    base_size: int
    note: str = "finite grid evidence, not an all-eta proof"


@dataclass(frozen=True)
class BohrSet:
    spec: BohrSpec
    members: GroupSet
    regular: RegularityVerdict | None = None

    def __len__(self) -> int:
        return len(self.members)

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.members), self.spec.group.order)


def make_bohr_spec(g: GroupSpec, gamma: Sequence[int], eps) -> BohrSpec:
    """Normalize radii (a single rational is broadcast to every character)."""
    gam = tuple(gamma)
    if isinstance(eps, (Fraction, int, str)):
        rad = tuple(Fraction(eps) for _ in gam)
    else:
        rad = tuple(Fraction(e) for e in eps)
    return BohrSpec(g, gam, rad)


class _ExactCounter:
    """Per-element scaled norm statistic for one (Gamma, eps) pair.

    m(x) = max_j ||gamma_j . x|| / eps_j as the exact integer
    M(x) = max_j min(c_j, N-c_j) * b_j * (lcm_a / a_j) over the common
    scale L = N * lcm_a, so x lies in the rho-dilate iff M(x) < rho L.
    """

    def __init__(self, g: GroupSpec, gamma: Sequence[int], eps: Sequence[Fraction]):
        if g.order > MAX_MEMBERSHIP_ORDER:
            raise SizeLimitError(f"Bohr materialization capped at order {MAX_MEMBERSHIP_ORDER}")
        self.group = g
        n = g.order
        d = len(gamma)
        if d == 0:
            self.scale = 1
            self.by_index: np.ndarray | list[int] = np.zeros(n, dtype=np.int64)
            self.sorted_values: np.ndarray | list[int] = self.by_index
            return
        lcm_a = 1
        for e in eps:
            lcm_a = math.lcm(lcm_a, e.numerator)
        self.scale = n * lcm_a
        mults = [e.denominator * (lcm_a // e.numerator) for e in eps]
        weights = []
        for t in gamma:
            gc = g.unindex(t)
            weights.append([(gc[i] * (n // f)) % n for i, f in enumerate(g.factors)])
        bound = (n // 2) * max(mults)
        if n <= MAX_COORDS_TABLE and bound < _INT64_SAFE:
            coords = coords_table(g).astype(np.int64)
            w = np.array(weights, dtype=np.int64).T  # (rank, d)
            c = (coords @ w) % n
            v = np.minimum(c, n - c)
            m = (v * np.array(mults, dtype=np.int64)).max(axis=1)
            self.by_index = m
            self.sorted_values = np.sort(m)
        else:
            vals = []
            for x in g.elements():
                worst = 0
                for w_row, mult in zip(weights, mults):
                    c = sum(a * b for a, b in zip(x, w_row)) % n
                    scaled = min(c, n - c) * mult
                    if scaled > worst:
                        worst = scaled
                vals.append(worst)
            self.by_index = vals
            self.sorted_values = sorted(vals)

    def _threshold(self, rho: Fraction) -> int:
        # M < rho * L iff M < ceil(rho * L), for both integer and fractional cuts
        r, s = rho.numerator, rho.denominator
        return (r * self.scale + s - 1) // s

    def count(self, rho: Fraction) -> int:
        if rho <= 0:
            raise ValueError("dilation factor must be positive")
        thr = self._threshold(rho)
        if isinstance(self.sorted_values, np.ndarray):
            if thr >= _INT64_SAFE:
                return len(self.sorted_values)
            return int(np.searchsorted(self.sorted_values, thr, side="left"))
        return bisect_left(self.sorted_values, thr)

    def member_indices(self, rho: Fraction) -> list[int]:
        thr = self._threshold(rho)
        if isinstance(self.by_index, np.ndarray):
            if thr >= _INT64_SAFE:
                return list(range(len(self.by_index)))
            return [int(i) for i in np.nonzero(self.by_index < thr)[0]]
        return [i for i, m in enumerate(self.by_index) if m < thr]


def materialize(g: GroupSpec, spec: BohrSpec, check_regular: bool = False) -> BohrSet:
    """Enumerate members exactly; asserts the (N/2) prod eps_j size floor."""
    if spec.group != g:
        raise GroupMismatchError("spec belongs to a different group")
    counter = _ExactCounter(g, spec.gamma, spec.eps)
    members = group_set(g, counter.member_indices(Fraction(1)))
    if 0 not in members.index_set:
        raise AssertionError("Bohr set lost the identity element")
    if members.neg().index_set != members.index_set:
        raise AssertionError("Bohr set is not symmetric under negation")
    num = math.prod(e.numerator for e in spec.eps)
    den = math.prod(e.denominator for e in spec.eps)
    require(
        record_ge(
            "Bohr size floor",
            "bohr:size_lower",
            2 * len(members) * den,
            g.order * num,
            note=f"|B| = {len(members)} vs (N/2) prod eps over order {g.order}",
        )
    )
    out = BohrSet(spec, members)
    if check_regular:
        out = replace(out, regular=regularity_test(out))
    return out


def dilate(spec: BohrSpec, rho: Fraction) -> BohrSpec:
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError("dilation factor must be positive")
    new_eps = tuple(rho * e for e in spec.eps)
    for e in new_eps:
        if e > 1:
            raise ValueError(f"radius overflow: dilate by {rho} pushes a radius to {e} > 1")
    return BohrSpec(spec.group, spec.gamma, new_eps)


def size_profile(g: GroupSpec, spec: BohrSpec, rhos: Sequence[Fraction]) -> list[int]:
    """|B(Gamma, rho * eps)| for each dilation factor, off one counting table.

    Equivalent to materializing each dilate and taking its length, but the
    membership statistic is computed once.
    """
    if spec.group != g:
        raise GroupMismatchError("spec belongs to a different group")
    counter = _ExactCounter(g, spec.gamma, spec.eps)
    out = []
    for rho in rhos:
        rho = Fraction(rho)
        if rho <= 0:
            raise ValueError("dilation factor must be positive")
        if any(rho * e > 1 for e in spec.eps):
            raise ValueError(f"radius overflow at dilation {rho}")
        out.append(counter.count(rho))
    return out


def intersect(spec1: BohrSpec, spec2: BohrSpec) -> BohrSpec:
    if spec1.group != spec2.group:
        raise GroupMismatchError("Bohr specs live on different groups")
    radii: dict[int, Fraction] = {}
    order: list[int] = []
    for t, e in zip(spec1.gamma + spec2.gamma, spec1.eps + spec2.eps):
        if t in radii:
            radii[t] = min(radii[t], e)
        else:
            radii[t] = e
            order.append(t)
    return BohrSpec(spec1.group, tuple(order), tuple(radii[t] for t in order))


def default_eta_grid(d: int, steps: int = _DEFAULT_GRID_STEPS) -> tuple[Fraction, ...]:
    """Symmetric grid eta = +-i/(1000 d), all satisfying d|eta| <= 1/100."""
    if d == 0:
        return ()
    grid = []
    for i in range(1, steps + 1):
        grid.append(Fraction(i, 1000 * d))
        grid.append(Fraction(-i, 1000 * d))
    return tuple(grid)


def _grid_sizes(counter: _ExactCounter, base_rho: Fraction, grid: Sequence[Fraction]) -> list[tuple[Fraction, int]]:
    return [(eta, counter.count(base_rho * (1 + eta))) for eta in grid]


def _grid_verdict(
    d: int, base_size: int, sizes: Sequence[tuple[Fraction, int]], grid: Sequence[Fraction]
) -> RegularityVerdict:
    regular = True
    worst: Fraction | None = None
    for eta, size in sizes:
        mag = abs(eta)
        low = (1 - 100 * d * mag) * base_size
        high = (1 + 100 * d * mag) * base_size
        ok = low < size < high
        margin = min(Fraction(size) - low, high - Fraction(size))
        regular = regular and ok
        if worst is None or margin < worst:
            worst = margin
    return RegularityVerdict(
        regular=regular,
        worst_margin=None if worst is None else float(worst),
        grid=tuple(grid),
        sizes=tuple(sizes),
        base_size=base_size,
    )


def regularity_test(b: BohrSet, eta_grid: Sequence[Fraction] | None = None) -> RegularityVerdict:
    """Check (1 - 100 d|eta|)|B| < |B_(1+eta)| < (1 + 100 d|eta|)|B| on a grid."""
    spec = b.spec
    d = spec.d
    if d == 0:
        return RegularityVerdict(True, None, (), (), len(b.members), note="dimension 0 is vacuously regular")
    grid = tuple(eta_grid) if eta_grid is not None else default_eta_grid(d)
    for eta in grid:
        if d * abs(eta) > Fraction(1, 100):
            raise ValueError(f"grid point {eta} violates d|eta| <= 1/100")
    counter = _ExactCounter(spec.group, spec.gamma, spec.eps)
    base_size = counter.count(Fraction(1))
    if base_size != len(b.members):
        raise AssertionError("materialized member count disagrees with the counting table")
    sizes = _grid_sizes(counter, Fraction(1), grid)
    return _grid_verdict(d, base_size, sizes, grid)


def find_regular_radius(
    g: GroupSpec, gamma: Sequence[int], eps, rounds: Sequence[int] = _RADIUS_ROUNDS
) -> BohrSpec:
    """Search rho in (1/2, 1) so that B(Gamma, rho * eps) passes the grid test.

    Geometric sweep of 256 candidate factors, densified by 4x up to twice
    (override the schedule with rounds).  Exhaustion raises with the full
    size-vs-radius trace; that signals a grid too coarse for this instance,
    not a structural impossibility.
    """
    base = make_bohr_spec(g, gamma, eps)
    counter = _ExactCounter(g, base.gamma, base.eps)
    d = base.d
    grid = default_eta_grid(d)
    trace: list[tuple[Fraction, int]] = []
    seen: set[Fraction] = set()
    for points in rounds:
        for i in range(points):
            rho = Fraction(round(2 ** (-(i + 1) / (points + 1)) * _RADIUS_DENOM), _RADIUS_DENOM)
            if not Fraction(1, 2) < rho < 1 or rho in seen:
                continue
            seen.add(rho)
            base_size = counter.count(rho)
            if d == 0:
                return dilate(base, rho)
            sizes = _grid_sizes(counter, rho, grid)
            verdict = _grid_verdict(d, base_size, sizes, grid)
            trace.append((rho, base_size))
            if verdict.regular:
                return dilate(base, rho)
    lines = [f"  rho={r}  size={s}" for r, s in trace[:64]]
    if len(trace) > 64:
        lines.append(f"  ... {len(trace) - 64} more candidates")
    raise RegularRadiusError(
        "no regular radius found in (eps/2, eps) after densification; size-vs-radius trace:\n"
        + "\n".join(lines),
        trace,
    )


def check_size_bounds(b: BohrSet, others: Sequence[BohrSet] = ()) -> list[CheckRecord]:
    """Assert the size floor, the half-radius doubling cap, and the
    intersection entropy bound |/\\ B^(i)| * N^(m-1) >= prod |B^(i)_(1/2)|.
    """
    spec = b.spec
    g = spec.group
    records = []
    num = math.prod(e.numerator for e in spec.eps)
    den = math.prod(e.denominator for e in spec.eps)
    records.append(
        require(
            record_ge(
                "Bohr size floor",
                "bohr:size_lower",
                2 * len(b.members) * den,
                g.order * num,
                note=f"d={spec.d}",
            )
        )
    )
    counter = _ExactCounter(g, spec.gamma, spec.eps)
    half = counter.count(Fraction(1, 2))
    records.append(
        require(
            record_le(
                "half-radius doubling cap",
                "bohr:size_halving",
                len(b.members),
                8 ** (spec.d + 1) * half,
                note=f"|B|={len(b.members)}, |B_1/2|={half}",
            )
        )
    )
    sets = [b, *others]
    wedge_spec = sets[0].spec
    for other in sets[1:]:
        wedge_spec = intersect(wedge_spec, other.spec)
    wedge = materialize(g, wedge_spec)
    halves = []
    for s in sets:
        c = _ExactCounter(g, s.spec.gamma, s.spec.eps)
        halves.append(c.count(Fraction(1, 2)))
    records.append(
        require(
            record_ge(
                "intersection entropy floor",
                "bohr:size_intersection",
                len(wedge.members) * g.order ** (len(sets) - 1),
                math.prod(halves),
                note=f"m={len(sets)} sets, wedge size {len(wedge.members)}",
            )
        )
    )
    return records
