"""Transforms, convolution and correlation over finite abelian groups.

The transform convention carries no 1/N factor:

    fhat(t) = sum_x f(x) * conj(chi_t(x)),

so the Parseval identity reads  N * sum_x |f(x)|^2 = sum_t |fhat(t)|^2.
On 2-groups the transform is the integer Walsh-Hadamard butterfly and integer
inputs produce exactly integer outputs; on general groups it is the
per-coordinate mixed-radix DFT evaluated in complex doubles.  Convolution and
correlation have an exact direct path (used automatically at small orders and
whenever integer exactness is required) and a transform path whose rounding is
verified against a residual bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .groups import (
    GroupMismatchError,
    GroupSpec,
    MAX_MEMBERSHIP_ORDER,
    MAX_TRANSFORM_ORDER,
    SizeLimitError,
    add_index_many,
    sub_index_many,
)

DIRECT_CONV_MAX_ORDER = 1 << 12
_INT64_SAFE = 1 << 62
_RESIDUAL_TOL = 1e-6

Kind = str  # 'int' | 'real' | 'complex'


@dataclass
class FunctionTable:
    """Dense table of a function on a group, indexed by element index."""

    group: GroupSpec
    values: list
    kind: Kind

    def __post_init__(self) -> None:
        if len(self.values) != self.group.order:
            raise GroupMismatchError(
                f"table has {len(self.values)} entries for order {self.group.order}"
            )
        if self.kind not in ("int", "real", "complex"):
            raise ValueError(f"bad kind {self.kind!r}")

    def __getitem__(self, i: int):
        return self.values[i]

    def l1(self):
        return sum(abs(v) for v in self.values)

    def l2_squared(self):
        if self.kind == "complex":
            return sum(abs(v) * abs(v) for v in self.values)
        return sum(v * v for v in self.values)

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v != 0]

    def as_complex_array(self) -> np.ndarray:
        return np.asarray([complex(v) for v in self.values], dtype=np.complex128)


def table_from_values(g: GroupSpec, values: Iterable, kind: Kind | None = None) -> FunctionTable:
    vals = list(values)
    if kind is None:
        if all(isinstance(v, (int, np.integer)) for v in vals):
            kind = "int"
            vals = [int(v) for v in vals]
        elif any(isinstance(v, complex) for v in vals):
            kind = "complex"
            vals = [complex(v) for v in vals]
        else:
            kind = "real"
            vals = [float(v) for v in vals]
    return FunctionTable(g, vals, kind)


def indicator(g: GroupSpec, indices: Iterable[int]) -> FunctionTable:
    vals = [0] * g.order
    for i in indices:
        vals[i] = 1
    return FunctionTable(g, vals, "int")


# -- Walsh-Hadamard (2-groups) -------------------------------------------------


def _wht_list(vals: list) -> list:
    """In-place style butterfly on a fresh list; exact over Python numbers."""
    out = list(vals)
    n = len(out)
    h = 1
    while h < n:
        for base in range(0, n, 2 * h):
            for j in range(base, base + h):
                x = out[j]
                y = out[j + h]
                out[j] = x + y
                out[j + h] = x - y
        h *= 2
    return out


def _wht_int64(arr: np.ndarray) -> np.ndarray:
    a = arr.astype(np.int64, copy=True)
    n = a.shape[0]
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bot = a[:, 0, :] - a[:, 1, :]
        a = np.stack((top, bot), axis=1).reshape(-1)
        h *= 2
    return a


def wht_int(g: GroupSpec, values: Sequence[int]) -> list[int]:
    """Exact integer Walsh-Hadamard transform (self-inverse up to N)."""
    if not g.is_boolean_space:
        raise GroupMismatchError("Walsh-Hadamard path needs a 2-group")
    l1 = sum(abs(int(v)) for v in values)
    if l1 < _INT64_SAFE:
        return _wht_int64(np.asarray(values, dtype=np.int64)).tolist()
    return _wht_list([int(v) for v in values])


# -- mixed-radix DFT -------------------------------------------------------------


def _axes_view(g: GroupSpec, arr: np.ndarray) -> np.ndarray:
    # Coordinate 0 is the least significant index digit, hence the last axis
    # of the C-order reshape.
    return arr.reshape(tuple(reversed(g.factors)))


def dft(f: FunctionTable) -> FunctionTable:
    """Transform of f, indexed by character frequency index."""
    g = f.group
    if g.is_boolean_space and f.kind == "int":
        return FunctionTable(g, wht_int(g, f.values), "int")
    if g.order > MAX_TRANSFORM_ORDER and not g.is_boolean_space:
        raise SizeLimitError(f"dense transform beyond order {MAX_TRANSFORM_ORDER}")
    if g.is_boolean_space:
        arr = f.as_complex_array()
        out = _wht_complex(arr)
        return FunctionTable(g, out.tolist(), "complex")
    arr = _axes_view(g, f.as_complex_array())
    out = np.fft.fftn(arr).reshape(-1)
    return FunctionTable(g, out.tolist(), "complex")


def idft(fhat: FunctionTable) -> FunctionTable:
    """Inverse transform; exact on integer Walsh-Hadamard data."""
    g = fhat.group
    n = g.order
    if g.is_boolean_space and fhat.kind == "int":
        back = wht_int(g, fhat.values)
        vals = []
        for v in back:
            q, r = divmod(v, n)
            if r:
                raise ValueError("table is not an integer transform on this group")
            vals.append(q)
        return FunctionTable(g, vals, "int")
    if g.is_boolean_space:
        arr = _wht_complex(fhat.as_complex_array()) / n
        return FunctionTable(g, arr.tolist(), "complex")
    arr = _axes_view(g, fhat.as_complex_array())
    out = np.fft.ifftn(arr).reshape(-1)
    return FunctionTable(g, out.tolist(), "complex")


def _wht_complex(arr: np.ndarray) -> np.ndarray:
    a = arr.astype(np.complex128, copy=True)
    h = 1
    n = a.shape[0]
    while h < n:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bot = a[:, 0, :] - a[:, 1, :]
        a = np.stack((top, bot), axis=1).reshape(-1)
        h *= 2
    return a.reshape(-1)


# -- convolution and correlation ---------------------------------------------


def convolve(f: FunctionTable, h: FunctionTable, method: str = "auto") -> FunctionTable:
    """(f*h)(x) = sum_y f(y) h(x-y)."""
    return _combine(f, h, flip=True, method=method)


def correlate(f: FunctionTable, h: FunctionTable, method: str = "auto") -> FunctionTable:
    """(f o h)(x) = sum_y f(y) h(y+x)."""
    return _combine(f, h, flip=False, method=method)


def iterated_correlation(f: FunctionTable, k: int, method: str = "auto") -> FunctionTable:
    """k-th correlation power: f itself at k=1, then (...(f o f) o f...) o f."""
    if k < 1:
        raise ValueError("need k >= 1")
    out = f
    for _ in range(k - 1):
        out = correlate(out, f, method=method)
    return out


def _combine(f: FunctionTable, h: FunctionTable, flip: bool, method: str) -> FunctionTable:
    if f.group != h.group:
        raise GroupMismatchError("convolution operands live on different groups")
    g = f.group
    if method == "auto":
        method = "direct" if g.order <= DIRECT_CONV_MAX_ORDER else "transform"
    if method == "direct":
        return _combine_direct(f, h, flip)
    if method == "transform":
        return _combine_transform(f, h, flip)
    raise ValueError(f"unknown method {method!r}")


def _combine_direct(f: FunctionTable, h: FunctionTable, flip: bool) -> FunctionTable:
    g = f.group
    n = g.order
    exact_int = f.kind == "int" and h.kind == "int"
    if exact_int:
        bound = f.l1() * max((abs(v) for v in h.values), default=0)
        if bound < _INT64_SAFE and n <= MAX_MEMBERSHIP_ORDER:
            idx = np.arange(n, dtype=np.int64)
            hv = np.asarray(h.values, dtype=np.int64)
            acc = np.zeros(n, dtype=np.int64)
            for y in f.support():
                # flip: h(x - y) as a function of x; else h(y + x)
                perm = sub_index_many(g, idx, y) if flip else add_index_many(g, idx, y)
                acc += f.values[y] * hv[perm]
            return FunctionTable(g, [int(v) for v in acc], "int")
        out = [0] * n
        for y in f.support():
            fy = f.values[y]
            for z, hz in enumerate(h.values):
                if hz:
                    x = g.add_index(y, z) if flip else g.sub_index(z, y)
                    out[x] += fy * hz
        return FunctionTable(g, out, "int")
    out_c = [0j] * n
    for y in f.support():
        fy = complex(f.values[y])
        for z, hz in enumerate(h.values):
            if hz:
                x = g.add_index(y, z) if flip else g.sub_index(z, y)
                out_c[x] += fy * complex(hz)
    kind = "complex" if (f.kind == "complex" or h.kind == "complex") else "real"
    if kind == "real":
        return FunctionTable(g, [v.real for v in out_c], "real")
    return FunctionTable(g, out_c, "complex")


def _combine_transform(f: FunctionTable, h: FunctionTable, flip: bool) -> FunctionTable:
    g = f.group
    exact_int = f.kind == "int" and h.kind == "int"
    if g.is_boolean_space and exact_int:
        fh = wht_int(g, f.values)
        hh = wht_int(g, h.values)
        prod = [a * b for a, b in zip(fh, hh)]
        return idft(FunctionTable(g, prod, "int"))
    fa = f.as_complex_array()
    if not flip:
        fa = np.conj(fa)
    fhat = dft(table_from_values(g, fa.tolist(), "complex")).as_complex_array()
    if not flip:
        fhat = np.conj(fhat)
    hhat = dft(h).as_complex_array()
    raw = idft(table_from_values(g, (fhat * hhat).tolist(), "complex")).as_complex_array()
    if exact_int:
        rounded = np.round(raw.real)
        resid = float(np.max(np.abs(raw - rounded))) if raw.size else 0.0
        scale = max(1.0, float(np.max(np.abs(rounded))) if raw.size else 0.0)
        if resid >= _RESIDUAL_TOL * scale:
            raise RuntimeError(
                f"transform-path rounding residual {resid:.3g} exceeds tolerance"
            )
        return FunctionTable(g, [int(v) for v in rounded], "int")
    if f.kind != "complex" and h.kind != "complex":
        return FunctionTable(g, raw.real.tolist(), "real")
    return FunctionTable(g, raw.tolist(), "complex")
