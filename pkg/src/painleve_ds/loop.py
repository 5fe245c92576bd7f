"""Loop-algebra realization of the rank-n affine Lie algebra of type A.

Elements are Laurent polynomials in z with (n+1)x(n+1) matrix coefficients,
plus a central coordinate ``c_k`` and a scaling coordinate ``c_d``.  The
bracket is

    [z^k X, z^l Y] = z^(k+l) (XY - YX) + k delta(k+l, 0) tr(XY) K

extended by the scaling element acting as z d/dz.  Matrix coefficients are
stored sparsely and the scalar type is generic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import is_zero_scalar

Matrix = dict  # {(row, col): scalar}, zero entries absent


def _mat_add(a: Matrix, b: Matrix) -> Matrix:
    out = dict(a)
    for key, v in b.items():
        s = out[key] + v if key in out else v
        if is_zero_scalar(s):
            out.pop(key, None)
        else:
            out[key] = s
    return out


def _mat_scale(a: Matrix, c) -> Matrix:
    if is_zero_scalar(c):
        return {}
    out = {}
    for key, v in a.items():
        s = c * v
        if not is_zero_scalar(s):
            out[key] = s
    return out


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows_of_b: dict = {}
    for (i, j), v in b.items():
        rows_of_b.setdefault(i, []).append((j, v))
    out: dict = {}
    for (i, k), u in a.items():
        for j, v in rows_of_b.get(k, ()):
            key = (i, j)
            s = out[key] + u * v if key in out else u * v
            if is_zero_scalar(s):
                out.pop(key, None)
            else:
                out[key] = s
    return out


def _mat_trace_mul(a: Matrix, b: Matrix):
    """tr(a @ b), without forming the product."""
    total = 0
    for (i, j), u in a.items():
        v = b.get((j, i))
        if v is not None:
            total = total + u * v
    return total


def _mat_trace(a: Matrix):
    total = 0
    for (i, j), v in a.items():
        if i == j:
            total = total + v
    return total


class LoopElement:
    """z-graded matrix element with central and scaling coordinates."""

    __slots__ = ("rank", "parts", "c_k", "c_d")

    def __init__(self, rank: int, parts: dict | None = None, c_k=0, c_d=0):
        self.rank = rank
        self.parts = {}
        if parts:
            for deg, mat in parts.items():
                cleaned = {k: v for k, v in mat.items() if not is_zero_scalar(v)}
                if cleaned:
                    self.parts[deg] = cleaned
        self.c_k = c_k
        self.c_d = c_d

    @property
    def size(self) -> int:
        return self.rank + 1

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.parts))

    def entry(self, deg: int, i: int, j: int):
        return self.parts.get(deg, {}).get((i, j), 0)

    def matrix_entries(self):
        for deg, mat in self.parts.items():
            for (i, j), v in mat.items():
                yield deg, i, j, v

    def is_zero(self) -> bool:
        return not self.parts and is_zero_scalar(self.c_k) and is_zero_scalar(self.c_d)

    def matrix_is_zero(self) -> bool:
        return not self.parts

    def trace(self, deg: int):
        return _mat_trace(self.parts.get(deg, {}))

    def _check_same(self, other: "LoopElement"):
        if self.rank != other.rank:
            raise ValueError("mixed ranks")

    def __add__(self, other: "LoopElement") -> "LoopElement":
        self._check_same(other)
        parts = dict(self.parts)
        for deg, mat in other.parts.items():
            parts[deg] = _mat_add(parts.get(deg, {}), mat)
        return LoopElement(self.rank, parts, self.c_k + other.c_k, self.c_d + other.c_d)

    def __neg__(self) -> "LoopElement":
        return self.scale(-1)

    def __sub__(self, other: "LoopElement") -> "LoopElement":
        return self + (-other)

    def scale(self, c) -> "LoopElement":
        return LoopElement(
            self.rank,
            {deg: _mat_scale(mat, c) for deg, mat in self.parts.items()},
            c * self.c_k,
            c * self.c_d,
        )

    def z_shift(self, shift: int) -> "LoopElement":
        return LoopElement(
            self.rank, {deg + shift: mat for deg, mat in self.parts.items()}, self.c_k, self.c_d
        )

    def z_derivative(self) -> "LoopElement":
        """z d/dz on the matrix part; kills K and d."""
        return LoopElement(
            self.rank, {deg: _mat_scale(mat, deg) for deg, mat in self.parts.items()}
        )

    def mat_mul(self, other: "LoopElement") -> "LoopElement":
        """Associative matrix product (valid for evaluation-representation work)."""
        self._check_same(other)
        if not (is_zero_scalar(self.c_d) and is_zero_scalar(other.c_d)):
            raise ValueError("matrix product undefined with scaling coordinate")
        parts: dict = {}
        for d1, m1 in self.parts.items():
            for d2, m2 in other.parts.items():
                prod = _mat_mul(m1, m2)
                if prod:
                    parts[d1 + d2] = _mat_add(parts.get(d1 + d2, {}), prod)
        return LoopElement(self.rank, parts)

    def power(self, k: int) -> "LoopElement":
        result = identity(self.rank)
        for _ in range(k):
            result = result.mat_mul(self)
        return result

    def __eq__(self, other):
        if not isinstance(other, LoopElement):
            return NotImplemented
        if self.rank != other.rank:
            return False
        diff = self - other
        return diff.is_zero()

    __hash__ = None

    def map_scalars(self, fn) -> "LoopElement":
        parts = {
            deg: {key: fn(v) for key, v in mat.items()} for deg, mat in self.parts.items()
        }
        return LoopElement(self.rank, parts, fn(self.c_k), fn(self.c_d))

    def render(self) -> str:
        """Plain-text dump, one z-degree block per line."""
        if self.matrix_is_zero() and is_zero_scalar(self.c_k) and is_zero_scalar(self.c_d):
            return "0"
        lines = []
        n = self.size
        for deg in self.support():
            mat = self.parts[deg]
            rows = [[str(mat.get((i, j), 0)) for j in range(n)] for i in range(n)]
            widths = [max(len(rows[i][j]) for i in range(n)) for j in range(n)]
            body = "; ".join(
                "[" + ", ".join(rows[i][j].rjust(widths[j]) for j in range(n)) + "]"
                for i in range(n)
            )
            lines.append(f"z^{deg}: {body}")
        if not is_zero_scalar(self.c_k):
            lines.append(f"K: {self.c_k}")
        if not is_zero_scalar(self.c_d):
            lines.append(f"d: {self.c_d}")
        return "\n".join(lines)

    def __repr__(self):
        return f"LoopElement(rank={self.rank}, degrees={list(self.support())})"


def zero(rank: int) -> LoopElement:
    return LoopElement(rank)

def identity(rank: int) -> LoopElement:
    return LoopElement(rank, {0: {(i, i): Fraction(1) for i in range(rank + 1)}})


def single_entry(rank: int, deg: int, i: int, j: int, value=Fraction(1)) -> LoopElement:
    return LoopElement(rank, {deg: {(i, j): value}})


def diagonal(rank: int, values) -> LoopElement:
    return LoopElement(rank, {0: {(i, i): v for i, v in enumerate(values)}})


def scaling_element(rank: int) -> LoopElement:
    return LoopElement(rank, c_d=Fraction(1))


def central_element(rank: int) -> LoopElement:
    return LoopElement(rank, c_k=Fraction(1))


def chevalley(rank: int, i: int, kind: str) -> LoopElement:
    """Chevalley generator: kind 'e', 'f', or 'h' (the coroot), index 0..rank."""
    n = rank
    if not 0 <= i <= n:
        raise ValueError(f"index {i} out of range for rank {n}")
    if kind == "e":
        if i == 0:
            return single_entry(n, 1, n, 0)
        return single_entry(n, 0, i - 1, i)
    if kind == "f":
        if i == 0:
            return single_entry(n, -1, 0, n)
        return single_entry(n, 0, i, i - 1)
    if kind == "h":
        if i == 0:
            out = LoopElement(n, {0: {(n, n): Fraction(1), (0, 0): Fraction(-1)}})
            out.c_k = Fraction(1)
            return out
        return LoopElement(n, {0: {(i - 1, i - 1): Fraction(1), (i, i): Fraction(-1)}})
    raise ValueError(f"unknown generator kind {kind!r}")


def bracket(a: LoopElement, b: LoopElement) -> LoopElement:
    """Lie bracket with central term and scaling-element action."""
    a._check_same(b)
    parts: dict = {}
    c_k = 0
    for d1, m1 in a.parts.items():
        for d2, m2 in b.parts.items():
            comm = _mat_add(_mat_mul(m1, m2), _mat_scale(_mat_mul(m2, m1), -1))
            if comm:
                parts[d1 + d2] = _mat_add(parts.get(d1 + d2, {}), comm)
            if d1 + d2 == 0 and d1 != 0:
                c_k = c_k + d1 * _mat_trace_mul(m1, m2)
    out = LoopElement(a.rank, parts, c_k)
    if not is_zero_scalar(a.c_d):
        out = out + b.z_derivative().scale(a.c_d)
    if not is_zero_scalar(b.c_d):
        out = out - a.z_derivative().scale(b.c_d)
    return out


def invariant_form(a: LoopElement, b: LoopElement):
    """Standard invariant symmetric form: trace pairing plus K-d coupling."""
    a._check_same(b)
    total = 0
    for deg, mat in a.parts.items():
        other = b.parts.get(-deg)
        if other:
            total = total + _mat_trace_mul(mat, other)
    return total + a.c_k * b.c_d + a.c_d * b.c_k


def ad_word(rank: int, indices, kind: str = "e") -> LoopElement:
    """Nested bracket of generators: indices (i1,..,im) give
    ad g_{i1} ... ad g_{i_{m-1}} (g_{im})."""
    indices = list(indices)
    if not indices:
        raise ValueError("empty generator word")
    out = chevalley(rank, indices[-1], kind)
    for i in reversed(indices[:-1]):
        out = bracket(chevalley(rank, i, kind), out)
    return out


@dataclass
class GradationSpec:
    """Gradation data: the derivation acts as scale * (z d/dz + ad eta)."""

    rank: int
    scale: int
    eta: LoopElement

    def apply(self, x: LoopElement) -> LoopElement:
        return apply_theta(self, x)


def apply_theta(spec: GradationSpec, x: LoopElement) -> LoopElement:
    """Gradation derivation: scale * (z dx/dz + [eta, x])."""
    return (x.z_derivative() + bracket(spec.eta, x)).scale(Fraction(spec.scale))


def theta_eigenvalue(spec: GradationSpec, x: LoopElement):
    """Degree of a homogeneous element; raises if x is not an eigenvector."""
    if x.matrix_is_zero():
        raise ValueError("zero element has no degree")
    image = apply_theta(spec, x)
    deg, i, j, v = next(x.matrix_entries())
    lam = image.entry(deg, i, j) / v
    if image != x.scale(lam):
        raise ValueError("element is not theta-homogeneous")
    return lam
