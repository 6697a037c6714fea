"""The Verlinde algebra of a (pre)modular category.

Elements are coefficient vectors over the simple classes ``x_i``.  Two
products live on the same space: fusion (``x_i x_j = sum_k N_ij^k x_k``) and
convolution (``x_i * x_j = delta_ij / d_i x_i``).  The S-matrix intertwines
them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .category import DEFAULT_TOL, CategoryData, transparent_objects

INTEGER_TOL = 1e-6
MAX_BRUTEFORCE_FACTORS = 512


class CategoryMismatch(ValueError):
    pass


class SingularS(ArithmeticError):
    """The S-matrix is not invertible (the input is not modular)."""


class ZeroSEntry(ArithmeticError):
    """Some ``S_0p`` vanishes, so the genus formula is undefined."""


class SizeGuardExceeded(ValueError):
    pass


class VerlindeElement:
    """Element of ``V = K(A) (x) C`` in the basis ``x_i``."""

    __slots__ = ("cat", "coeffs")

    def __init__(self, cat: CategoryData, coeffs):
        coeffs = np.array(coeffs, dtype=complex)
        if coeffs.shape != (cat.rank,):
            raise ValueError(f"expected {cat.rank} coefficients, got shape {coeffs.shape}")
        self.cat = cat
        self.coeffs = coeffs

    @classmethod
    def basis(cls, cat: CategoryData, i: int | str) -> "VerlindeElement":
        c = np.zeros(cat.rank, dtype=complex)
        c[cat.index(i)] = 1
        return cls(cat, c)

    @classmethod
    def zero(cls, cat: CategoryData) -> "VerlindeElement":
        return cls(cat, np.zeros(cat.rank, dtype=complex))

    def _same(self, other: "VerlindeElement"):
        if not isinstance(other, VerlindeElement):
            return NotImplemented
        if other.cat is not self.cat:
            raise CategoryMismatch(f"elements over {self.cat.name} and {other.cat.name}")
        return other

    def __add__(self, other):
        other = self._same(other)
        return VerlindeElement(self.cat, self.coeffs + other.coeffs)

    def __sub__(self, other):
        other = self._same(other)
        return VerlindeElement(self.cat, self.coeffs - other.coeffs)

    def __neg__(self):
        return VerlindeElement(self.cat, -self.coeffs)

    def __rmul__(self, scalar):
        return VerlindeElement(self.cat, scalar * self.coeffs)

    def __mul__(self, other):
        """Scalar multiple, or the fusion product of two elements."""
        if isinstance(other, VerlindeElement):
            return fusion_product(self, other)
        return VerlindeElement(self.cat, self.coeffs * other)

    def allclose(self, other: "VerlindeElement", tol: float = DEFAULT_TOL) -> bool:
        other = self._same(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= tol)

    def __repr__(self):
        terms = [f"({c:.6g})*{lab}" for c, lab in zip(self.coeffs, self.cat.labels) if abs(c) > 1e-12]
        return f"VerlindeElement[{self.cat.name}](" + (" + ".join(terms) or "0") + ")"


def _check_pair(x: VerlindeElement, y: VerlindeElement):
    if x.cat is not y.cat:
        raise CategoryMismatch(f"elements over {x.cat.name} and {y.cat.name}")


def fusion_matrix(cat: CategoryData) -> np.ndarray:
    """Matrix ``M[k, i*n + j] = N_ij^k`` of the fusion product ``V (x) V -> V``."""
    n = cat.rank
    return cat.N.transpose(2, 0, 1).reshape(n, n * n).astype(complex)


def convolution_matrix(cat: CategoryData) -> np.ndarray:
    n = cat.rank
    M = np.zeros((n, n * n), dtype=complex)
    for i in range(n):
        M[i, i * n + i] = 1 / cat.d[i]
    return M


def fusion_product(x: VerlindeElement, y: VerlindeElement) -> VerlindeElement:
    _check_pair(x, y)
    return VerlindeElement(x.cat, np.einsum("i,j,ijk->k", x.coeffs, y.coeffs, x.cat.N))


def convolution_product(x: VerlindeElement, y: VerlindeElement) -> VerlindeElement:
    _check_pair(x, y)
    return VerlindeElement(x.cat, x.coeffs * y.coeffs / x.cat.d)


def s_op(x: VerlindeElement) -> VerlindeElement:
    """``s(x_i) = sum_j s_ij x_j``."""
    return VerlindeElement(x.cat, x.cat.s.T @ x.coeffs)


def sbar_op(x: VerlindeElement) -> VerlindeElement:
    return VerlindeElement(x.cat, x.cat.sbar.T @ x.coeffs)


def charge_conjugate(x: VerlindeElement) -> VerlindeElement:
    out = np.zeros_like(x.coeffs)
    out[x.cat.dual] = x.coeffs
    return VerlindeElement(x.cat, out)


def omega_element(cat: CategoryData) -> VerlindeElement:
    """The regular coloring ``sum_i d_i x_i``."""
    return VerlindeElement(cat, cat.d.copy())


def phi_J(cat: CategoryData, tol: float = DEFAULT_TOL) -> VerlindeElement:
    """``sum_{i in J} d_i x_i`` over the transparent labels ``J``."""
    c = np.zeros(cat.rank, dtype=complex)
    for i in transparent_objects(cat, tol):
        c[i] = cat.d[i]
    return VerlindeElement(cat, c)


@dataclass
class FrobeniusStructure:
    """Product, unit, coproduct and counit as explicit matrices.

    ``product`` is ``n x n^2``, ``unit`` is ``n x 1``, ``coproduct`` is
    ``n^2 x n`` and ``counit`` is ``1 x n``; tensor index ``(i, j)`` is
    flattened as ``i * n + j``.
    """

    variant: int
    product: np.ndarray
    unit: np.ndarray
    coproduct: np.ndarray
    counit: np.ndarray
    cat: CategoryData = field(repr=False)

    def unit_element(self) -> VerlindeElement:
        return VerlindeElement(self.cat, self.unit[:, 0])

    def multiply(self, x: VerlindeElement, y: VerlindeElement) -> VerlindeElement:
        return VerlindeElement(self.cat, self.product @ np.kron(x.coeffs, y.coeffs))

    def comultiply(self, x: VerlindeElement) -> np.ndarray:
        """Image in ``V (x) V`` as an ``n x n`` coefficient array."""
        n = self.cat.rank
        return (self.coproduct @ x.coeffs).reshape(n, n)

    def counit_of(self, x: VerlindeElement) -> complex:
        return complex((self.counit @ x.coeffs)[0])


def frobenius_maps(cat: CategoryData, variant: int) -> FrobeniusStructure:
    """Frobenius structure 1 (convolution) or 2 (fusion) on ``V``."""
    n = cat.rank
    if variant == 1:
        unit = cat.d.reshape(n, 1).astype(complex)
        cop = np.zeros((n * n, n), dtype=complex)
        for i in range(n):
            cop[i * n + i, i] = 1 / cat.d[i]
        counit = cat.d.reshape(1, n).astype(complex)
        return FrobeniusStructure(1, convolution_matrix(cat), unit, cop, counit, cat)
    if variant == 2:
        unit = np.zeros((n, 1), dtype=complex)
        unit[0, 0] = 1
        # x_i -> sum_k (x_i x_k) (x) x_{k*}
        cop = np.zeros((n * n, n), dtype=complex)
        for i in range(n):
            for k in range(n):
                for a in range(n):
                    cop[a * n + cat.dual[k], i] += cat.N[i, k, a]
        counit = np.zeros((1, n), dtype=complex)
        counit[0, 0] = 1
        return FrobeniusStructure(2, fusion_matrix(cat), unit, cop, counit, cat)
    raise ValueError(f"Frobenius variant must be 1 or 2, got {variant!r}")


@dataclass
class IdentityReport:
    name: str
    passed: bool
    max_residual: float
    details: dict = field(default_factory=dict)


def _basis(cat):
    return [VerlindeElement.basis(cat, i) for i in range(cat.rank)]


def verify_verlinde(cat: CategoryData, tol: float = DEFAULT_TOL) -> IdentityReport:
    """``s(x y) = s(x) * s(y)`` and the same for ``sbar``, over all basis pairs."""
    worst = {"s": 0.0, "sbar": 0.0}
    basis = _basis(cat)
    for x, y in product(basis, repeat=2):
        xy = fusion_product(x, y)
        for key, op in (("s", s_op), ("sbar", sbar_op)):
            lhs = op(xy).coeffs
            rhs = convolution_product(op(x), op(y)).coeffs
            worst[key] = max(worst[key], float(np.max(np.abs(lhs - rhs))))
    res = max(worst.values())
    return IdentityReport("verlinde", res <= tol, res, worst)


def verify_reverse(cat: CategoryData, tol: float = DEFAULT_TOL) -> IdentityReport:
    """``s((D phi_J . x) * y) = s(x * (D phi_J . y)) = s(x) . s(y)``, and for ``sbar``."""
    xi = cat.D * phi_J(cat, tol)
    basis = _basis(cat)
    worst = {"s": 0.0, "sbar": 0.0}
    for x, y in product(basis, repeat=2):
        for key, op in (("s", s_op), ("sbar", sbar_op)):
            rhs = fusion_product(op(x), op(y)).coeffs
            left = op(convolution_product(fusion_product(xi, x), y)).coeffs
            right = op(convolution_product(x, fusion_product(xi, y))).coeffs
            worst[key] = max(worst[key], float(np.max(np.abs(left - rhs))),
                             float(np.max(np.abs(right - rhs))))
    res = max(worst.values())
    return IdentityReport("reverse", res <= tol, res,
                          {**worst, "J": transparent_objects(cat, tol)})


def fusion_from_s(cat: CategoryData, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``N_ij^k = sum_l s_jl s_il (s^-1)_lk / s_0l``, as a complex tensor."""
    s = cat.s
    n = cat.rank
    scale = max(1.0, float(np.max(np.abs(s))))
    if abs(np.linalg.det(s / scale)) <= tol or np.linalg.matrix_rank(s, tol=tol * scale * n) < n:
        raise SingularS(f"{cat.name}: S-matrix is singular")
    if np.any(np.abs(s[0]) <= tol):
        raise SingularS(f"{cat.name}: vanishing entry in the unit row of s")
    sinv = np.linalg.inv(s)
    return np.einsum("jl,il,lk,l->ijk", s, s, sinv, 1 / s[0])


def _normalized_S(cat: CategoryData) -> np.ndarray:
    D = cat.D
    if abs(D.imag) > DEFAULT_TOL or D.real <= 0:
        raise ValueError(f"{cat.name}: global dimension {D} is not a positive real")
    return cat.s / math.sqrt(D.real)


def genus_dim_formula(cat: CategoryData, g: int, insertions: Sequence[int | str] = (),
                      tol: float = DEFAULT_TOL) -> complex:
    """``sum_p prod_a (S_{i_a p} / S_0p) * S_0p^(2 - 2g)`` with ``S = s / sqrt(D)``."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    S = _normalized_S(cat)
    if np.any(np.abs(S[0]) <= tol):
        raise ZeroSEntry(f"{cat.name}: some S_0p vanishes")
    idx = [cat.index(i) for i in insertions]
    total = 0j
    for p in range(cat.rank):
        term = S[0, p] ** (2 - 2 * g)
        for i in idx:
            term *= S[i, p] / S[0, p]
        total += term
    return complex(total)


def genus_dim_bruteforce(cat: CategoryData, g: int, insertions: Sequence[int | str] = ()) -> int:
    """Coefficient of ``x_0`` in ``(sum_k x_k x_k*)^g x_i1 ... x_in``, in exact integers."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    if g + len(insertions) > MAX_BRUTEFORCE_FACTORS:
        raise SizeGuardExceeded(f"g + n = {g + len(insertions)} exceeds {MAX_BRUTEFORCE_FACTORS}")
    n = cat.rank
    N = [[[int(cat.N[i, j, k]) for k in range(n)] for j in range(n)] for i in range(n)]

    def mul(u: list[int], v: list[int]) -> list[int]:
        out = [0] * n
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                w = ui * vj
                for k, m in enumerate(N[i][j]):
                    if m:
                        out[k] += w * m
        return out

    handle = [0] * n
    for k in range(n):
        kd = int(cat.dual[k])
        for m in range(n):
            handle[m] += N[k][kd][m]

    vec = [1] + [0] * (n - 1)
    for _ in range(g):
        vec = mul(vec, handle)
    for i in insertions:
        e = [0] * n
        e[cat.index(i)] = 1
        vec = mul(vec, e)
    return vec[0]


def is_near_integer(z: complex, tol: float = INTEGER_TOL) -> bool:
    return abs(z.imag) <= tol and abs(z.real - round(z.real)) <= tol


def root_of_unity_phase(z: complex) -> float:
    return cmath.phase(z) / (2 * math.pi)
