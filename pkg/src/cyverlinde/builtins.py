"""Builtin category families.

Every family supplies labels, duals, fusion rules, dimensions and twists;
the S-matrix is always generated from the ribbon identity.
"""

from __future__ import annotations

import cmath
import math
import re
from typing import Callable

import numpy as np

from .category import CategoryData, CategoryError, product_category, ribbon_s_matrix

PHI = (1 + math.sqrt(5)) / 2


def _build(name, labels, dual, N, d, theta) -> CategoryData:
    s = ribbon_s_matrix(N, d, theta, dual)
    return CategoryData(name, labels, dual, N, d, theta, s)


def _group_fusion(n: int, mult: Callable[[int, int], int]) -> np.ndarray:
    N = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            N[a, b, mult(a, b)] = 1
    return N


def trivial() -> CategoryData:
    return _build("trivial", ["1"], [0], [[[1]]], [1.0], [1.0])


def fibonacci() -> CategoryData:
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = 1
    N[1, 1, 0] = N[1, 1, 1] = 1
    return _build("fibonacci", ["1", "tau"], [0, 1], N, [1.0, PHI],
                  [1.0, cmath.exp(4j * math.pi / 5)])


def ising() -> CategoryData:
    # 0 = 1, 1 = sigma, 2 = psi
    N = np.zeros((3, 3, 3), dtype=np.int64)
    for a in range(3):
        N[0, a, a] = N[a, 0, a] = 1
    N[1, 1, 0] = N[1, 1, 2] = 1
    N[1, 2, 1] = N[2, 1, 1] = 1
    N[2, 2, 0] = 1
    return _build("ising", ["1", "sigma", "psi"], [0, 1, 2], N, [1.0, math.sqrt(2), 1.0],
                  [1.0, cmath.exp(1j * math.pi / 8), -1.0])


def semion() -> CategoryData:
    N = _group_fusion(2, lambda a, b: (a + b) % 2)
    return _build("semion", ["1", "s"], [0, 1], N, [1.0, 1.0], [1.0, 1j])


def rep_z2() -> CategoryData:
    N = _group_fusion(2, lambda a, b: (a + b) % 2)
    return _build("rep_z2", ["1", "psi"], [0, 1], N, [1.0, 1.0], [1.0, 1.0])


def cyclic(n: int, q: int) -> CategoryData:
    """Pointed modular category on Z_n with twist ``exp(2 pi i q a^2 / n)``.

    Requires ``n`` odd and ``gcd(q, n) = 1``; other choices give degenerate
    braidings for this quadratic form.
    """
    if n < 1 or n % 2 == 0:
        raise CategoryError(f"cyclic: n must be a positive odd integer, got {n}")
    if math.gcd(q, n) != 1:
        raise CategoryError(f"cyclic: q={q} must be coprime to n={n}")
    N = _group_fusion(n, lambda a, b: (a + b) % n)
    dual = [(-a) % n for a in range(n)]
    theta = [cmath.exp(2j * math.pi * q * a * a / n) for a in range(n)]
    return _build(f"cyclic({n},{q})", [str(a) for a in range(n)], dual, N, [1.0] * n, theta)


def su2_fusion(k: int) -> np.ndarray:
    """Truncated Clebsch-Gordan rule on doubled spins ``0..k``."""
    N = np.zeros((k + 1, k + 1, k + 1), dtype=np.int64)
    for a in range(k + 1):
        for b in range(k + 1):
            for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2):
                N[a, b, c] = 1
    return N


def _spin_label(jj: int) -> str:
    return str(jj // 2) if jj % 2 == 0 else f"{jj}/2"


def su2(k: int) -> CategoryData:
    """SU(2) at level ``k``; label ``a`` is the doubled spin."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise CategoryError(f"su2: level k must be an integer >= 1, got {k!r}")
    k = int(k)
    N = su2_fusion(k)
    d = [math.sin((a + 1) * math.pi / (k + 2)) / math.sin(math.pi / (k + 2)) for a in range(k + 1)]
    theta = [cmath.exp(2j * math.pi * a * (a + 2) / (4 * (k + 2))) for a in range(k + 1)]
    return _build(f"su2({k})", [_spin_label(a) for a in range(k + 1)], list(range(k + 1)), N, d, theta)


_FAMILIES = {
    "trivial": (trivial, ()),
    "fibonacci": (fibonacci, ()),
    "ising": (ising, ()),
    "semion": (semion, ()),
    "rep_z2": (rep_z2, ()),
    "cyclic": (cyclic, ("n", "q")),
    "su2": (su2, ("k",)),
}

NAMES = tuple(_FAMILIES)

_CALL = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def _split_product(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            parts.append(text[start:pos])
            start = pos + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def make(name: str, params=None) -> CategoryData:
    """Resolve ``name`` (optionally with inline parameters or ``a*b`` products)."""
    parts = _split_product(name) if params is None else [name]
    if len(parts) > 1:
        cats = [make(p) for p in parts]
        out = cats[0]
        for c in cats[1:]:
            out = product_category(out, c)
        return out

    m = _CALL.match(name)
    if not m:
        raise CategoryError(f"cannot parse category name {name!r}")
    family, inline = m.group(1), m.group(2)
    if family not in _FAMILIES:
        raise CategoryError(f"unknown builtin category {family!r}; choose from {', '.join(NAMES)}")
    ctor, argnames = _FAMILIES[family]

    if inline is not None and params is not None:
        raise CategoryError("give parameters either inline or via params, not both")
    if inline is not None:
        values = [v.strip() for v in inline.split(",") if v.strip()]
        try:
            args = [int(v) for v in values]
        except ValueError:
            raise CategoryError(f"{family}: parameters must be integers, got {inline!r}") from None
    elif isinstance(params, dict):
        unknown = set(params) - set(argnames)
        if unknown:
            raise CategoryError(f"{family}: unknown parameters {sorted(unknown)}")
        try:
            args = [int(params[a]) for a in argnames]
        except KeyError as exc:
            raise CategoryError(f"{family}: missing parameter {exc.args[0]!r}") from None
    else:
        args = [int(v) for v in (params or ())]

    if len(args) != len(argnames):
        raise CategoryError(f"{family} expects parameters {argnames}, got {args}")
    return ctor(*args)
