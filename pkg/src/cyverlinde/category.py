"""Finite (pre)modular category data.

A category is presented numerically: simple labels (index 0 is the unit),
the dual involution, fusion multiplicities ``N[i, j, k] = N_ij^k``,
categorical dimensions, twists and the unnormalized S-matrix ``s`` with
``s[0, j] = d_j``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "CategoryError",
    "CategoryData",
    "CheckResult",
    "ValidationReport",
    "validate",
    "global_dim",
    "transparent_objects",
    "product_category",
    "ribbon_s_matrix",
    "from_dict",
    "to_dict",
    "load_json",
    "load_builtin",
]


class CategoryError(ValueError):
    """Raised for malformed or inconsistent category data."""


@dataclass(frozen=True, eq=False)
class CategoryData:
    name: str
    labels: tuple[str, ...]
    dual: np.ndarray
    N: np.ndarray
    d: np.ndarray
    theta: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        for attr, dtype in (("dual", np.int64), ("N", np.int64), ("d", complex),
                            ("theta", complex), ("s", complex)):
            arr = np.array(getattr(self, attr), dtype=dtype)
            arr.setflags(write=False)
            object.__setattr__(self, attr, arr)

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def D(self) -> complex:
        """Global dimension, the sum of squared dimensions."""
        return complex(np.sum(self.d ** 2))

    @property
    def sbar(self) -> np.ndarray:
        """``sbar[i, j] = s[i*, j]``."""
        return self.s[self.dual, :]

    def index(self, label: int | str) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.rank:
                raise CategoryError(f"label index {label} out of range for {self.name}")
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise CategoryError(f"unknown label {label!r} in {self.name}") from None

    def is_multiplicity_free(self) -> bool:
        return bool(np.all(self.N <= 1))

    def fusion_channels(self, i: int, j: int) -> list[int]:
        return [int(k) for k in np.nonzero(self.N[i, j])[0]]

    def __repr__(self):
        return f"CategoryData({self.name!r}, labels={list(self.labels)})"


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_residual: float
    offending: list = field(default_factory=list)


@dataclass
class ValidationReport:
    checks: list[CheckResult]
    tol: float = DEFAULT_TOL
    fatal: bool = False

    @property
    def passed(self) -> bool:
        return not self.fatal and all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.max_residual for c in self.checks), default=0.0)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            line = f"{c.name:<28} {status}  max_residual={c.max_residual:.3g}"
            if c.offending:
                line += f"  offending={c.offending[:5]}"
            out.append(line)
        return out


def _check(name: str, residuals: dict, tol: float) -> CheckResult:
    """Build a check from a mapping index -> residual."""
    worst = max(residuals.values(), default=0.0)
    bad = [idx for idx, r in residuals.items() if r > tol]
    return CheckResult(name, not bad, float(worst), bad)


def _shape_problems(cat: CategoryData) -> list[str]:
    n = len(cat.labels)
    problems = []
    if n == 0:
        problems.append("no labels")
    expected = {"dual": (n,), "N": (n, n, n), "d": (n,), "theta": (n,), "s": (n, n)}
    for attr, shape in expected.items():
        if getattr(cat, attr).shape != shape:
            problems.append(f"{attr} has shape {getattr(cat, attr).shape}, expected {shape}")
    if cat.dual.shape == (n,) and n and (cat.dual.min() < 0 or cat.dual.max() >= n):
        problems.append("dual entries out of range")
    if cat.N.shape == (n, n, n) and np.any(cat.N < 0):
        problems.append("negative fusion multiplicity")
    return problems


def validate(cat: CategoryData, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Run every structural and numeric consistency check on ``cat``."""
    problems = _shape_problems(cat)
    if problems:
        return ValidationReport([CheckResult("shapes", False, math.inf, problems)], tol, fatal=True)

    n = cat.rank
    dual, N, d, theta, s = cat.dual, cat.N, cat.d, cat.theta, cat.s
    checks = [CheckResult("shapes", True, 0.0)]

    res = {i: float(dual[dual[i]] != i) for i in range(n)}
    res["unit"] = float(dual[0] != 0)
    checks.append(_check("dual_involution", res, 0.5))
    checks.append(_check("dual_dims", {i: abs(d[dual[i]] - d[i]) for i in range(n)}, tol))
    checks.append(_check("dual_twists", {i: abs(theta[dual[i]] - theta[i]) for i in range(n)}, tol))

    eye = np.eye(n, dtype=np.int64)
    res = {}
    for j in range(n):
        for k in range(n):
            res[("unit_left", j, k)] = float(abs(N[0, j, k] - eye[j, k]))
            res[("unit_right", j, k)] = float(abs(N[j, 0, k] - eye[j, k]))
    checks.append(_check("unit_fusion", res, 0.5))

    res = {}
    for i in range(n):
        for j in range(n):
            res[(i, j)] = float(abs(N[i, j, 0] - (j == dual[i])))
    checks.append(_check("dual_fusion", res, 0.5))

    res = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                res[(i, j, k)] = float(abs(N[i, j, k] - N[dual[j], dual[i], dual[k]]))
    checks.append(_check("fusion_duality", res, 0.5))

    res = {(i, j, k): float(abs(N[i, j, k] - N[j, i, k]))
           for i in range(n) for j in range(n) for k in range(n)}
    checks.append(_check("fusion_commutative", res, 0.5))

    # (i j) k versus i (j k), summed over the intermediate channel m
    left = np.einsum("ijm,mkl->ijkl", N, N)
    right = np.einsum("jkm,iml->ijkl", N, N)
    diff = np.abs(left - right)
    res = {idx: float(diff[idx]) for idx in zip(*np.nonzero(diff))}
    checks.append(_check("associativity", res or {(): 0.0}, 0.5))

    dd = np.einsum("ijk,k->ij", N, d)
    res = {(i, j): float(abs(d[i] * d[j] - dd[i, j])) for i in range(n) for j in range(n)}
    checks.append(_check("dimension_equation", res, tol))

    D = np.sum(d ** 2)
    checks.append(CheckResult("global_dimension", bool(abs(D) > tol), 0.0 if abs(D) > tol else math.inf,
                              [] if abs(D) > tol else ["D vanishes"]))

    checks.append(_check("s_symmetric", {(i, j): float(abs(s[i, j] - s[j, i]))
                                         for i in range(n) for j in range(n)}, tol))
    checks.append(_check("s_unit_row", {j: float(abs(s[0, j] - d[j])) for j in range(n)}, tol))

    expected = ribbon_s_matrix(N, d, theta, dual)
    checks.append(_check("ribbon_identity", {(i, j): float(abs(s[i, j] - expected[i, j]))
                                             for i in range(n) for j in range(n)}, tol))
    return ValidationReport(checks, tol)


def ribbon_s_matrix(N, d, theta, dual) -> np.ndarray:
    """``s_ij = theta_i^-1 theta_j^-1 sum_k N_{i* j}^k d_k theta_k``."""
    N = np.asarray(N)
    d = np.asarray(d, dtype=complex)
    theta = np.asarray(theta, dtype=complex)
    dual = np.asarray(dual)
    inner = np.einsum("ijk,k->ij", N[dual], d * theta)
    return inner / np.outer(theta, theta)


def global_dim(cat: CategoryData) -> complex:
    return cat.D


def transparent_objects(cat: CategoryData, tol: float = DEFAULT_TOL) -> list[int]:
    """Labels ``i`` with ``s_ij = d_i d_j`` for every ``j``."""
    target = np.outer(cat.d, cat.d)
    return [i for i in range(cat.rank) if np.all(np.abs(cat.s[i] - target[i]) <= tol)]


def product_category(a: CategoryData, b: CategoryData) -> CategoryData:
    """Deligne product; label ``(i, j)`` sits at index ``i * b.rank + j``."""
    nb = b.rank
    labels = [f"({x},{y})" for x in a.labels for y in b.labels]
    dual = [int(a.dual[i]) * nb + int(b.dual[j]) for i in range(a.rank) for j in range(nb)]
    N = np.einsum("ikm,jln->ijklmn", a.N, b.N).reshape(a.rank * nb, a.rank * nb, a.rank * nb)
    return CategoryData(
        name=f"{a.name}*{b.name}",
        labels=labels,
        dual=dual,
        N=N,
        d=np.kron(a.d, b.d),
        theta=np.kron(a.theta, b.theta),
        s=np.kron(a.s, b.s),
    )


def _pairs(values) -> list:
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


def _complex(entry) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    re, im = entry
    return complex(re, im)


def from_dict(doc: dict) -> CategoryData:
    """Build category data from the JSON document layout.

    Missing ``s`` is synthesized from the ribbon identity.
    """
    try:
        labels = list(doc["labels"])
        dual = list(doc["dual"])
        N = np.array(doc["N"], dtype=np.int64)
        d = [_complex(x) for x in doc["d"]]
        theta = [_complex(x) for x in doc["theta"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CategoryError(f"malformed category document: {exc}") from exc
    if "s" in doc and doc["s"] is not None:
        s = [[_complex(x) for x in row] for row in doc["s"]]
    else:
        if N.shape != (len(labels),) * 3 or len(dual) != len(labels):
            raise CategoryError("cannot synthesize s: inconsistent shapes")
        s = ribbon_s_matrix(N, d, theta, dual)
    return CategoryData(doc.get("name", "custom"), labels, dual, N, d, theta, s)


def to_dict(cat: CategoryData) -> dict:
    return {
        "name": cat.name,
        "labels": list(cat.labels),
        "dual": [int(x) for x in cat.dual],
        "N": cat.N.tolist(),
        "d": _pairs(cat.d),
        "theta": _pairs(cat.theta),
        "s": [_pairs(row) for row in cat.s],
    }


def load_json(path: str | Path, tol: float = DEFAULT_TOL) -> CategoryData:
    with open(path) as fh:
        cat = from_dict(json.load(fh))
    report = validate(cat, tol)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        raise CategoryError(f"{path}: category fails validation ({names})")
    return cat


def load_builtin(name: str, params: dict | Sequence[int] | None = None) -> CategoryData:
    """Instantiate a builtin category.

    ``name`` is one of trivial, fibonacci, ising, semion, rep_z2, cyclic, su2.
    ``cyclic`` takes ``n`` and ``q``; ``su2`` takes ``k``.  Parameters may also
    be given inline, e.g. ``"su2(3)"`` or ``"cyclic(3,1)"``.
    """
    from . import builtins

    return builtins.make(name, params)
