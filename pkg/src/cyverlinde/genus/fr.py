"""F and R symbols for multiplicity-free categories.

Conventions.  ``F(a, b, c, d, e, f)`` is the entry ``[F^{abc}_d]_{e f}`` in

    |(a b)_e c; d>  =  sum_f  [F^{abc}_d]_{e f} |a (b c)_f; d>

on splitting trees, and ``R(a, b, c)`` is the eigenvalue of the braiding
``c_{a,b}`` on the ``c`` channel, so that ``R^{ab}_c R^{ba}_c = theta_c /
(theta_a theta_b)``.  Entries with an inadmissible vertex are zero.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .. import builtins as _b
from ..category import DEFAULT_TOL, CategoryData, CategoryError, CheckResult, ValidationReport


class NotMultiplicityFree(ValueError):
    pass


class MissingFRData(LookupError):
    pass


def _require_mf(cat: CategoryData):
    if not cat.is_multiplicity_free():
        raise NotMultiplicityFree(f"{cat.name} has fusion multiplicities > 1")


@dataclass(eq=False)
class FRData:
    cat: CategoryData
    F_table: dict = field(default_factory=dict)
    R_table: dict = field(default_factory=dict)

    def __post_init__(self):
        _require_mf(self.cat)
        self._fmat: dict = {}

    def adm(self, a: int, b: int, c: int) -> bool:
        return bool(self.cat.N[a, b, c])

    def F(self, a, b, c, d, e, f) -> complex:
        if not (self.adm(a, b, e) and self.adm(e, c, d) and self.adm(b, c, f) and self.adm(a, f, d)):
            return 0j
        try:
            return self.F_table[(a, b, c, d, e, f)]
        except KeyError:
            raise MissingFRData(f"F{(a, b, c, d, e, f)} missing for {self.cat.name}") from None

    def R(self, a, b, c) -> complex:
        if not self.adm(a, b, c):
            return 0j
        try:
            return self.R_table[(a, b, c)]
        except KeyError:
            raise MissingFRData(f"R{(a, b, c)} missing for {self.cat.name}") from None

    def F_matrix(self, a, b, c, d):
        """``(es, fs, M, Minv)`` with ``M[x, y] = F(a, b, c, d, es[x], fs[y])``."""
        key = (a, b, c, d)
        hit = self._fmat.get(key)
        if hit is None:
            n = self.cat.rank
            es = [e for e in range(n) if self.adm(a, b, e) and self.adm(e, c, d)]
            fs = [f for f in range(n) if self.adm(b, c, f) and self.adm(a, f, d)]
            M = np.array([[self.F(a, b, c, d, e, f) for f in fs] for e in es], dtype=complex).reshape(len(es), len(fs))
            Minv = np.linalg.inv(M) if M.size and M.shape[0] == M.shape[1] else np.zeros((len(fs), len(es)))
            hit = (es, fs, M, Minv)
            self._fmat[key] = hit
        return hit

    def to_dict(self) -> dict:
        pair = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
        return {
            "F": [{"i": a, "j": b, "k": c, "l": d, "m": e, "n": f, "v": pair(v)}
                  for (a, b, c, d, e, f), v in sorted(self.F_table.items())],
            "R": [{"i": a, "j": b, "k": c, "v": pair(v)} for (a, b, c), v in sorted(self.R_table.items())],
        }


def _cval(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def fr_from_dict(cat: CategoryData, doc: dict) -> FRData:
    try:
        F = {(e["i"], e["j"], e["k"], e["l"], e["m"], e["n"]): _cval(e["v"]) for e in doc["F"]}
        R = {(e["i"], e["j"], e["k"]): _cval(e["v"]) for e in doc["R"]}
    except (KeyError, TypeError, IndexError) as exc:
        raise CategoryError(f"malformed F/R document: {exc}") from exc
    return FRData(cat, F, R)


def load_fr_json(cat: CategoryData, path: str | Path) -> FRData:
    with open(path) as fh:
        return fr_from_dict(cat, json.load(fh))


def _admissible_F_keys(cat: CategoryData):
    n = cat.rank
    N = cat.N
    for a, b, c in product(range(n), repeat=3):
        for e in range(n):
            if not N[a, b, e]:
                continue
            for d in range(n):
                if not N[e, c, d]:
                    continue
                for f in range(n):
                    if N[b, c, f] and N[a, f, d]:
                        yield (a, b, c, d, e, f)


def _admissible_R_keys(cat: CategoryData):
    n = cat.rank
    for a, b, c in product(range(n), repeat=3):
        if cat.N[a, b, c]:
            yield (a, b, c)


def _filled(cat, F_over=None, R_fn=None) -> FRData:
    F = {key: 1 + 0j for key in _admissible_F_keys(cat)}
    F.update(F_over or {})
    R = {key: complex(R_fn(*key)) if R_fn else 1 + 0j for key in _admissible_R_keys(cat)}
    return FRData(cat, F, R)


def fibonacci_fr(cat: CategoryData | None = None) -> FRData:
    cat = cat or _b.fibonacci()
    phi = _b.PHI
    t = 1
    F = {
        (t, t, t, t, 0, 0): 1 / phi,
        (t, t, t, t, 0, t): phi ** -0.5,
        (t, t, t, t, t, 0): phi ** -0.5,
        (t, t, t, t, t, t): -1 / phi,
    }
    R = {(t, t, 0): cmath.exp(-4j * math.pi / 5), (t, t, t): cmath.exp(3j * math.pi / 5)}
    return _filled(cat, F, lambda a, b, c: R.get((a, b, c), 1))


def ising_fr(cat: CategoryData | None = None) -> FRData:
    cat = cat or _b.ising()
    s, p = 1, 2
    r = 1 / math.sqrt(2)
    F = {
        (s, s, s, s, 0, 0): r, (s, s, s, s, 0, p): r,
        (s, s, s, s, p, 0): r, (s, s, s, s, p, p): -r,
        (p, s, p, s, s, s): -1, (s, p, s, p, s, s): -1,
    }
    R = {
        (s, s, 0): cmath.exp(-1j * math.pi / 8),
        (s, s, p): cmath.exp(3j * math.pi / 8),
        (s, p, s): -1j, (p, s, s): -1j,
        (p, p, 0): -1,
    }
    return _filled(cat, F, lambda a, b, c: R.get((a, b, c), 1))


def semion_fr(cat: CategoryData | None = None) -> FRData:
    cat = cat or _b.semion()
    return _filled(cat, {(1, 1, 1, 1, 0, 0): -1}, lambda a, b, c: 1j if (a, b) == (1, 1) else 1)


def trivial_fr(cat: CategoryData | None = None) -> FRData:
    return _filled(cat or _b.trivial())


def rep_z2_fr(cat: CategoryData | None = None) -> FRData:
    return _filled(cat or _b.rep_z2())


def cyclic_fr(n: int, q: int, cat: CategoryData | None = None) -> FRData:
    cat = cat or _b.cyclic(n, q)
    return _filled(cat, None, lambda a, b, c: cmath.exp(2j * math.pi * q * a * b / n))


class _QNumbers:
    def __init__(self, k: int):
        self.k = k

    def num(self, n: int) -> float:
        return math.sin(n * math.pi / (self.k + 2)) / math.sin(math.pi / (self.k + 2))

    def fac(self, n: int) -> float:
        out = 1.0
        for i in range(1, n + 1):
            out *= self.num(i)
        return out

    def delta(self, a: int, b: int, c: int) -> float:
        return math.sqrt(self.fac((-a + b + c) // 2) * self.fac((a - b + c) // 2) * self.fac((a + b - c) // 2)
                         / self.fac((a + b + c) // 2 + 1))

    def sixj(self, j1, j2, j12, j3, j, j23) -> float:
        """Racah-Wigner q-6j symbol ``{j1 j2 j12; j3 j j23}`` on doubled spins."""
        start = max(j1 + j2 + j12, j12 + j3 + j, j2 + j3 + j23, j1 + j23 + j) // 2
        stop = min(j1 + j2 + j3 + j, j1 + j12 + j3 + j23, j2 + j12 + j + j23) // 2
        total = 0.0
        for z in range(start, stop + 1):
            den = (self.fac(z - (j1 + j2 + j12) // 2) * self.fac(z - (j12 + j3 + j) // 2)
                   * self.fac(z - (j2 + j3 + j23) // 2) * self.fac(z - (j1 + j23 + j) // 2)
                   * self.fac((j1 + j2 + j3 + j) // 2 - z) * self.fac((j1 + j12 + j3 + j23) // 2 - z)
                   * self.fac((j2 + j12 + j + j23) // 2 - z))
            total += (-1) ** z * self.fac(z + 1) / den
        return total * (self.delta(j1, j2, j12) * self.delta(j12, j3, j)
                        * self.delta(j2, j3, j23) * self.delta(j1, j23, j))


def su2_fr(k: int, cat: CategoryData | None = None) -> FRData:
    cat = cat or _b.su2(k)
    qn = _QNumbers(k)
    q = cmath.exp(2j * math.pi / (k + 2))
    F = {}
    for a, b, c, d, e, f in _admissible_F_keys(cat):
        F[(a, b, c, d, e, f)] = ((-1) ** ((a + b + c + d) // 2) * math.sqrt(qn.num(e + 1) * qn.num(f + 1))
                                 * qn.sixj(a, b, e, c, d, f)) + 0j

    def R(a, b, c):
        return (-1) ** ((c - a - b) // 2) * q ** ((c * (c + 2) - a * (a + 2) - b * (b + 2)) / 8)

    out = _filled(cat, None, R)
    out.F_table.update(F)
    return out


def product_fr(x: FRData, y: FRData, cat: CategoryData) -> FRData:
    nb = y.cat.rank
    sp = lambda i: divmod(i, nb)  # noqa: E731
    F, R = {}, {}
    for key in _admissible_F_keys(cat):
        parts = list(zip(*(sp(i) for i in key)))
        F[key] = x.F(*parts[0]) * y.F(*parts[1])
    for key in _admissible_R_keys(cat):
        parts = list(zip(*(sp(i) for i in key)))
        R[key] = x.R(*parts[0]) * y.R(*parts[1])
    return FRData(cat, F, R)


_FR_FAMILIES = {
    "trivial": lambda cat: trivial_fr(cat),
    "fibonacci": lambda cat: fibonacci_fr(cat),
    "ising": lambda cat: ising_fr(cat),
    "semion": lambda cat: semion_fr(cat),
    "rep_z2": lambda cat: rep_z2_fr(cat),
}


def builtin_fr(cat: CategoryData) -> FRData:
    """Embedded F/R tables for a builtin category (matched by its name)."""
    parts = _b._split_product(cat.name)
    if len(parts) > 1:
        left = _b.make("*".join(parts[:-1]))
        right = _b.make(parts[-1])
        return product_fr(builtin_fr(left), builtin_fr(right), cat)
    m = _b._CALL.match(cat.name)
    if not m:
        raise MissingFRData(f"no F/R data for {cat.name!r}")
    family, inline = m.group(1), m.group(2)
    args = [int(v) for v in inline.split(",")] if inline else []
    _require_mf(cat)
    if family in _FR_FAMILIES and not args:
        return _FR_FAMILIES[family](cat)
    if family == "cyclic" and len(args) == 2:
        return cyclic_fr(args[0], args[1], cat)
    if family == "su2" and len(args) == 1:
        return su2_fr(args[0], cat)
    raise MissingFRData(f"no F/R data for {cat.name!r}")


def _check(name, residuals, tol) -> CheckResult:
    worst = max(residuals.values(), default=0.0)
    bad = [key for key, r in residuals.items() if r > tol]
    return CheckResult(name, not bad, float(worst), bad)


def validate_fr(fr: FRData, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Pentagon, both hexagons, R-twist consistency, twist and s recovery, unit normalization."""
    cat = fr.cat
    _require_mf(cat)
    n = cat.rank
    N = cat.N
    F, R = fr.F, fr.R
    chan = [[cat.fusion_channels(a, b) for b in range(n)] for a in range(n)]

    try:
        pent = {}
        for a, b, c, d in product(range(n), repeat=4):
            for f in chan[a][b]:
                for g in chan[f][c]:
                    for e in chan[g][d]:
                        for l in chan[c][d]:
                            if not N[f, l, e]:
                                continue
                            for k in chan[b][l]:
                                if not N[a, k, e]:
                                    continue
                                lhs = F(f, c, d, e, g, l) * F(a, b, l, e, f, k)
                                rhs = sum(F(a, b, c, g, f, h) * F(a, h, d, e, g, k) * F(b, c, d, k, h, l)
                                          for h in range(n))
                                pent[(a, b, c, d, e, f, g, k, l)] = abs(lhs - rhs)

        hex1, hex2 = {}, {}
        for a, b, c, d in product(range(n), repeat=4):
            for e in chan[a][c]:
                if not N[e, b, d]:
                    continue
                for g in chan[c][b]:
                    if not N[a, g, d]:
                        continue
                    lhs = R(c, a, e) * F(a, c, b, d, e, g) * R(c, b, g)
                    rhs = sum(F(c, a, b, d, e, f) * R(c, f, d) * F(a, b, c, d, f, g)
                              for f in chan[a][b] if N[c, f, d])
                    hex1[(a, b, c, d, e, g)] = abs(lhs - rhs)
                    lhs = F(a, c, b, d, e, g) / (R(a, c, e) * R(b, c, g))
                    rhs = sum(F(c, a, b, d, e, f) * F(a, b, c, d, f, g) / R(f, c, d)
                              for f in chan[a][b] if N[c, f, d])
                    hex2[(a, b, c, d, e, g)] = abs(lhs - rhs)

        twist = {}
        for a, b in product(range(n), repeat=2):
            for c in chan[a][b]:
                twist[(a, b, c)] = abs(R(a, b, c) * R(b, a, c) - cat.theta[c] / (cat.theta[a] * cat.theta[b]))

        theta = {}
        for a in range(n):
            val = sum(cat.d[c] * R(a, a, c) for c in chan[a][a]) / cat.d[a]
            theta[a] = abs(val - cat.theta[a])

        srec = {}
        for i, j in product(range(n), repeat=2):
            ii = int(cat.dual[i])
            val = sum(cat.d[k] * R(ii, j, k) * R(j, ii, k) for k in chan[ii][j])
            srec[(i, j)] = abs(val - cat.s[i, j])

        unit = {}
        for key, v in fr.F_table.items():
            if 0 in key[:3]:
                unit[("F",) + key] = abs(v - 1)
        for key, v in fr.R_table.items():
            if 0 in key[:2]:
                unit[("R",) + key] = abs(v - 1)
    except MissingFRData as exc:
        return ValidationReport([CheckResult("complete", False, math.inf, [str(exc)])], tol, fatal=True)

    checks = [
        CheckResult("complete", True, 0.0),
        _check("pentagon", pent or {(): 0.0}, tol),
        _check("hexagon", hex1 or {(): 0.0}, tol),
        _check("hexagon_inverse", hex2 or {(): 0.0}, tol),
        _check("r_twist", twist, tol),
        _check("theta_from_r", theta, tol),
        _check("s_from_r", srec, tol),
        _check("unit_normalization", unit or {(): 0.0}, tol),
    ]
    return ValidationReport(checks, tol)
