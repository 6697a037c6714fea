"""Evaluate cobordism words to matrices over the ``x_i`` basis."""

from __future__ import annotations

import csv
import io
import json
import weakref
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from ..category import DEFAULT_TOL, CategoryData, transparent_objects
from ..verlinde import convolution_matrix, fusion_matrix, genus_dim_bruteforce, genus_dim_formula
from .syntax import ARITY, ArityError, Compose, Expr, Gen, Tensor, as_expr, typecheck

_TABLES: "weakref.WeakKeyDictionary[CategoryData, dict]" = weakref.WeakKeyDictionary()


def generator_matrices(cat: CategoryData) -> dict[str, np.ndarray]:
    """Matrices of every generator, built once per category and kept read-only."""
    table = _TABLES.get(cat)
    if table is not None:
        return table
    n = cat.rank
    d = cat.d
    eye = np.eye(n, dtype=complex)

    coY1 = np.zeros((n * n, n), dtype=complex)
    for i in range(n):
        coY1[i * n + i, i] = 1 / d[i]
    coY2 = np.zeros((n * n, n), dtype=complex)
    for i in range(n):
        for k in range(n):
            for a in range(n):
                coY2[a * n + cat.dual[k], i] += cat.N[i, k, a]

    phi = np.zeros(n, dtype=complex)
    for j in transparent_objects(cat):
        phi[j] = d[j]
    K = cat.D * np.einsum("j,jik->ki", phi, cat.N)

    P = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            P[j * n + i, i * n + j] = 1

    e0 = np.zeros(n, dtype=complex)
    e0[0] = 1
    table = {
        "Y1": convolution_matrix(cat),
        "Y2": fusion_matrix(cat),
        "coY1": coY1,
        "coY2": coY2,
        "i1": d.reshape(n, 1).astype(complex),
        "i2": e0.reshape(n, 1),
        "ci1": d.reshape(1, n).astype(complex),
        "ci2": e0.reshape(1, n),
        "Psi": cat.s.T.astype(complex),
        "PsiBar": cat.sbar.T.astype(complex),
        "K": K,
        "Id": eye,
        "P": P,
    }
    for m in table.values():
        m.setflags(write=False)
    _TABLES[cat] = table
    return table


@dataclass
class EvaluatedMap:
    cat: CategoryData
    matrix: np.ndarray
    signature: tuple[int, int]

    def apply(self, labels) -> np.ndarray:
        """Image of ``x_{l_1} (x) ... (x) x_{l_m}`` as a flat coefficient vector."""
        labels = list(labels)
        if len(labels) != self.signature[0]:
            raise ArityError(f"map takes {self.signature[0]} inputs, got {len(labels)}")
        n = self.cat.rank
        col = 0
        for lab in labels:
            col = col * n + self.cat.index(lab)
        return self.matrix[:, col]


def _eval(expr: Expr, table: dict) -> np.ndarray:
    if isinstance(expr, Gen):
        return table[expr.name]
    left = _eval(expr.left, table)
    right = _eval(expr.right, table)
    if isinstance(expr, Tensor):
        return np.kron(left, right)
    return left @ right


def evaluate(expr: Expr | str, cat: CategoryData) -> EvaluatedMap:
    expr = as_expr(expr)
    sig = typecheck(expr)
    return EvaluatedMap(cat, np.array(_eval(expr, generator_matrices(cat))), sig)


@dataclass
class EqualityReport:
    lhs: str
    rhs: str
    passed: bool
    max_residual: float
    scale: complex = 1.0


def check_equal(lhs: Expr | str, rhs: Expr | str, cat: CategoryData, tol: float = DEFAULT_TOL,
                scale: complex = 1.0) -> EqualityReport:
    """Compare ``lhs`` with ``scale * rhs`` entrywise."""
    a, b = as_expr(lhs), as_expr(rhs)
    sa, sb = typecheck(a), typecheck(b)
    if sa != sb:
        raise ArityError(f"signatures differ: {sa} vs {sb}")
    ma = evaluate(a, cat).matrix
    mb = scale * evaluate(b, cat).matrix
    res = float(np.max(np.abs(ma - mb), initial=0.0))
    return EqualityReport(str(a), str(b), res <= tol, res, scale)


def _chain(*parts: str) -> str:
    return " . ".join(p for p in parts if p)


def _tree(gen: str, n: int) -> str:
    """Left-combed product of ``n`` inputs with the binary generator ``gen``."""
    layers = []
    for width in range(2, n + 1):
        layers.append(gen if width == 2 else "(" + " # ".join([gen] + ["Id"] * (width - 2)) + ")")
    return _chain(*layers)


def genus_word(g: int, n: int, side: str) -> Expr:
    """Word ``X^{sqcup n} -> empty`` computing genus ``g`` with ``n`` insertions.

    ``fusion``:  ``ci2 . (Y2 . coY2)^g . <Y2 tree>``.
    ``formula``: ``ci1 . (Y1 . (K # Id) . coY1)^g . <Y1 tree> . (Psi # ... # Psi)``.
    """
    if not isinstance(g, int) or g < 0:
        raise ValueError(f"g must be a non-negative integer, got {g!r}")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if side == "fusion":
        text = _chain("ci2", *["Y2 . coY2"] * g, _tree("Y2", n))
    elif side == "formula":
        psis = "Psi" if n == 1 else "(" + " # ".join(["Psi"] * n) + ")"
        text = _chain("ci1", *["Y1 . (K # Id) . coY1"] * g, _tree("Y1", n), psis)
    else:
        raise ValueError(f"side must be 'formula' or 'fusion', got {side!r}")
    return as_expr(text)


@dataclass
class GenusWordReport:
    g: int
    insertions: tuple
    formula_value: complex
    fusion_value: complex
    D_power: int
    D: complex
    bruteforce: int
    closed_form: complex
    passed: bool
    max_residual: float


def genus_word_report(cat: CategoryData, g: int, insertions, tol: float = 1e-6) -> GenusWordReport:
    """Evaluate both words on ``x_{i_1} (x) ... (x) x_{i_n}``.

    The formula side carries one extra factor of ``D`` (the 2-handle
    separating ``ci1 . Psi`` from ``ci2``), so ``formula = D * fusion``.
    """
    insertions = tuple(insertions)
    f = evaluate(genus_word(g, len(insertions), "formula"), cat).apply(insertions)[0]
    u = evaluate(genus_word(g, len(insertions), "fusion"), cat).apply(insertions)[0]
    brute = genus_dim_bruteforce(cat, g, insertions)
    closed = genus_dim_formula(cat, g, insertions)
    res = max(abs(f - cat.D * u), abs(u - brute), abs(f / cat.D - closed))
    return GenusWordReport(g, insertions, complex(f), complex(u), 1, cat.D, brute, closed,
                           bool(res <= tol), float(res))


def _frobenius_relations(v: int) -> list[tuple[str, str, str]]:
    m, c, u, e = f"Y{v}", f"coY{v}", f"i{v}", f"ci{v}"
    return [
        (f"frob{v}_associative", f"{m} . ({m} # Id)", f"{m} . (Id # {m})"),
        (f"frob{v}_coassociative", f"({c} # Id) . {c}", f"(Id # {c}) . {c}"),
        (f"frob{v}_frobenius_left", f"{c} . {m}", f"({m} # Id) . (Id # {c})"),
        (f"frob{v}_frobenius_right", f"{c} . {m}", f"(Id # {m}) . ({c} # Id)"),
    ]


def _unit_laws(v: int) -> list[tuple[str, str, str]]:
    m, c, u, e = f"Y{v}", f"coY{v}", f"i{v}", f"ci{v}"
    return [
        (f"unit{v}_left", f"{m} . ({u} # Id)", "Id"),
        (f"unit{v}_right", f"{m} . (Id # {u})", "Id"),
        (f"counit{v}_left", f"({e} # Id) . {c}", "Id"),
        (f"counit{v}_right", f"(Id # {e}) . {c}", "Id"),
    ]


# (name, lhs, rhs); each entry is one displayed equality
EXCHANGE_IDENTITIES: list[tuple[str, str, str]] = [
    ("Y1_PsiBar", "Y1 . (PsiBar # PsiBar)", "PsiBar . Y2"),
    ("Y1_Psi", "Y1 . (Psi # Psi)", "Psi . Y2 . P"),
    ("Y2_Psi_K_left", "Y2 . (Psi # Psi)", "Psi . Y1 . (K # Id)"),
    ("Y2_Psi_K_right", "Y2 . (Psi # Psi)", "Psi . Y1 . (Id # K)"),
    ("Y2_PsiBar_K_left", "Y2 . (PsiBar # PsiBar) . P", "PsiBar . Y1 . (K # Id)"),
    ("Y2_PsiBar_K_right", "Y2 . (PsiBar # PsiBar) . P", "PsiBar . Y1 . (Id # K)"),
    ("coY1_Psi", "(Psi # Psi) . coY1", "coY2 . Psi"),
    ("coY1_PsiBar", "(PsiBar # PsiBar) . coY1", "P . coY2 . PsiBar"),
    ("coY2_PsiBar_K_left", "(PsiBar # PsiBar) . coY2", "(K # Id) . coY1 . PsiBar"),
    ("coY2_PsiBar_K_right", "(PsiBar # PsiBar) . coY2", "(Id # K) . coY1 . PsiBar"),
    ("coY2_Psi_K_left", "P . (Psi # Psi) . coY2", "(K # Id) . coY1 . Psi"),
    ("coY2_Psi_K_right", "P . (Psi # Psi) . coY2", "(Id # K) . coY1 . Psi"),
]

FROBENIUS_IDENTITIES = _frobenius_relations(1) + _frobenius_relations(2)
UNIT_IDENTITIES = _unit_laws(1) + _unit_laws(2)


@dataclass
class SuiteReport:
    results: list[tuple[str, EqualityReport]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for _, r in self.results)

    @property
    def max_residual(self) -> float:
        return max((r.max_residual for _, r in self.results), default=0.0)


def proposition_suite(cat: CategoryData, tol: float = DEFAULT_TOL) -> SuiteReport:
    """Every exchange, Frobenius and unit identity, plus ``ci1 . Psi = D ci2``."""
    out = SuiteReport()
    for name, lhs, rhs in EXCHANGE_IDENTITIES + FROBENIUS_IDENTITIES + UNIT_IDENTITIES:
        out.results.append((name, check_equal(lhs, rhs, cat, tol)))
    out.results.append(("counit_discrepancy", check_equal("ci1 . Psi", "ci2", cat, tol, scale=cat.D)))
    return out


def matrix_to_json(m: EvaluatedMap | np.ndarray) -> str:
    mat = m.matrix if isinstance(m, EvaluatedMap) else np.asarray(m)
    doc = {
        "shape": list(mat.shape),
        "data": [[[float(z.real), float(z.imag)] for z in row] for row in mat],
    }
    return json.dumps(doc)


def matrix_from_json(text: str) -> np.ndarray:
    doc = json.loads(text)
    rows = [[complex(re, im) for re, im in row] for row in doc["data"]]
    mat = np.array(rows, dtype=complex).reshape(doc["shape"])
    return mat


def matrix_to_csv(m: EvaluatedMap | np.ndarray) -> str:
    mat = m.matrix if isinstance(m, EvaluatedMap) else np.asarray(m)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row", "col", "re", "im"])
    for (r, c), z in np.ndenumerate(mat):
        w.writerow([r, c, repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = list(csv.DictReader(io.StringIO(text)))
    nr = max((int(r["row"]) for r in rows), default=-1) + 1
    nc = max((int(r["col"]) for r in rows), default=-1) + 1
    mat = np.zeros((nr, nc), dtype=complex)
    for r in rows:
        mat[int(r["row"]), int(r["col"])] = complex(float(r["re"]), float(r["im"]))
    return mat


def compose_all(*maps: np.ndarray) -> np.ndarray:
    return reduce(np.matmul, maps)


__all__ = [
    "ARITY",
    "EvaluatedMap",
    "EqualityReport",
    "GenusWordReport",
    "SuiteReport",
    "check_equal",
    "evaluate",
    "generator_matrices",
    "genus_word",
    "genus_word_report",
    "matrix_from_csv",
    "matrix_from_json",
    "matrix_to_csv",
    "matrix_to_json",
    "proposition_suite",
]
