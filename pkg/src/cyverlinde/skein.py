"""Scalar skein identities on a single strand or a ring of strands."""

from __future__ import annotations

from typing import Sequence

from .category import CategoryData
from .verlinde import VerlindeElement, omega_element

OVER = "over"
UNDER = "under"


def encircle(cat: CategoryData, loop: int | str, strand: int | str, orientation: str = OVER) -> complex:
    """Scalar by which an ``loop``-colored meridian acts on a ``strand``-colored line.

    ``over`` gives ``s_ij / d_j``; ``under`` gives ``sbar_ij / d_j``.
    """
    i, j = cat.index(loop), cat.index(strand)
    if orientation == OVER:
        return complex(cat.s[i, j] / cat.d[j])
    if orientation == UNDER:
        return complex(cat.sbar[i, j] / cat.d[j])
    raise ValueError(f"orientation must be {OVER!r} or {UNDER!r}, got {orientation!r}")


def omega_vector(cat: CategoryData) -> VerlindeElement:
    return omega_element(cat)


def killing_ring(cat: CategoryData, j: int | str) -> complex:
    """An Omega loop around a ``j`` strand, divided by ``D``: 1 on transparent labels, 0 otherwise."""
    jj = cat.index(j)
    return complex(sum(cat.d[i] * cat.s[i, jj] for i in range(cat.rank)) / cat.d[jj] / cat.D)


def hom_dim(cat: CategoryData, k: int | str, objects: Sequence[int | str]) -> int:
    """Multiplicity of ``X_k`` in ``X_{o_1} (x) ... (x) X_{o_n}``, in exact integers."""
    if not objects:
        raise ValueError("objects must be non-empty")
    n = cat.rank
    N = cat.N.tolist()
    vec = [0] * n
    vec[cat.index(objects[0])] = 1
    for o in objects[1:]:
        b = cat.index(o)
        out = [0] * n
        for a, c in enumerate(vec):
            if c:
                for m in range(n):
                    if N[a][b][m]:
                        out[m] += c * N[a][b][m]
        vec = out
    return vec[cat.index(k)]
