"""Fusion-tree spaces and the elementary maps between them.

For a label sequence ``L = (l_0, ..., l_{n-1})`` the space ``H(L)`` has one
basis vector per left-combed splitting tree ``m_0 = l_0``, ``m_q`` in
``m_{q-1} (x) l_q``; the root is ``m_{n-1}`` (``0`` for the empty sequence).
Vertices are normalized so that fusing a split vertex gives exactly the
identity, which makes ``sum_c split_c fuse_c`` the identity on ``a (x) b``.
Every map here is a dense matrix ``H(L_in) -> H(L_out)``.
"""

from __future__ import annotations

import cmath
from functools import lru_cache
from typing import Sequence

import numpy as np

from .fr import FRData

Labels = tuple


class FusionSpace:
    """Tree bases and elementary maps for one F/R presentation."""

    def __init__(self, fr: FRData):
        self.fr = fr
        self.cat = fr.cat
        self.n = fr.cat.rank
        self._chan = [[fr.cat.fusion_channels(a, b) for b in range(self.n)] for a in range(self.n)]
        self.trees = lru_cache(maxsize=None)(self._trees)
        self._index_cache: dict = {}

    # -- bases -------------------------------------------------------------
    def _trees(self, L: Labels) -> tuple:
        if not L:
            return ((),)
        out = [(L[0],)]
        for lab in L[1:]:
            out = [t + (m,) for t in out for m in self._chan[t[-1]][lab]]
        return tuple(out)

    def index(self, L: Labels) -> dict:
        idx = self._index_cache.get(L)
        if idx is None:
            idx = {t: i for i, t in enumerate(self.trees(L))}
            self._index_cache[L] = idx
        return idx

    def dim(self, L: Labels) -> int:
        return len(self.trees(L))

    @staticmethod
    def root(tree: tuple) -> int:
        return tree[-1] if tree else 0

    def roots(self, L: Labels) -> np.ndarray:
        return np.array([self.root(t) for t in self.trees(L)], dtype=np.int64)

    def identity(self, L: Labels) -> np.ndarray:
        return np.eye(self.dim(L), dtype=complex)

    # -- vertices ------------------------------------------------------------
    def fuse(self, L: Labels, p: int, c: int) -> np.ndarray:
        """Fuse strands ``p, p+1`` into channel ``c``."""
        a, b = L[p], L[p + 1]
        Lout = L[:p] + (c,) + L[p + 2:]
        M = np.zeros((self.dim(Lout), self.dim(L)), dtype=complex)
        if not self.cat.N[a, b, c]:
            return M
        out_idx = self.index(Lout)
        for j, t in enumerate(self.trees(L)):
            x = t[p - 1] if p else 0
            e, y = t[p], t[p + 1]
            coeff = self.fr.F(x, a, b, y, e, c)
            if coeff:
                M[out_idx[t[:p] + t[p + 1:]], j] += coeff
        return M

    def split(self, L: Labels, p: int, a: int, b: int) -> np.ndarray:
        """Split strand ``p`` (label ``c``) into ``a, b``; right inverse of :meth:`fuse`."""
        c = L[p]
        Lout = L[:p] + (a, b) + L[p + 1:]
        M = np.zeros((self.dim(Lout), self.dim(L)), dtype=complex)
        if not self.cat.N[a, b, c]:
            return M
        out_idx = self.index(Lout)
        for j, t in enumerate(self.trees(L)):
            x = t[p - 1] if p else 0
            y = t[p]
            es, fs, _, Minv = self.fr.F_matrix(x, a, b, y)
            col = fs.index(c)
            for r, e in enumerate(es):
                coeff = Minv[col, r]
                if coeff:
                    M[out_idx[t[:p] + (e, y) + t[p + 1:]], j] += coeff
        return M

    def braid(self, L: Labels, p: int, over: bool = True) -> np.ndarray:
        """Exchange strands ``p, p+1``: ``c_{a,b}`` if ``over`` else ``c_{b,a}^{-1}``."""
        a, b = L[p], L[p + 1]
        Lout = L[:p] + (b, a) + L[p + 2:]
        M = np.zeros((self.dim(Lout), self.dim(L)), dtype=complex)
        for c in self._chan[a][b]:
            r = self.fr.R(a, b, c) if over else 1 / self.fr.R(b, a, c)
            mid = L[:p] + (c,) + L[p + 2:]
            M += r * (self.split(mid, p, b, a) @ self.fuse(L, p, c))
        return M

    def insert_unit(self, L: Labels, p: int) -> np.ndarray:
        Lout = L[:p] + (0,) + L[p:]
        M = np.zeros((self.dim(Lout), self.dim(L)), dtype=complex)
        out_idx = self.index(Lout)
        for j, t in enumerate(self.trees(L)):
            x = t[p - 1] if p else 0
            M[out_idx[t[:p] + (x,) + t[p:]], j] = 1
        return M

    def remove_unit(self, L: Labels, p: int) -> np.ndarray:
        if L[p] != 0:
            raise ValueError(f"position {p} of {L} is not the unit")
        return self.insert_unit(L[:p] + L[p + 1:], p).T.copy()

    def cup(self, L: Labels, p: int, a: int) -> np.ndarray:
        """Create the pair ``(a, a*)`` at position ``p``."""
        ad = int(self.cat.dual[a])
        mid = L[:p] + (0,) + L[p:]
        return cmath.sqrt(self.cat.d[a]) * (self.split(mid, p, a, ad) @ self.insert_unit(L, p))

    def cap(self, L: Labels, p: int) -> np.ndarray:
        """Annihilate the pair ``(a, a*)`` at positions ``p, p+1``."""
        a, ad = L[p], L[p + 1]
        if ad != self.cat.dual[a]:
            raise ValueError(f"cannot cap {a} with {ad}")
        mid = L[:p] + (0,) + L[p + 2:]
        return cmath.sqrt(self.cat.d[a]) * (self.remove_unit(mid, p) @ self.fuse(L, p, 0))

    # -- block operations ----------------------------------------------------
    def fuse_block(self, L: Labels, p: int, tree: tuple) -> np.ndarray:
        """Fuse the window ``L[p : p + len(tree)]`` along the left-combed ``tree``."""
        M = self.identity(L)
        cur = L
        for t in tree[1:]:
            M = self.fuse(cur, p, t) @ M
            cur = cur[:p] + (t,) + cur[p + 2:]
        return M

    def split_block(self, L: Labels, p: int, window: Labels, tree: tuple) -> np.ndarray:
        """Inverse of :meth:`fuse_block`: expand the root at ``p`` into ``window``."""
        M = self.identity(L)
        cur = L
        for q in range(len(window) - 1, 0, -1):
            M = self.split(cur, p, tree[q - 1], window[q]) @ M
            cur = cur[:p] + (tree[q - 1], window[q]) + cur[p + 1:]
        return M

    def apply_window(self, L: Labels, p: int, win_in: Labels, op: np.ndarray, win_out: Labels) -> np.ndarray:
        """Act with ``op: H(win_in) -> H(win_out)`` on the window starting at ``p``."""
        w = len(win_in)
        if tuple(L[p:p + w]) != tuple(win_in):
            raise ValueError(f"window {win_in} does not match {L[p:p + w]}")
        Lout = L[:p] + tuple(win_out) + L[p + w:]
        M = np.zeros((self.dim(Lout), self.dim(L)), dtype=complex)
        t_in, t_out = self.trees(tuple(win_in)), self.trees(tuple(win_out))
        fused = {}
        for j, T in enumerate(t_in):
            nz = np.nonzero(op[:, j])[0]
            if not len(nz):
                continue
            root = self.root(T)
            mid = L[:p] + (root,) + L[p + w:]
            Fm = fused.get(T)
            if Fm is None:
                Fm = fused[T] = self.fuse_block(L, p, T)
            for i in nz:
                Tp = t_out[i]
                if self.root(Tp) != root:
                    continue
                M += op[i, j] * (self.split_block(mid, p, tuple(win_out), Tp) @ Fm)
        return M

    def matrix_unit(self, L_out: Labels, t_out: tuple, L_in: Labels, t_in: tuple) -> np.ndarray:
        M = np.zeros((self.dim(L_out), self.dim(L_in)), dtype=complex)
        M[self.index(L_out)[t_out], self.index(L_in)[t_in]] = 1
        return M


def labels_of(cat, seq: Sequence) -> Labels:
    return tuple(cat.index(s) for s in seq)
