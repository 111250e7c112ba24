"""Polynomials in four variables with exact coefficient tables.

Coefficients live in a dict keyed by exponent 4-tuples and may be ints,
Fractions, floats or complex numbers.  Exact coefficient types survive
differentiation, so Laplacian identities can be checked with no floating
point slack; evaluation converts to float/complex arrays once and caches
them.
"""

from __future__ import annotations

import numpy as np


def exponents_of_degree(k):
    """All exponent 4-tuples (e1,e2,e3,e4) summing to k, in a fixed order."""
    out = []
    for e1 in range(k, -1, -1):
        for e2 in range(k - e1, -1, -1):
            for e3 in range(k - e1 - e2, -1, -1):
                out.append((e1, e2, e3, k - e1 - e2 - e3))
    return out


class Poly4:
    """Polynomial in x1..x4 stored as an exponent-tuple -> coefficient map."""

    __slots__ = ("coeffs", "_cache")

    def __init__(self, coeffs):
        clean = {}
        for expo, c in coeffs.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != 4 or min(expo) < 0:
                raise ValueError(f"bad exponent tuple {expo!r}")
            if c != 0:
                clean[expo] = clean.get(expo, 0) + c
        self.coeffs = {e: c for e, c in clean.items() if c != 0}
        self._cache = None

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def monomial(cls, expo, c=1):
        return cls({tuple(expo): c})

    @classmethod
    def linear(cls, coefs):
        """c1*x1 + c2*x2 + c3*x3 + c4*x4."""
        expos = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
        return cls({e: c for e, c in zip(expos, coefs)})

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        """Total degree; None for the zero polynomial."""
        if not self.coeffs:
            return None
        return max(sum(e) for e in self.coeffs)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.coeffs}
        return len(degs) <= 1

    def _arrays(self):
        if self._cache is None:
            if not self.coeffs:
                E = np.zeros((1, 4), dtype=int)
                C = np.zeros(1)
            else:
                E = np.array(sorted(self.coeffs), dtype=int)
                vals = [self.coeffs[tuple(e)] for e in E]
                if any(isinstance(v, complex) for v in vals):
                    C = np.array([complex(v) for v in vals])
                else:
                    C = np.array([float(v) for v in vals])
            self._cache = (E, C)
        return self._cache

    def __call__(self, x):
        """Evaluate at x of shape (..., 4); vectorized."""
        x = np.asarray(x)
        E, C = self._arrays()
        mono = np.prod(x[..., None, :] ** E, axis=-1)
        return mono @ C

    def partial(self, i):
        """d/dx_i as a new Poly4."""
        out = {}
        for expo, c in self.coeffs.items():
            if expo[i] == 0:
                continue
            down = list(expo)
            down[i] -= 1
            key = tuple(down)
            out[key] = out.get(key, 0) + c * expo[i]
        return Poly4(out)

    def gradient(self):
        return [self.partial(i) for i in range(4)]

    def laplacian(self):
        """Euclidean 4-variable Laplacian, computed on the coefficient table."""
        out = {}
        for expo, c in self.coeffs.items():
            for i in range(4):
                e = expo[i]
                if e < 2:
                    continue
                down = list(expo)
                down[i] -= 2
                key = tuple(down)
                out[key] = out.get(key, 0) + c * e * (e - 1)
        return Poly4(out)

    def __add__(self, other):
        if not isinstance(other, Poly4):
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return Poly4(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly4({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Poly4):
            out = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    key = tuple(a + b for a, b in zip(e1, e2))
                    out[key] = out.get(key, 0) + c1 * c2
            return Poly4(out)
        return Poly4({e: c * other for e, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Poly4) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if not self.coeffs:
            return "Poly4(0)"
        parts = []
        for expo in sorted(self.coeffs):
            c = self.coeffs[expo]
            mono = "*".join(f"x{i+1}^{e}" if e > 1 else f"x{i+1}"
                            for i, e in enumerate(expo) if e > 0)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return "Poly4(" + " + ".join(parts) + ")"
