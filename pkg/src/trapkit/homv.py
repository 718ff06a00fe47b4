"""Dense-tensor backend: linear maps between tensor powers of a fixed V.

An element of arity (k, l) is stored as a (k+l)-axis array over a
``dim``-dimensional space, input axes first; ``data[a1..ak, b1..bl]`` is
the coefficient of ``e_b1 x .. x e_bl`` in the image of
``e_a1 x .. x e_ak``.  Arity (0, 0) elements are scalars, with horizontal
concatenation acting as multiplication.
"""

from __future__ import annotations

import random

import numpy as np

from .perm import Perm, inverse


class DenseTensor:
    __slots__ = ("k", "l", "dim", "data")

    def __init__(self, k: int, l: int, dim: int, data):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        arr = np.asarray(data)
        if arr.shape != (dim,) * (k + l):
            arr = arr.reshape((dim,) * (k + l))
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        self.k, self.l, self.dim = k, l, dim
        self.data = arr

    @property
    def arity(self) -> tuple[int, int]:
        return (self.k, self.l)

    def decoration_key(self) -> tuple:
        return ("tensor", self.k, self.l, self.dim, self.data.tobytes())

    def __repr__(self) -> str:
        if self.k == self.l == 0:
            return f"DenseTensor(scalar {complex(self.data) if np.iscomplexobj(self.data) else float(self.data):g})"
        return f"DenseTensor(k={self.k}, l={self.l}, dim={self.dim})"

    def to_jsonable(self) -> dict:
        if np.iscomplexobj(self.data):
            data = [[float(z.real), float(z.imag)] for z in self.data.ravel()]
        else:
            data = [float(x) for x in self.data.ravel()]
        return {"k": self.k, "l": self.l, "dim": self.dim, "data": data}

    @classmethod
    def from_jsonable(cls, obj: dict) -> "DenseTensor":
        raw = obj["data"]
        if raw and isinstance(raw[0], list):
            data = np.array([complex(a, b) for a, b in raw])
        else:
            data = np.array([float(x) for x in raw])
        return cls(obj["k"], obj["l"], obj["dim"], data)


def scalar(value, dim: int) -> DenseTensor:
    return DenseTensor(0, 0, dim, np.asarray(value))


def theta(functionals, vectors, dim: int) -> DenseTensor:
    """Rank-one tensor: the product of functional/vector coefficients."""
    data = np.ones(())
    for f in functionals:
        f = np.asarray(f)
        if f.shape != (dim,):
            raise ValueError("functional has wrong length")
        data = np.multiply.outer(data, f)
    for v in vectors:
        v = np.asarray(v)
        if v.shape != (dim,):
            raise ValueError("vector has wrong length")
        data = np.multiply.outer(data, v)
    return DenseTensor(len(functionals), len(vectors), dim, data)


def identity_tensor(dim: int) -> DenseTensor:
    return DenseTensor(1, 1, dim, np.eye(dim))


def act(sigma: Perm, t: DenseTensor, tau: Perm) -> DenseTensor:
    """Axis permutation: new input axis m reads old axis tau(m), new output
    axis m reads old axis sigma^-1(m)."""
    if len(sigma) != t.l or len(tau) != t.k:
        raise ValueError(f"degree mismatch for arity {t.arity}")
    sigma_inv = inverse(sigma)
    axes = [tau[m] - 1 for m in range(t.k)] + [
        t.k + sigma_inv[m] - 1 for m in range(t.l)
    ]
    return DenseTensor(t.k, t.l, t.dim, np.transpose(t.data, axes))


def hconcat(t: DenseTensor, u: DenseTensor) -> DenseTensor:
    """Tensor product of maps; axis order (t.in, u.in, t.out, u.out)."""
    if t.dim != u.dim:
        raise ValueError("dimension mismatch")
    prod = np.multiply.outer(t.data, u.data)
    # outer gives (t.in, t.out, u.in, u.out); move u's inputs forward
    src = list(range(t.k + t.l, t.k + t.l + u.k))
    dst = list(range(t.k, t.k + u.k))
    prod = np.moveaxis(prod, src, dst)
    return DenseTensor(t.k + u.k, t.l + u.l, t.dim, prod)


def partial_trace(t: DenseTensor, i: int, j: int) -> DenseTensor:
    if not (1 <= i <= t.k and 1 <= j <= t.l):
        raise ValueError(f"trace indices ({i},{j}) out of range for arity {t.arity}")
    data = np.trace(t.data, axis1=i - 1, axis2=t.k + j - 1)
    return DenseTensor(t.k - 1, t.l - 1, t.dim, data)


class HomTrap:
    """Backend over a fixed dimension; unitary with the identity matrix."""

    name = "homv"

    def __init__(self, dim: int, tolerance: float = 1e-10, complex_field: bool = False,
                 max_arity: int = 3):
        self.dim = dim
        self.tolerance = tolerance
        self.complex_field = complex_field
        self.max_arity = max_arity

    def arity(self, p: DenseTensor) -> tuple[int, int]:
        return p.arity

    def act(self, sigma, p, tau):
        return act(sigma, p, tau)

    def hconcat(self, p, q):
        return hconcat(p, q)

    def partial_trace(self, p, i, j):
        return partial_trace(p, i, j)

    def unit0(self) -> DenseTensor:
        return scalar(1.0, self.dim)

    def unit1(self) -> DenseTensor:
        return identity_tensor(self.dim)

    def eq(self, p: DenseTensor, q: DenseTensor) -> bool:
        if p.arity != q.arity or p.dim != q.dim:
            return False
        scale = max(1.0, np.abs(p.data).max(initial=0.0),
                    np.abs(q.data).max(initial=0.0))
        return bool(np.abs(p.data - q.data).max(initial=0.0) <= self.tolerance * scale)

    def random_element(self, rng: random.Random, k: int | None = None,
                       l: int | None = None) -> DenseTensor:
        if k is None:
            k = rng.randint(0, self.max_arity)
        if l is None:
            l = rng.randint(0, self.max_arity)
        npr = np.random.default_rng(rng.getrandbits(32))
        data = npr.standard_normal((self.dim,) * (k + l))
        if self.complex_field:
            data = data + 1j * npr.standard_normal((self.dim,) * (k + l))
        return DenseTensor(k, l, self.dim, data)

    def extent(self) -> int:
        """Size of one contracted index (for contraction-cost models)."""
        return self.dim
