"""Projection and test bases.

Projection bases span max-degree polynomial spaces; monomials are evaluated
on raw state values (no affine rescaling), with a Legendre alternative for
high-degree work on a known state box. Test bases are
orthonormal families on an interval: shifted Legendre polynomials and the
real Fourier basis.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np


def max_degree_multi_indices(max_degree, dimension):
    """All exponent vectors with every entry ``<= max_degree``.

    Order is graded lexicographic: by total degree first, then
    lexicographically descending, so for two variables and ``max_degree=1``
    the order is ``(0,0), (1,0), (0,1), (1,1)``.
    """
    if max_degree < 0 or dimension < 1:
        raise ValueError("need max_degree >= 0 and dimension >= 1")
    indices = itertools.product(range(max_degree + 1), repeat=dimension)
    return tuple(sorted(indices, key=lambda j: (sum(j), tuple(-e for e in j))))


@dataclass(frozen=True)
class ProjectionBasis:
    """Products of univariate polynomials over max-degree multi-indices.

    ``kind="monomial"`` (default) gives ``x^j = prod_l x_l^(j_l)`` on raw
    state values. ``kind="legendre"`` gives ``prod_l P_(j_l)(s_l)`` with
    ``s_l`` the state mapped affinely from ``domain_box`` onto [-1, 1]; it
    spans the same polynomial space but stays well conditioned at high
    degree.

    Parameters
    ----------
    max_degree : int
        Largest exponent allowed for any single variable.
    dimension : int
        Number of state variables.
    domain_box : sequence of (lo, hi) pairs, optional
        State domain, one pair per component. Required for ``"legendre"``.
    kind : {"monomial", "legendre"}
    """

    max_degree: int
    dimension: int = 1
    domain_box: tuple = None
    kind: str = "monomial"

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        if self.kind not in ("monomial", "legendre"):
            raise ValueError(f"unknown projection basis kind {self.kind!r}")
        if self.domain_box is not None:
            box = tuple((float(lo), float(hi)) for lo, hi in self.domain_box)
            if len(box) != self.dimension:
                raise ValueError("domain_box needs one (lo, hi) pair per state component")
            if any(hi <= lo for lo, hi in box):
                raise ValueError("domain_box intervals must have hi > lo")
            object.__setattr__(self, "domain_box", box)
        elif self.kind == "legendre":
            raise ValueError("a Legendre projection basis needs a domain_box")

    @cached_property
    def multi_indices(self):
        return max_degree_multi_indices(self.max_degree, self.dimension)

    @cached_property
    def _exponents(self):
        return np.array(self.multi_indices, dtype=int)

    @cached_property
    def _flat_lookup(self):
        return {j: i for i, j in enumerate(self.multi_indices)}

    @property
    def size(self):
        return (self.max_degree + 1) ** self.dimension

    def __len__(self):
        return self.size

    def flat_index(self, j):
        """Position of multi-index `j` in the enumeration."""
        j = tuple(int(e) for e in np.atleast_1d(j))
        try:
            return self._flat_lookup[j]
        except KeyError:
            raise IndexError(f"multi-index {j} not in max-degree-{self.max_degree} basis") from None

    def multi_index(self, flat):
        if not 0 <= flat < self.size:
            raise IndexError(f"flat index {flat} out of range for basis of size {self.size}")
        return self.multi_indices[flat]

    def _as_states(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x.reshape(1, 1)
        elif x.ndim == 1:
            x = x.reshape(-1, 1) if self.dimension == 1 else x.reshape(1, -1)
        if x.shape[1] != self.dimension:
            raise ValueError(f"states have {x.shape[1]} components, basis expects {self.dimension}")
        return x

    def _tables(self, x, derivative):
        """Univariate values (and derivatives), indexed ``[n, component, degree]``."""
        J = self.max_degree
        if self.kind == "monomial":
            powers = x[:, :, None] ** np.arange(J + 1)
            if not derivative:
                return powers, None
            exps = np.arange(J + 1)
            lower = np.concatenate([np.zeros(x.shape + (1,)), powers[:, :, :-1]], axis=2)
            return powers, exps * lower
        lo = np.array([b[0] for b in self.domain_box])
        hi = np.array([b[1] for b in self.domain_box])
        P, dP = _legendre_table(2.0 * (x - lo) / (hi - lo) - 1.0, J)
        return P, (dP * (2.0 / (hi - lo))[None, :, None] if derivative else None)

    def evaluate(self, x):
        """Design matrix ``Phi[n, m] = phi_m(x_n)`` of shape ``(n_samples, size)``."""
        x = self._as_states(x)
        vals, _ = self._tables(x, derivative=False)
        out = np.ones((x.shape[0], self.size))
        for ell in range(self.dimension):
            out *= vals[:, ell, self._exponents[:, ell]]
        return out

    def gradient(self, x):
        """Partial derivatives, shape ``(n_samples, size, dimension)``."""
        x = self._as_states(x)
        vals, ders = self._tables(x, derivative=True)
        exps = self._exponents
        grad = np.empty((x.shape[0], self.size, self.dimension))
        for d in range(self.dimension):
            term = np.ones((x.shape[0], self.size))
            for ell in range(self.dimension):
                table = ders if ell == d else vals
                term *= table[:, ell, exps[:, ell]]
            grad[:, :, d] = term
        return grad

    def __call__(self, j, x):
        """Evaluate the single basis function with multi-index `j` at state `x`."""
        j = np.atleast_1d(np.asarray(j, dtype=int))
        if j.shape != (self.dimension,) or np.any(j < 0) or np.any(j > self.max_degree):
            raise IndexError(f"multi-index {tuple(j)} out of range")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.kind == "monomial":
            return float(np.prod(x ** j))
        return float(self.evaluate(x.reshape(1, -1))[0, self.flat_index(j)])


def eval_projection(basis, j, x):
    """Value of the projection function with multi-index `j` at state `x`."""
    return basis(j, x)


def _legendre_table(s, degree):
    """Legendre values and derivatives on [-1, 1] by three-term recurrence."""
    s = np.asarray(s, dtype=float)
    P = np.empty(s.shape + (degree + 1,))
    dP = np.empty_like(P)
    P[..., 0] = 1.0
    dP[..., 0] = 0.0
    if degree >= 1:
        P[..., 1] = s
        dP[..., 1] = 1.0
    for k in range(1, degree):
        P[..., k + 1] = ((2 * k + 1) * s * P[..., k] - k * P[..., k - 1]) / (k + 1)
        # P'_{k+1} = P'_{k-1} + (2k+1) P_k
        dP[..., k + 1] = dP[..., k - 1] + (2 * k + 1) * P[..., k]
    return P, dP


@dataclass(frozen=True)
class TestBasis:
    """Orthonormal test functions on ``interval = (a, b)``.

    ``kind="legendre"`` gives ``K + 1`` shifted Legendre polynomials
    ``sqrt((2k+1)/(b-a)) P_k(2(t-a)/(b-a) - 1)``. ``kind="fourier"`` gives
    ``2K + 1`` functions ordered ``1, cos_1..cos_K, sin_1..sin_K`` with
    period ``b - a``, each scaled by ``1/sqrt(b-a)``.
    """

    __test__ = False  # keep pytest from collecting this class

    kind: str
    degree: int
    interval: tuple = (0.0, 1.0)

    def __post_init__(self):
        if self.kind not in ("legendre", "fourier"):
            raise ValueError(f"unknown test basis kind {self.kind!r}")
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        a, b = (float(v) for v in self.interval)
        if not b > a:
            raise ValueError("interval must satisfy b > a")
        object.__setattr__(self, "interval", (a, b))

    @property
    def size(self):
        return self.degree + 1 if self.kind == "legendre" else 2 * self.degree + 1

    def __len__(self):
        return self.size

    def _scaled(self, t):
        a, b = self.interval
        return (np.asarray(t, dtype=float) - a) / (b - a)

    def _table(self, t, derivative):
        a, b = self.interval
        length = b - a
        u = self._scaled(t)
        if self.kind == "legendre":
            P, dP = _legendre_table(2.0 * u - 1.0, self.degree)
            norms = np.sqrt((2 * np.arange(self.degree + 1) + 1) / length)
            return norms * (dP * (2.0 / length) if derivative else P)
        k = np.arange(1, self.degree + 1)
        arg = 2.0 * np.pi * u[..., None] * k
        scale = np.sqrt(2.0 / length)
        if derivative:
            omega = 2.0 * np.pi * k / length
            const = np.zeros(u.shape + (1,))
            cos_part = -scale * omega * np.sin(arg)
            sin_part = scale * omega * np.cos(arg)
        else:
            const = np.full(u.shape + (1,), 1.0 / np.sqrt(length))
            cos_part = scale * np.cos(arg)
            sin_part = scale * np.sin(arg)
        return np.concatenate([const, cos_part, sin_part], axis=-1)

    def evaluate(self, t):
        """Values ``psi_k(t)``; output shape ``t.shape + (size,)``."""
        return self._table(t, derivative=False)

    def derivative(self, t):
        """First derivatives ``psi_k'(t)``; output shape ``t.shape + (size,)``."""
        return self._table(t, derivative=True)

    def _check_index(self, k):
        if not 0 <= k < self.size:
            raise IndexError(f"test function index {k} out of range for basis of size {self.size}")


def eval_test(basis, k, t):
    basis._check_index(k)
    return float(basis.evaluate(np.asarray(float(t)))[k])


def eval_test_derivative(basis, k, t):
    basis._check_index(k)
    return float(basis.derivative(np.asarray(float(t)))[k])
