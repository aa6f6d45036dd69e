"""The model spaces S^n and H^n and their finite-difference oracles.

Both spaces are realised as quadrics in R^{n+1}:

    S^n = { x : <x, x> = 1 }            (Euclidean inner product)
    H^n = { x : <x, x> = -1, x_{n+1} > 0 }   (Lorentzian, upper sheet)

The covariant derivative of the induced metric is the Gauss formula
nabla_X Y = D_X Y + eps <X, Y> x, with x the unit normal.  On top of the
exact geodesics this module provides central-difference approximations of
nabla_X sigma and of the rough Laplacian -tr nabla^2 sigma for an arbitrary
tangent vector field sigma, used as an independent oracle against the
closed-form field analyses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .ambient import EUCLIDEAN, LORENTZIAN, Signature, as_vector

POINT_TOL = 1e-10
H_MAX_GEODESIC = 20.0  # cosh overflow guard on H^n
DEFAULT_H_FIRST = 1e-4
DEFAULT_H_SECOND = 1e-3


def _field_fn(field):
    """Accept either a callable x -> sigma(x) or an object with .sigma()."""
    return field if callable(field) else field.sigma


@dataclass(frozen=True)
class SpaceForm:
    """The space form of dimension n with indicator sig.epsilon."""

    n: int
    sig: Signature

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")

    @property
    def eps(self) -> int:
        return self.sig.epsilon

    @property
    def ambient_dim(self) -> int:
        return self.n + 1

    def inner(self, x, y) -> float:
        return self.sig.inner(x, y)

    def norm(self, v) -> float:
        """Length of a tangent vector (tangent spaces are spacelike)."""
        s = self.sig.norm_sq(v)
        return float(np.sqrt(max(s, 0.0)))

    # -- points and tangents ---------------------------------------------

    def base_point(self) -> np.ndarray:
        """(0, ..., 0, 1): north pole of S^n, vertex of H^n."""
        x = np.zeros(self.ambient_dim)
        x[-1] = 1.0
        return x

    def is_point(self, x, tol: float = POINT_TOL) -> bool:
        # tolerance is relative to the coordinate scale: far out on H^n the
        # constraint is a cancellation of terms of size |x|^2
        x = as_vector(x)
        if x.shape != (self.ambient_dim,):
            return False
        if abs(self.sig.norm_sq(x) - self.eps) > tol * (1.0 + float(x @ x)):
            return False
        return self.eps == 1 or x[-1] > 0

    def check_point(self, x, tol: float = POINT_TOL) -> np.ndarray:
        x = as_vector(x)
        if not self.is_point(x, tol):
            raise ValueError(f"{x} is not a point of this space form")
        return x

    def check_tangent(self, x, v, tol: float = POINT_TOL) -> np.ndarray:
        v = as_vector(v)
        if abs(self.inner(v, x)) > tol * (1.0 + self.norm(v)):
            raise ValueError("vector is not tangent at the given point")
        return v

    def tangent_project(self, x, u) -> np.ndarray:
        """Orthogonal projection u - eps <u, x> x onto T_x M; idempotent."""
        u = as_vector(u)
        return u - self.eps * self.inner(u, x) * x

    def normalize_point(self, x) -> np.ndarray:
        """Rescale onto the quadric (suppresses floating-point drift)."""
        x = as_vector(x)
        s = self.eps * self.sig.norm_sq(x)
        if s <= 0:
            raise ValueError("cannot normalize: wrong causal type")
        return x / np.sqrt(s)

    # -- geodesics ----------------------------------------------------------

    def geodesic(self, x, X, t: float) -> np.ndarray:
        """Unit-speed geodesic from x with initial velocity X at parameter t."""
        x = as_vector(x)
        X = as_vector(X)
        if abs(self.norm(X) - 1.0) > POINT_TOL:
            raise ValueError("geodesic direction must be a unit tangent vector")
        if self.eps == 1:
            p = np.cos(t) * x + np.sin(t) * X
        else:
            if abs(t) > H_MAX_GEODESIC:
                raise ValueError(f"|t| > {H_MAX_GEODESIC} on H^n (cosh overflow guard)")
            p = np.cosh(t) * x + np.sinh(t) * X
        return self.normalize_point(p)

    # -- frames -----------------------------------------------------------

    def frame(self, x) -> list[np.ndarray]:
        """Deterministic orthonormal tangent frame at x (Gram-Schmidt on e_i)."""
        x = as_vector(x)
        out: list[np.ndarray] = []
        for i in range(self.ambient_dim):
            v = np.zeros(self.ambient_dim)
            v[i] = 1.0
            v = self.tangent_project(x, v)
            for e in out:
                v = v - self.inner(v, e) * e
            s = self.sig.norm_sq(v)
            if s > 1e-12:
                out.append(v / np.sqrt(s))
            if len(out) == self.n:
                break
        return out

    def random_frame(self, x, rng: np.random.Generator) -> list[np.ndarray]:
        """Random orthonormal tangent frame at x."""
        out: list[np.ndarray] = []
        while len(out) < self.n:
            v = self.tangent_project(x, rng.standard_normal(self.ambient_dim))
            for e in out:
                v = v - self.inner(v, e) * e
            s = self.sig.norm_sq(v)
            if s > 1e-8:
                out.append(v / np.sqrt(s))
        return out

    def random_tangent(self, x, rng: np.random.Generator, unit: bool = True) -> np.ndarray:
        v = self.tangent_project(x, rng.standard_normal(self.ambient_dim))
        if unit:
            v = v / self.norm(v)
        return v

    # -- sampling ----------------------------------------------------------

    def sample_points(self, count: int, seed: int) -> list[np.ndarray]:
        """Deterministic sample of points; Gaussian on S^n, geodesic shots on H^n.

        Hyperbolic points are geodesic(base, random unit tangent, t) with t
        uniform on [0, 3], keeping cosh well conditioned while exercising
        the unbounded growth of the fields.
        """
        if count < 1:
            raise ValueError("count must be >= 1")
        rng = np.random.default_rng(seed)
        pts = []
        if self.eps == 1:
            while len(pts) < count:
                g = rng.standard_normal(self.ambient_dim)
                s = g @ g
                if s > 1e-12:
                    pts.append(g / np.sqrt(s))
        else:
            base = self.base_point()
            while len(pts) < count:
                u = self.random_tangent(base, rng)
                t = rng.uniform(0.0, 3.0)
                pts.append(self.geodesic(base, u, t))
        return pts

    # -- isometries ----------------------------------------------------------

    def random_isometry(self, rng: np.random.Generator) -> np.ndarray:
        """Random isometry in the identity component (preserves the upper sheet)."""
        m = self.ambient_dim
        B = rng.standard_normal((m, m))
        S = 0.5 * (B - self.sig.adjoint(B))
        S *= rng.uniform(0.3, 1.2) / max(np.abs(S).max(), 1e-12)
        return expm(S)

    def is_isometry(self, g, tol: float = 1e-9) -> bool:
        g = np.asarray(g, dtype=float)
        if not self.sig.is_form_preserving(g, tol):
            return False
        if self.eps == -1 and (g @ self.base_point())[-1] <= 0:
            return False
        return True

    def complex_rotation(self, x, v) -> np.ndarray:
        """J: rotation by +pi/2 in T_x M, for the two-dimensional space forms.

        Realised as the (signature-corrected) cross product with the base
        point, which fixes a global orientation.
        """
        if self.n != 2:
            raise ValueError("complex rotation requires n = 2")
        w = np.cross(as_vector(x), as_vector(v))
        if self.eps == -1:
            w[-1] = -w[-1]
        return w

    # -- finite-difference oracles ------------------------------------------

    def covariant_derivative_fd(self, field, x, X, h: float = DEFAULT_H_FIRST) -> np.ndarray:
        """Central-difference nabla_X sigma; O(h^2) accurate.

        The ambient directional derivative D_X sigma is differenced along the
        geodesic through x in direction X/|X|, then Gauss-corrected by
        + eps <X, sigma(x)> x.
        """
        if h <= 0:
            raise ValueError("step h must be positive")
        fn = _field_fn(field)
        x = as_vector(x)
        X = as_vector(X)
        nrm = self.norm(X)
        if nrm < 1e-14:
            return np.zeros(self.ambient_dim)
        u = X / nrm
        d = nrm * (fn(self.geodesic(x, u, h)) - fn(self.geodesic(x, u, -h))) / (2.0 * h)
        return d + self.eps * self.inner(X, fn(x)) * x

    def rough_laplacian_fd(self, field, x, h: float = DEFAULT_H_SECOND) -> np.ndarray:
        """-sum_i nabla^2_{E_i, E_i} sigma by second central differences.

        Along a unit-speed geodesic gamma with gamma'(0) = E the velocity
        field is autoparallel, so the second covariant derivative reduces to

            s''(0) + 2 eps <E, s'(0)> x + eps <E, sigma(x)> E,

        where s(t) = sigma(gamma(t)); the curvature term <gamma'', sigma> x
        drops out because sigma(x) is tangent.
        """
        if h <= 0:
            raise ValueError("step h must be positive")
        fn = _field_fn(field)
        x = as_vector(x)
        s0 = fn(x)
        out = np.zeros(self.ambient_dim)
        for E in self.frame(x):
            sp = fn(self.geodesic(x, E, h))
            sm = fn(self.geodesic(x, E, -h))
            d1 = (sp - sm) / (2.0 * h)
            d2 = (sp - 2.0 * s0 + sm) / (h * h)
            out -= d2 + 2.0 * self.eps * self.inner(E, d1) * x + self.eps * self.inner(E, s0) * E
        return self.tangent_project(x, out)

    def laplacian_fd(self, field_F, x, h: float = DEFAULT_H_SECOND) -> float:
        """Laplacian Delta f = -tr Hess f of a scalar function, by differences."""
        if h <= 0:
            raise ValueError("step h must be positive")
        x = as_vector(x)
        f0 = field_F(x)
        total = 0.0
        for E in self.frame(x):
            fp = field_F(self.geodesic(x, E, h))
            fm = field_F(self.geodesic(x, E, -h))
            total -= (fp - 2.0 * f0 + fm) / (h * h)
        return total


def sphere(n: int) -> SpaceForm:
    return SpaceForm(n, EUCLIDEAN)


def hyperbolic(n: int) -> SpaceForm:
    return SpaceForm(n, LORENTZIAN)
