"""The vector-field families on S^n and H^n and their closed-form analysis.

Each family evaluates, at any point x, the field value sigma(x) together
with everything the harmonic-section operator needs:

    F        = |sigma|^2 / 2
    nabla    = the covariant derivative X -> nabla_X sigma
    grad_F   = gradient of F
    lap_F    = Laplacian of F  (Delta F = -div grad F)
    rough    = rough Laplacian nabla* nabla sigma
    zeta     = the spinnaker, when the field is preharmonic
               (nabla_{grad F} sigma = zeta * sigma)

Six constructions are provided:

* conformal gradient fields  sigma = grad <a, .>  with pole a;
* Killing fields  sigma(x) = A(x)  for a skew operator A, including the
  balanced block-rotation (generalised Hopf) fields and the hyperbolic
  rotation/translation/parabolic trichotomy;
* loxodromic fields  R + C: a rank-r rotation plus a conformal gradient
  whose pole is orthogonal to the rotation planes;
* dipole deformation fields  tau*T + r*A  built from a point and a unit
  tangent vector;
* general conformal fields on the 2-dimensional space forms, K + C;
* quadratic gradient fields  sigma = (1/2) grad <Q x, x>  on spheres.

All fields are immutable after construction and analyses are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ambient import Signature, as_vector, check_symmetric, lorentz_pairing
from .spaceform import SpaceForm, hyperbolic

TANGENT_TOL = 1e-10
CLUSTER_TOL = 1e-8  # eigenvalue clustering tolerance (decides "balanced")
PREHARMONIC_OP_TOL = 1e-10


@dataclass
class FieldPointData:
    """Pointwise analysis of a field: value, energy density data, spinnaker."""

    sigma: np.ndarray
    F: float
    grad_F: np.ndarray
    lap_F: float
    rough_lap: np.ndarray
    spinnaker: float | None
    nabla_sigma: np.ndarray  # ambient matrix acting as X -> nabla_X sigma on T_x M


class VectorField:
    """Base class: a tangent vector field with closed-form derivatives."""

    family = "abstract"

    def __init__(self, space: SpaceForm):
        self.space = space

    # subclasses implement sigma, nabla, grad_F, lap_F, rough_laplacian,
    # spinnaker, nu, sigma_sq (closed form), transform, params

    def sigma(self, x) -> np.ndarray:
        raise NotImplementedError

    def nabla(self, x, X) -> np.ndarray:
        raise NotImplementedError

    def sigma_sq(self, x) -> float:
        s = self.sigma(x)
        return self.space.sig.norm_sq(s)

    def F(self, x) -> float:
        return 0.5 * self.space.sig.norm_sq(self.sigma(x))

    def grad_F(self, x) -> np.ndarray:
        raise NotImplementedError

    def lap_F(self, x) -> float:
        raise NotImplementedError

    def rough_laplacian(self, x) -> np.ndarray:
        raise NotImplementedError

    def nabla_gradF_sigma(self, x) -> np.ndarray:
        return self.nabla(x, self.grad_F(x))

    def spinnaker(self, x) -> float | None:
        return None

    @property
    def nu(self) -> float | None:
        """Rough-Laplacian eigenvalue, when the field is an eigenfunction."""
        return None

    @property
    def sup_norm(self) -> float | None:
        """sup |sigma| over M, when finite and known in closed form."""
        return None

    def nabla_matrix(self, x) -> np.ndarray:
        """Ambient matrix N with N X = nabla_X sigma for tangent X."""
        m = self.space.ambient_dim
        eta = self.space.sig.eta(m)
        N = np.zeros((m, m))
        for E in self.space.frame(x):
            N += np.outer(self.nabla(x, E), eta @ E)
        return N

    def nabla_norm_sq(self, x) -> float:
        """|nabla sigma|^2 = sum_i |nabla_{E_i} sigma|^2 over a tangent frame."""
        return sum(self.space.sig.norm_sq(self.nabla(x, E)) for E in self.space.frame(x))

    def analysis(self, x) -> FieldPointData:
        x = self.space.check_point(x)
        s = self.sigma(x)
        return FieldPointData(
            sigma=s,
            F=0.5 * self.space.sig.norm_sq(s),
            grad_F=self.grad_F(x),
            lap_F=self.lap_F(x),
            rough_lap=self.rough_laplacian(x),
            spinnaker=self.spinnaker(x),
            nabla_sigma=self.nabla_matrix(x),
        )

    def transform(self, g) -> "VectorField":
        """The congruent field g.sigma(g^{-1} x) for an isometry g."""
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError


class ScaledField(VectorField):
    """c * sigma for a constant c; keeps every closed form exact."""

    def __init__(self, base: VectorField, factor: float):
        super().__init__(base.space)
        self.base = base
        self.factor = float(factor)
        self.family = base.family

    def sigma(self, x):
        return self.factor * self.base.sigma(x)

    def nabla(self, x, X):
        return self.factor * self.base.nabla(x, X)

    def sigma_sq(self, x):
        return self.factor**2 * self.base.sigma_sq(x)

    def grad_F(self, x):
        return self.factor**2 * self.base.grad_F(x)

    def lap_F(self, x):
        return self.factor**2 * self.base.lap_F(x)

    def rough_laplacian(self, x):
        return self.factor * self.base.rough_laplacian(x)

    def nabla_gradF_sigma(self, x):
        return self.factor**3 * self.base.nabla_gradF_sigma(x)

    def spinnaker(self, x):
        z = self.base.spinnaker(x)
        return None if z is None else self.factor**2 * z

    @property
    def nu(self):
        return self.base.nu

    @property
    def sup_norm(self):
        s = self.base.sup_norm
        return None if s is None else abs(self.factor) * s

    def transform(self, g):
        return ScaledField(self.base.transform(g), self.factor)

    def params(self):
        return {**self.base.params(), "scale_factor": self.factor}


def scale_field(field: VectorField, factor: float) -> VectorField:
    if isinstance(field, ScaledField):
        return ScaledField(field.base, field.factor * factor)
    return ScaledField(field, factor)


# ---------------------------------------------------------------------------
# conformal gradient fields
# ---------------------------------------------------------------------------


class ConformalGradientField(VectorField):
    """sigma = grad alpha for alpha(x) = <a, x>; pole a, mu = <a, a>.

    Pointwise: sigma(x) = a - eps*alpha*x, |sigma|^2 = mu - eps*alpha^2,
    nabla_X sigma = -eps*alpha X, and sigma is a rough-Laplacian
    eigenfunction with eigenvalue eps.  Always preharmonic, with
    zeta = eps*(mu - 2F) = alpha^2.
    """

    family = "confgrad"

    def __init__(self, a, space: SpaceForm):
        super().__init__(space)
        self.a = as_vector(a)
        if self.a.shape != (space.ambient_dim,):
            raise ValueError("pole has wrong dimension")
        self.mu = space.inner(self.a, self.a)
        if space.eps == -1 and self.mu < 0 and self.a[-1] <= 0:
            raise ValueError("timelike pole must be future-oriented")

    def alpha(self, x) -> float:
        return self.space.inner(self.a, x)

    def sigma(self, x):
        return self.a - self.space.eps * self.alpha(x) * as_vector(x)

    def sigma_sq(self, x):
        return self.mu - self.space.eps * self.alpha(x) ** 2

    def nabla(self, x, X):
        return -self.space.eps * self.alpha(x) * as_vector(X)

    def grad_F(self, x):
        return -self.space.eps * self.alpha(x) * self.sigma(x)

    def lap_F(self, x):
        n, eps = self.space.n, self.space.eps
        return eps * ((n + 1) * self.sigma_sq(x) - n * self.mu)

    def rough_laplacian(self, x):
        return self.space.eps * self.sigma(x)

    def nabla_gradF_sigma(self, x):
        return self.alpha(x) ** 2 * self.sigma(x)

    def spinnaker(self, x):
        return self.space.eps * (self.mu - self.sigma_sq(x))

    @property
    def nu(self):
        return float(self.space.eps)

    @property
    def sup_norm(self):
        if self.space.eps == 1:
            return math.sqrt(self.mu)
        return None  # unbounded length on H^n

    def transform(self, g):
        return ConformalGradientField(np.asarray(g) @ self.a, self.space)

    def params(self):
        return {"pole": self.a.tolist(), "mu": self.mu}


# ---------------------------------------------------------------------------
# Killing fields
# ---------------------------------------------------------------------------


def _cluster(values: np.ndarray, tol: float) -> list[tuple[float, int]]:
    """Group sorted non-negative values into (mean, count) clusters."""
    out: list[list[float]] = []
    for v in sorted(values):
        if out and v - out[-1][-1] <= tol:
            out[-1].append(v)
        else:
            out.append([v])
    return [(float(np.mean(c)), len(c)) for c in out]


class KillingField(VectorField):
    """sigma(x) = A(x) for a skew-symmetric ambient operator A.

    On the sphere the normal form of A is a direct sum of r rotation blocks
    with angular frequencies (twists) omega_1 >= ... >= omega_r > 0.  On
    hyperbolic space A splits at a base point w into a rotational part R_w
    and a translational part T_w with speed tau = |A(w)|, and the sign of
    sum omega_i^2 - tau^2 (a congruence invariant) classifies sigma as an
    infinitesimal rotation, translation, or parabolic type.

    The field is a rough-Laplacian eigenfunction with eigenvalue eps*(n-1);
    it is preharmonic exactly when A^3 = lambda*A for a constant lambda, and
    then zeta = -(lambda + eps*|sigma|^2).
    """

    family = "killing"

    def __init__(self, A, space: SpaceForm, base=None):
        super().__init__(space)
        self.A = space.sig.check_skew(np.asarray(A, dtype=float))
        if self.A.shape != (space.ambient_dim,) * 2:
            raise ValueError("operator has wrong dimension")
        self._A2 = self.A @ self.A
        self._A3 = self._A2 @ self.A
        self.operator_sq = lorentz_pairing(self.A, self.A, space.sig)
        self._derive_normal_form(base)
        self._derive_preharmonicity()

    def _derive_normal_form(self, base):
        space = self.space
        op_scale = max(np.abs(self.A).max(), 1.0)
        if space.eps == 1:
            self.base = None
            self.tau = 0.0
            sq = np.linalg.eigvalsh(-self._A2)
            rot = self._twists_from_squares(sq, op_scale)
        else:
            w = space.base_point() if base is None else space.check_point(base)
            self.base = w
            eta = space.sig.eta(space.ambient_dim)
            v = self.A @ w
            self.tau = space.norm(v)
            T = np.outer(w, eta @ v) - np.outer(v, eta @ w)
            R = self.A - T
            E = np.array(space.frame(w))  # rows
            Rt = E @ eta @ R @ E.T  # <R E_j, E_i> in the (Euclidean) tangent space
            rot = self._twists_from_squares(np.linalg.eigvalsh(Rt.T @ Rt), op_scale)  # = -Rt^2
            self.translation_part = T
            self.rotation_part = R
        self.twists = rot
        self.rank = len(rot)
        self.balanced = not rot or rot[0] - rot[-1] <= CLUSTER_TOL * max(rot[0], 1.0)
        inv = sum(t * t for t in rot) - self.tau**2
        if space.eps == 1:
            self.kind = "rotation"
        elif abs(inv) <= 1e-9 * max(op_scale**2, 1.0):
            self.kind = "parabolic"
        else:
            self.kind = "rotation" if inv > 0 else "translation"

    def _twists_from_squares(self, sq, op_scale) -> tuple[float, ...]:
        tol = CLUSTER_TOL * max(op_scale**2, 1.0)
        twists: list[float] = []
        for mean, count in _cluster(np.clip(sq, 0.0, None), tol):
            if mean > tol:
                twists.extend([math.sqrt(mean)] * (count // 2))
        return tuple(sorted(twists, reverse=True))

    def _derive_preharmonicity(self):
        fro = float((self.A * self.A).sum())
        if fro < 1e-300:
            self.preharmonic_lambda = 0.0
            return
        lam = float((self._A3 * self.A).sum()) / fro
        scale = max(1.0, np.linalg.norm(self.A, 2) ** 3)
        if np.linalg.norm(self._A3 - lam * self.A, 2) <= PREHARMONIC_OP_TOL * scale:
            self.preharmonic_lambda = lam
        else:
            self.preharmonic_lambda = None

    def sigma(self, x):
        return self.A @ as_vector(x)

    def nabla(self, x, X):
        AX = self.A @ as_vector(X)
        return AX - self.space.eps * self.space.inner(AX, x) * as_vector(x)

    def grad_F(self, x):
        x = as_vector(x)
        return -self._A2 @ x - self.space.eps * self.sigma_sq(x) * x

    def lap_F(self, x):
        eps, n = self.space.eps, self.space.n
        return eps * (n + 1) * self.sigma_sq(x) - self.operator_sq

    def rough_laplacian(self, x):
        return self.space.eps * (self.space.n - 1) * self.sigma(x)

    def nabla_gradF_sigma(self, x):
        x = as_vector(x)
        return -self._A3 @ x - self.space.eps * self.sigma_sq(x) * self.sigma(x)

    def spinnaker(self, x):
        if self.preharmonic_lambda is None:
            return None
        return -(self.preharmonic_lambda + self.space.eps * self.sigma_sq(x))

    @property
    def nu(self):
        return float(self.space.eps * (self.space.n - 1))

    @property
    def sup_norm(self):
        if not self.twists and self.tau == 0.0:
            return 0.0
        if self.space.eps == 1:
            return self.twists[0]
        return None

    def transform(self, g):
        g = np.asarray(g, dtype=float)
        g_inv = self.space.sig.adjoint(g)  # isometries satisfy g^{-1} = eta g^T eta
        base = None
        if self.base is not None:
            base = self.space.normalize_point(g @ self.base)
        return KillingField(g @ self.A @ g_inv, self.space, base=base)

    def params(self):
        return {"operator": self.A.tolist()}


class GeneralizedHopfField(KillingField):
    """The balanced rank-r block-rotation field scale * Sigma_r.

    Sigma_r rotates the coordinate planes (1,2), (3,4), ..., (2r-1, 2r) with
    unit speed and kills the remaining coordinates; on odd spheres with
    2r = n+1 it is the standard Hopf field.
    """

    family = "hopf"

    def __init__(self, r: int, scale: float, space: SpaceForm):
        if r < 1:
            raise ValueError("rotational rank must be >= 1")
        if space.eps == 1 and 2 * r > space.n + 1:
            raise ValueError(f"need 2r <= n+1 on S^n, got r={r}, n={space.n}")
        if space.eps == -1 and 2 * r >= space.n + 1:
            raise ValueError(f"need 2r < n+1 on H^n, got r={r}, n={space.n}")
        A = np.zeros((space.ambient_dim,) * 2)
        for i in range(r):
            A[2 * i + 1, 2 * i] = scale
            A[2 * i, 2 * i + 1] = -scale
        super().__init__(A, space)
        self.block_rank = r
        self.scale = float(scale)

    def params(self):
        return {"r": self.block_rank, "scale": self.scale}


def hopf_field_operator(r: int, scale: float, space: SpaceForm) -> KillingField:
    """Block-rotation Killing field scale * Sigma_r (see GeneralizedHopfField)."""
    return GeneralizedHopfField(r, scale, space)


def elementary_killing(a, b, space: SpaceForm) -> KillingField:
    """The Killing field K(x) = <a,x> b - <b,x> a determined by the pair (a, b)."""
    a, b = as_vector(a), as_vector(b)
    eta = space.sig.eta(space.ambient_dim)
    A = np.outer(b, eta @ a) - np.outer(a, eta @ b)
    return KillingField(A, space)


def hyperbolic_translation(tau: float, space: SpaceForm, direction=None) -> KillingField:
    """Infinitesimal translation of H^n with speed tau along the given axis direction."""
    if space.eps != -1:
        raise ValueError("translations exist on hyperbolic space only")
    w = space.base_point()
    if direction is None:
        direction = np.zeros(space.ambient_dim)
        direction[0] = 1.0
    v = tau * space.check_tangent(w, direction)
    return elementary_killing(v, w, space)


def killing_from_twists(twists, space: SpaceForm) -> KillingField:
    """Block-diagonal Killing field with the given rotation frequencies."""
    twists = list(twists)
    if 2 * len(twists) > space.n + (1 if space.eps == 1 else 0):
        raise ValueError("too many rotation blocks for this dimension")
    A = np.zeros((space.ambient_dim,) * 2)
    for i, w in enumerate(twists):
        A[2 * i + 1, 2 * i] = w
        A[2 * i, 2 * i + 1] = -w
    return KillingField(A, space)


# ---------------------------------------------------------------------------
# loxodromic fields
# ---------------------------------------------------------------------------


class LoxodromicField(VectorField):
    """R + C: a rank-r rotation plus a conformal gradient with orthogonal pole.

    R = sum_i omega_i K_i where K_i is the elementary Killing field of the
    orthonormal pair (a_i, b_i), and C has pole c orthogonal to every a_i,
    b_i.  Properly loxodromic means R balanced and n = 2r; only then (and
    only for n = 2) is the field preharmonic, with
    zeta = eps*(mu + eps*omega^2 - |sigma|^2).
    """

    family = "loxodromic"

    def __init__(self, pairs, omegas, c, space: SpaceForm, tol: float = TANGENT_TOL):
        super().__init__(space)
        self.pairs = [(as_vector(a), as_vector(b)) for a, b in pairs]
        self.omegas = [float(w) for w in omegas]
        self.c = as_vector(c)
        if len(self.pairs) != len(self.omegas) or not self.pairs:
            raise ValueError("need one twist per rotation plane, and at least one plane")
        if any(w <= 0 for w in self.omegas):
            raise ValueError("twists must be positive (drop trivial planes)")
        vecs = [v for p in self.pairs for v in p]
        for i, u in enumerate(vecs):
            for j, v in enumerate(vecs):
                want = 1.0 if i == j else 0.0
                if abs(space.inner(u, v) - want) > tol:
                    raise ValueError("rotation-plane vectors must be spacelike orthonormal")
            if abs(space.inner(u, self.c)) > tol * (1.0 + abs(self.c).max()):
                raise ValueError("conformal pole must be orthogonal to the rotation planes")
        self.mu = space.inner(self.c, self.c)
        if not np.abs(self.c).max() > 0:
            raise ValueError("conformal part must be non-trivial")
        mx = max(self.omegas)
        self.balanced = mx - min(self.omegas) <= CLUSTER_TOL * mx
        self.rank = len(self.pairs)
        self.properly = self.balanced and space.n == 2 * self.rank

    # scalar coordinates
    def gamma(self, x) -> float:
        return self.space.inner(self.c, x)

    def _coords(self, x):
        return [(self.space.inner(a, x), self.space.inner(b, x)) for a, b in self.pairs]

    def rotation_value(self, x) -> np.ndarray:
        out = np.zeros(self.space.ambient_dim)
        for w, (a, b), (al, be) in zip(self.omegas, self.pairs, self._coords(x)):
            out += w * (al * b - be * a)
        return out

    def conformal_value(self, x) -> np.ndarray:
        return self.c - self.space.eps * self.gamma(x) * as_vector(x)

    def sigma(self, x):
        return self.rotation_value(x) + self.conformal_value(x)

    def sigma_sq(self, x):
        eps = self.space.eps
        s = sum(w * w * (al * al + be * be) for w, (al, be) in zip(self.omegas, self._coords(x)))
        return s + self.mu - eps * self.gamma(x) ** 2

    def nabla(self, x, X):
        x, X = as_vector(x), as_vector(X)
        eps = self.space.eps
        out = -eps * self.gamma(x) * X
        for w, (a, b), (al, be) in zip(self.omegas, self.pairs, self._coords(x)):
            Af = a - eps * al * x
            Bf = b - eps * be * x
            out += w * (self.space.inner(Af, X) * Bf - self.space.inner(Bf, X) * Af)
        return out

    def grad_F(self, x):
        x = as_vector(x)
        eps = self.space.eps
        out = -eps * self.gamma(x) * self.conformal_value(x)
        for w, (a, b), (al, be) in zip(self.omegas, self.pairs, self._coords(x)):
            Af = a - eps * al * x
            Bf = b - eps * be * x
            out += w * w * (al * Af + be * Bf)
        return out

    def lap_F(self, x):
        eps, n = self.space.eps, self.space.n
        g = self.gamma(x)
        total = eps * self.mu - (n + 1) * g * g
        for w, (al, be) in zip(self.omegas, self._coords(x)):
            total += w * w * (eps * (n + 1) * (al * al + be * be) - 2.0)
        return total

    def rough_laplacian(self, x):
        eps, n = self.space.eps, self.space.n
        return eps * (n - 1) * self.rotation_value(x) + eps * self.conformal_value(x)

    def spinnaker(self, x):
        if not (self.properly and self.space.n == 2):
            return None
        eps = self.space.eps
        w = self.omegas[0]
        return eps * (self.mu + eps * w * w - self.sigma_sq(x))

    @property
    def nu(self):
        return float(self.space.eps) if self.space.n == 2 else None

    def transform(self, g):
        g = np.asarray(g, dtype=float)
        pairs = [(g @ a, g @ b) for a, b in self.pairs]
        return LoxodromicField(pairs, self.omegas, g @ self.c, self.space)

    def circle_action(self, t: float) -> "LoxodromicField":
        """Associate-family member cos(t) sigma + sin(t) J sigma on H^2."""
        if self.space.n != 2 or self.space.eps != -1:
            raise ValueError("circle action implemented on the hyperbolic plane")
        a, b = self.pairs[0]
        w = np.cross(a, b)
        w[-1] = -w[-1]  # Lorentz dual of the rotation plane
        w = self.space.normalize_point(w if w[-1] > 0 else -w)
        orient = 1.0 if np.linalg.det(np.column_stack([a, b, w])) > 0 else -1.0
        h = -self.space.inner(self.c, w)  # c = h * w
        om = self.omegas[0]
        om2 = math.cos(t) * om - math.sin(t) * orient * h
        h2 = math.cos(t) * h + math.sin(t) * orient * om
        if abs(om2) < 1e-12 or abs(h2) < 1e-12:
            raise ValueError("degenerate associate-family member (pure rotation/gradient)")
        if om2 < 0:
            b, om2 = -b, -om2
        return LoxodromicField([(a, b)], [om2], h2 * w, self.space)

    def params(self):
        return {
            "pairs": [[a.tolist(), b.tolist()] for a, b in self.pairs],
            "omegas": list(self.omegas),
            "pole": self.c.tolist(),
            "mu": self.mu,
        }


def associate_family_member(t: float, space: SpaceForm | None = None) -> LoxodromicField:
    """The loxodromic field sin(t)*sigma_0 + cos(t)*sigma_1 on H^2.

    sigma_0 is the unit-twist rotation about (0,0,1) and sigma_1 the
    conformal gradient with pole (0,0,1); degenerate t (multiples of pi/2)
    are rejected since the endpoints leave the loxodromic class.
    """
    space = space or hyperbolic(2)
    s, c = math.sin(t), math.cos(t)
    if abs(s) < 1e-12 or abs(c) < 1e-12:
        raise ValueError("t too close to a pure-rotation or pure-gradient endpoint")
    e1, e2, e3 = np.eye(3)
    pair = (e1, e2) if s > 0 else (e2, e1)
    return LoxodromicField([pair], [abs(s)], c * e3, space)


# ---------------------------------------------------------------------------
# dipole deformation fields
# ---------------------------------------------------------------------------


class DipoleDeformationField(VectorField):
    """tau*T + r*A for a point w and unit tangent a at w.

    A is the conformal gradient with pole a and T the elementary Killing
    field of the pair (a, w); |tau| = |r| (with the sign fixed by eps)
    gives the dipole field with a single zero at w.  Preharmonic only in
    dimension two (or at the conformal/Killing endpoints), with
    zeta = eps*(r^2 + tau^2 - 2 r tau psi - |sigma|^2).
    """

    family = "dipole"

    def __init__(self, w, a, tau: float, r: float, space: SpaceForm):
        super().__init__(space)
        self.w = space.check_point(w)
        a = space.check_tangent(self.w, a, tol=1e-12)
        if abs(space.sig.norm_sq(a) - 1.0) > 1e-12:
            raise ValueError("dipole direction must be a unit tangent vector")
        self.a = a
        self.tau = float(tau)
        self.r = float(r)

    def alpha(self, x) -> float:
        return self.space.inner(self.a, x)

    def psi(self, x) -> float:
        return self.space.inner(self.w, x)

    def _parts(self, x):
        x = as_vector(x)
        al, ps = self.alpha(x), self.psi(x)
        T = al * self.w - ps * self.a
        A = self.a - self.space.eps * al * x
        W = self.w - self.space.eps * ps * x
        return al, ps, T, A, W

    def sigma(self, x):
        _, _, T, A, _ = self._parts(x)
        return self.tau * T + self.r * A

    def sigma_sq(self, x):
        eps = self.space.eps
        al, ps = self.alpha(x), self.psi(x)
        return (self.tau * ps - self.r) ** 2 + eps * (self.tau**2 - self.r**2) * al * al

    def nabla(self, x, X):
        X = as_vector(X)
        al, _, _, A, W = self._parts(x)
        inner = self.space.inner
        return self.tau * (inner(A, X) * W - inner(W, X) * A) - self.space.eps * self.r * al * X

    def grad_F(self, x):
        eps = self.space.eps
        al, ps, _, A, W = self._parts(x)
        return self.tau * (self.tau * ps - self.r) * W + eps * (self.tau**2 - self.r**2) * al * A

    def lap_F(self, x):
        eps, n = self.space.eps, self.space.n
        t, r = self.tau, self.r
        al, ps = self.alpha(x), self.psi(x)
        d = t * t - r * r
        return (
            eps * n * t * ps * (t * ps - r)
            - eps * t * t * (1.0 - ps * ps)
            + (n + 1) * d * al * al
            - eps * d
        )

    def rough_laplacian(self, x):
        _, _, T, A, _ = self._parts(x)
        eps, n = self.space.eps, self.space.n
        return eps * ((n - 1) * self.tau * T + self.r * A)

    def spinnaker(self, x):
        if not (self.space.n == 2 or self.tau == 0.0 or self.r == 0.0):
            return None
        eps = self.space.eps
        ps = self.psi(x)
        return eps * (self.r**2 + self.tau**2 - 2.0 * self.r * self.tau * ps - self.sigma_sq(x))

    @property
    def nu(self):
        eps, n = self.space.eps, self.space.n
        if n == 2 or self.tau == 0.0:
            return float(eps)
        if self.r == 0.0:
            return float(eps * (n - 1))
        return None

    def transform(self, g):
        g = np.asarray(g, dtype=float)
        w = self.space.normalize_point(g @ self.w)
        return DipoleDeformationField(w, g @ self.a, self.tau, self.r, self.space)

    def params(self):
        return {"w": self.w.tolist(), "a": self.a.tolist(), "tau": self.tau, "r": self.r}


# ---------------------------------------------------------------------------
# conformal fields in dimension two
# ---------------------------------------------------------------------------


class Conformal2DField(VectorField):
    """K + C on a 2-dimensional space form: every conformal field.

    K = omega*R + tau*T with R the rotation about w and T the translation
    through w along a; C is the conformal gradient with pole located
    cylindrically as c = rr*s*a + rr*t*b + h*w.  On the sphere w can be
    taken on the axis of K, so tau = 0 there.  Every such field is
    preharmonic, with zeta = (omega*psi - eps*tau*beta)^2 + gamma^2.
    """

    family = "conformal2d"

    def __init__(
        self,
        space: SpaceForm,
        omega: float,
        tau: float,
        rr: float,
        s: float,
        t: float,
        h: float,
        w=None,
        a=None,
        b=None,
    ):
        super().__init__(space)
        if space.n != 2:
            raise ValueError("Conformal2DField requires a 2-dimensional space form")
        self.w = space.base_point() if w is None else space.check_point(w)
        e = np.eye(space.ambient_dim)
        self.a = e[0] if a is None else as_vector(a)
        self.b = e[1] if b is None else as_vector(b)
        for u in (self.a, self.b):
            space.check_tangent(self.w, u, tol=1e-12)
        if (
            abs(space.sig.norm_sq(self.a) - 1.0) > 1e-12
            or abs(space.sig.norm_sq(self.b) - 1.0) > 1e-12
            or abs(space.inner(self.a, self.b)) > 1e-12
        ):
            raise ValueError("(a, b) must be an orthonormal tangent frame at w")
        if abs(s * s + t * t - 1.0) > 1e-12:
            raise ValueError("pole direction must satisfy s^2 + t^2 = 1")
        if omega < 0 or tau < 0:
            raise ValueError("Killing coefficients omega, tau must be >= 0")
        if space.eps == 1 and tau != 0.0:
            raise ValueError("on the sphere take w on the axis of K, so tau = 0")
        self.omega, self.tau = float(omega), float(tau)
        self.rr, self.s, self.t, self.h = float(rr), float(s), float(t), float(h)
        self.c = self.rr * self.s * self.a + self.rr * self.t * self.b + self.h * self.w

    # coordinates alpha, beta, psi and the pole covector gamma
    def alpha(self, x) -> float:
        return self.space.inner(self.a, x)

    def beta(self, x) -> float:
        return self.space.inner(self.b, x)

    def psi(self, x) -> float:
        return self.space.inner(self.w, x)

    def gamma(self, x) -> float:
        return self.space.inner(self.c, x)

    def sigma(self, x):
        x = as_vector(x)
        al, be, ps = self.alpha(x), self.beta(x), self.psi(x)
        K = self.omega * (al * self.b - be * self.a) + self.tau * (al * self.w - ps * self.a)
        return K + self.c - self.space.eps * self.gamma(x) * x

    def sigma_sq(self, x):
        eps = self.space.eps
        om, ta, r, s, t, h = self.omega, self.tau, self.rr, self.s, self.t, self.h
        al, be, ps, g = self.alpha(x), self.beta(x), self.psi(x), self.gamma(x)
        return (
            ta * ta
            + r * r
            + eps * (om * om + h * h)
            + 2.0 * (om * r * t + eps * ta * h) * al
            - 2.0 * r * s * (om * be + ta * ps)
            - eps * (om * ps - eps * ta * be) ** 2
            - eps * g * g
        )

    def _gradient_fields(self, x):
        x = as_vector(x)
        eps = self.space.eps
        Af = self.a - eps * self.alpha(x) * x
        Bf = self.b - eps * self.beta(x) * x
        Wf = self.w - eps * self.psi(x) * x
        Cf = self.c - eps * self.gamma(x) * x
        return Af, Bf, Wf, Cf

    def nabla(self, x, X):
        X = as_vector(X)
        eps = self.space.eps
        Af, Bf, Wf, _ = self._gradient_fields(x)
        inner = self.space.inner
        out = self.omega * (inner(Af, X) * Bf - inner(Bf, X) * Af)
        out += self.tau * (inner(Af, X) * Wf - inner(Wf, X) * Af)
        return out - eps * self.gamma(x) * X

    def grad_F(self, x):
        eps = self.space.eps
        om, ta, r, s, t, h = self.omega, self.tau, self.rr, self.s, self.t, self.h
        be, ps, g = self.beta(x), self.psi(x), self.gamma(x)
        Af, Bf, Wf, Cf = self._gradient_fields(x)
        out = (om * r * t + eps * ta * h) * Af - r * s * (om * Bf + ta * Wf)
        out -= eps * (om * ps - eps * ta * be) * (om * Wf - eps * ta * Bf)
        return out - eps * g * Cf

    def spinnaker(self, x):
        eps = self.space.eps
        twist = self.omega * self.psi(x) - eps * self.tau * self.beta(x)
        return twist * twist + self.gamma(x) ** 2

    def lap_F(self, x):
        eps = self.space.eps
        return eps * self.sigma_sq(x) - 2.0 * self.spinnaker(x)

    def rough_laplacian(self, x):
        return self.space.eps * self.sigma(x)

    @property
    def nu(self):
        return float(self.space.eps)

    def transform(self, g):
        g = np.asarray(g, dtype=float)
        return Conformal2DField(
            self.space,
            self.omega,
            self.tau,
            self.rr,
            self.s,
            self.t,
            self.h,
            w=self.space.normalize_point(g @ self.w),
            a=g @ self.a,
            b=g @ self.b,
        )

    def components(self) -> np.ndarray:
        """Coefficients (k_R, k_a, k_b, c_a, c_b, c_w) in the frame (a, b, w)."""
        return np.array(
            [self.omega, self.tau, 0.0, self.rr * self.s, self.rr * self.t, self.h]
        )

    @classmethod
    def from_components(cls, space, w, a, b, comps) -> "Conformal2DField":
        """Canonicalize (rotate the frame, fix signs) and build the field."""
        k_R, k_a, k_b, c_a, c_b, c_w = (float(v) for v in comps)
        tau = math.hypot(k_a, k_b)
        if tau > 1e-12:
            phi = math.atan2(k_b, k_a)
            a, b = (
                math.cos(phi) * a + math.sin(phi) * b,
                -math.sin(phi) * a + math.cos(phi) * b,
            )
            c_a, c_b = (
                math.cos(phi) * c_a + math.sin(phi) * c_b,
                -math.sin(phi) * c_a + math.cos(phi) * c_b,
            )
        else:
            tau = 0.0
        if k_R < 0:
            b, k_R, c_b = -b, -k_R, -c_b
        rr = math.hypot(c_a, c_b)
        if rr > 1e-12:
            s, t = c_a / rr, c_b / rr
        else:
            rr, s, t = 0.0, 0.0, 1.0
        return cls(space, k_R, tau, rr, s, t, c_w, w=w, a=a, b=b)

    def circle_action(self, t: float) -> "Conformal2DField":
        """Associate-family member cos(t) sigma + sin(t) J sigma (H^2 only)."""
        if self.space.eps != -1:
            raise ValueError("circle action implemented on the hyperbolic plane")
        eps = self.space.eps
        orient = 1.0 if np.linalg.det(np.column_stack([self.a, self.b, self.w])) > 0 else -1.0
        k_R, k_a, k_b, c_a, c_b, c_w = self.components()
        j = orient * np.array(
            [-c_w, eps * c_b, -eps * c_a, eps * k_b, -eps * k_a, k_R]
        )
        comps = math.cos(t) * self.components() + math.sin(t) * j
        return Conformal2DField.from_components(self.space, self.w, self.a, self.b, comps)

    def params(self):
        return {
            "omega": self.omega,
            "tau": self.tau,
            "rr": self.rr,
            "s": self.s,
            "t": self.t,
            "h": self.h,
        }


# ---------------------------------------------------------------------------
# quadratic gradient fields on spheres
# ---------------------------------------------------------------------------


class QuadraticGradientField(VectorField):
    """sigma = (1/2) grad xi for the quadratic form xi(x) = <Q x, x> on S^n.

    Pointwise sigma(x) = Q(x) - xi(x) x, so the zeros are exactly the unit
    eigenvectors of Q.  The field is a rough-Laplacian eigenfunction with
    eigenvalue n+3, and is preharmonic precisely when Q has two distinct
    eigenvalues, with zeta = (lambda - 2 xi)^2 for the shifted two-value
    form (lambda the eigenvalue gap).
    """

    family = "quadratic"

    def __init__(self, Q, space: SpaceForm):
        super().__init__(space)
        if space.eps != 1:
            raise ValueError("quadratic gradient fields are defined on spheres only")
        self.Q = check_symmetric(np.asarray(Q, dtype=float))
        if self.Q.shape != (space.ambient_dim,) * 2:
            raise ValueError("operator has wrong dimension")
        self._Q2 = self.Q @ self.Q
        self._Q3 = self._Q2 @ self.Q
        self._trQ = float(np.trace(self.Q))
        self._trQ2 = float(np.trace(self._Q2))
        self.eigenvalues = np.linalg.eigvalsh(self.Q)
        scale = max(1.0, np.abs(self.eigenvalues).max())
        self._clusters = _cluster(self.eigenvalues, CLUSTER_TOL * scale)

    def xi(self, x, m: int = 1) -> float:
        x = as_vector(x)
        Qm = (self.Q, self._Q2, self._Q3)[m - 1]
        return float(x @ Qm @ x)

    def sigma_m(self, x, m: int = 1) -> np.ndarray:
        x = as_vector(x)
        Qm = (self.Q, self._Q2, self._Q3)[m - 1]
        return Qm @ x - self.xi(x, m) * x

    def sigma(self, x):
        return self.sigma_m(x, 1)

    def sigma_sq(self, x):
        return self.xi(x, 2) - self.xi(x) ** 2

    def nabla(self, x, X):
        x, X = as_vector(x), as_vector(X)
        return self.Q @ X - self.xi(x) * X - float(self.sigma(x) @ X) * x

    def grad_F(self, x):
        return self.sigma_m(x, 2) - 2.0 * self.xi(x) * self.sigma(x)

    def lap_F(self, x):
        n = self.space.n
        xi1, xi2 = self.xi(x), self.xi(x, 2)
        return (n + 5) * xi2 - (2 * n + 6) * xi1 * xi1 - self._trQ2 + 2.0 * xi1 * self._trQ

    def rough_laplacian(self, x):
        return (self.space.n + 3) * self.sigma(x)

    def nabla_gradF_sigma(self, x):
        xi1, xi2 = self.xi(x), self.xi(x, 2)
        return (
            self.sigma_m(x, 3)
            - 3.0 * xi1 * self.sigma_m(x, 2)
            + (4.0 * xi1 * xi1 - xi2) * self.sigma(x)
        )

    def spinnaker(self, x):
        if len(self._clusters) == 1:
            return 0.0  # sigma is identically zero
        if len(self._clusters) != 2:
            return None
        (lo, _), (hi, _) = self._clusters
        return (hi + lo - 2.0 * self.xi(x)) ** 2

    @property
    def nu(self):
        return float(self.space.n + 3)

    @property
    def sup_norm(self):
        return 0.5 * float(self.eigenvalues[-1] - self.eigenvalues[0])

    def transform(self, g):
        g = np.asarray(g, dtype=float)
        return QuadraticGradientField(g @ self.Q @ g.T, self.space)

    def params(self):
        return {"eigenvalues": self.eigenvalues.tolist()}


def quadratic_two_eigenvalue(r: int, lam: float, space: SpaceForm) -> QuadraticGradientField:
    """lam * Sigma_r: the two-eigenvalue field with gap lam on the first r axes."""
    if not 1 <= r <= space.n:
        raise ValueError("need 1 <= r <= n for a non-trivial two-eigenvalue field")
    d = np.zeros(space.ambient_dim)
    d[:r] = lam
    return QuadraticGradientField(np.diag(d), space)


# ---------------------------------------------------------------------------
# circle action and declarative construction
# ---------------------------------------------------------------------------


def circle_action(field: VectorField, t: float) -> VectorField:
    """e^{it}.sigma = cos(t) sigma + sin(t) J sigma on the hyperbolic plane."""
    if field.space.n != 2:
        raise ValueError("circle action requires n = 2")
    action = getattr(field, "circle_action", None)
    if action is None:
        raise ValueError(f"family {field.family!r} has no circle action")
    return action(t)


def build_field(doc: dict) -> VectorField:
    """Build a field from a declarative description (family tag + numbers).

    This is the construction surface used by the CLI.  Raises ValueError on
    unknown families, missing parameters, or leftover keys.
    """
    d = dict(doc)
    try:
        family = str(d.pop("family"))
        n = int(d.pop("n"))
        eps = int(d.pop("epsilon"))
    except KeyError as exc:
        raise ValueError(f"missing required key {exc}") from exc
    space = SpaceForm(n, Signature(eps))
    factor = float(d.pop("scale", 1.0))

    def take(key, default=None, required=False):
        if required and key not in d:
            raise ValueError(f"family {family!r} needs parameter {key!r}")
        return d.pop(key, default)

    if family == "confgrad":
        pole = take("pole")
        if pole is not None:
            a = as_vector([float(v) for v in pole])
        else:
            mu = float(take("mu", required=True))
            a = np.zeros(space.ambient_dim)
            if mu > 0:
                a[0] = math.sqrt(mu)
            elif mu < 0:
                if eps != -1:
                    raise ValueError("mu < 0 needs hyperbolic space")
                a[-1] = math.sqrt(-mu)
            else:
                if eps != -1:
                    raise ValueError("mu = 0 gives the zero field on S^n; give a pole")
                a[0] = a[-1] = 1.0
        field = ConformalGradientField(a, space)
    elif family in ("killing", "hopf"):
        if "twists" in d:
            field = killing_from_twists([float(v) for v in take("twists")], space)
        elif "tau" in d:
            field = hyperbolic_translation(float(take("tau")), space)
        else:
            r = int(take("r", required=True))
            omega = float(take("omega", required=True))
            field = GeneralizedHopfField(r, omega, space)
    elif family == "loxodromic":
        r = int(take("r", 1))
        omega = float(take("omega", required=True))
        mu = float(take("mu", required=True))
        e = np.eye(space.ambient_dim)
        pairs = [(e[2 * i], e[2 * i + 1]) for i in range(r)]
        if mu < 0:
            if eps != -1:
                raise ValueError("mu < 0 needs hyperbolic space")
            c = math.sqrt(-mu) * e[-1]
        elif mu > 0:
            if 2 * r >= space.ambient_dim:
                raise ValueError("no room for a spacelike pole orthogonal to the planes")
            c = math.sqrt(mu) * e[2 * r]
        else:
            raise ValueError("give the pole explicitly for mu = 0")
        field = LoxodromicField(pairs, [omega] * r, c, space)
    elif family == "dipole":
        e = np.eye(space.ambient_dim)
        field = DipoleDeformationField(
            e[-1], e[0], float(take("tau", required=True)), float(take("r", required=True)), space
        )
    elif family == "conformal2d":
        field = Conformal2DField(
            space,
            float(take("omega", 0.0)),
            float(take("tau", 0.0)),
            float(take("rr", 0.0)),
            float(take("s", 0.0)),
            float(take("t", 1.0)),
            float(take("h", 0.0)),
        )
    elif family == "quadratic":
        if "eigenvalues" in d:
            field = QuadraticGradientField(
                np.diag([float(v) for v in take("eigenvalues")]), space
            )
        else:
            r = int(take("r", required=True))
            lam = float(take("lam", required=True))
            field = quadratic_two_eigenvalue(r, lam, space)
    else:
        raise ValueError(f"unknown field family {family!r}")

    if d:
        raise ValueError(f"unexpected parameters for family {family!r}: {sorted(d)}")
    return scale_field(field, factor) if factor != 1.0 else field
