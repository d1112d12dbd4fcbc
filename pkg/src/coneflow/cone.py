"""Quadratic cones of rank k and their complementary convex competitive cones.

A cone here is the sublevel set ``C = {xi : <P xi, xi> <= 0}`` of a
nondegenerate symmetric matrix ``P``.  Its rank is the negative index of
inertia of ``P`` (the dimension of the largest linear subspace contained in
``C``).  All operations are pure functions of their inputs; cone objects are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateConeError, DimensionError, EmptyStratumError


class Region(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class ConePosition:
    """Classification of a vector relative to a cone plus the raw form value."""

    region: Region
    value: float

    @property
    def is_interior(self) -> bool:
        return self.region is Region.INTERIOR

    @property
    def is_boundary(self) -> bool:
        return self.region is Region.BOUNDARY

    @property
    def is_exterior(self) -> bool:
        return self.region is Region.EXTERIOR


class QuadraticCone:
    """The set ``{xi : xi^T P xi <= 0}`` for a nondegenerate symmetric ``P``.

    Parameters
    ----------
    P : (n, n) array_like
        Symmetric matrix defining the quadratic form.
    tol_sym : float, optional
        Maximum allowed entrywise asymmetry ``max|P - P^T|``, relative to
        ``max|P|``.  The stored matrix is the symmetrized average.
    tol_zero : float, optional
        Eigenvalues within ``tol_zero * ||P||`` of zero make the form
        degenerate and are rejected.  Defaults to ``1e-9 * ||P||``.
    """

    def __init__(self, P, tol_sym: float = 1e-9, tol_zero: float | None = None):
        P = np.array(P, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise DimensionError(f"P must be square, got shape {P.shape}")
        scale = max(1.0, float(np.max(np.abs(P))))
        asym = float(np.max(np.abs(P - P.T)))
        if asym > tol_sym * scale:
            raise DegenerateConeError(
                f"P is not symmetric: max|P - P^T| = {asym:.3e}"
            )
        P = 0.5 * (P + P.T)
        eigvals, eigvecs = np.linalg.eigh(P)
        if tol_zero is None:
            tol_zero = 1e-9 * scale
        if np.min(np.abs(eigvals)) <= tol_zero:
            raise DegenerateConeError(
                f"P has a near-zero eigenvalue {eigvals[np.argmin(np.abs(eigvals))]:.3e}"
                f" (tolerance {tol_zero:.3e})"
            )
        self._P = P
        self._P.setflags(write=False)
        self.n = P.shape[0]
        self.tol_sym = tol_sym
        self.tol_zero = tol_zero
        self._eigvals = eigvals
        self._eigvecs = eigvecs

    @classmethod
    def from_row_major(cls, values, n: int | None = None, **kw) -> "QuadraticCone":
        """Build a cone from a flat row-major list of n^2 matrix entries."""
        values = np.asarray(values, dtype=float).ravel()
        if n is None:
            n = int(round(np.sqrt(values.size)))
        if n * n != values.size:
            raise DimensionError(
                f"need n^2 entries for a square matrix, got {values.size}"
            )
        return cls(values.reshape(n, n), **kw)

    @property
    def P(self) -> np.ndarray:
        return self._P

    @property
    def rank(self) -> int:
        """Negative index of inertia of P = dimension of the largest linear
        subspace contained in the cone."""
        return int(np.sum(self._eigvals < 0.0))

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigvals.copy()

    def positive_eigenvector(self) -> np.ndarray:
        """A unit eigenvector for the largest (positive) eigenvalue of P."""
        return self._eigvecs[:, -1].copy()

    def _check_dim(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if xi.shape != (self.n,):
            raise DimensionError(f"expected a {self.n}-vector, got shape {xi.shape}")
        return xi

    def quadratic_form(self, xi) -> float:
        """Evaluate ``xi^T P xi``."""
        xi = self._check_dim(xi)
        return float(xi @ self._P @ xi)

    def contains(self, xi, margin: float = 1e-10) -> ConePosition:
        """Classify ``xi`` relative to the cone.

        The margin is relative (scaled by ``||xi||^2``) so that the
        classification is invariant under rescaling of ``xi``.
        """
        xi = self._check_dim(xi)
        q = float(xi @ self._P @ xi)
        scale = float(xi @ xi)
        if q < -margin * scale:
            return ConePosition(Region.INTERIOR, q)
        if q > margin * scale:
            return ConePosition(Region.EXTERIOR, q)
        return ConePosition(Region.BOUNDARY, q)

    def competitive_contains(self, v_plus, xi, eig_tol: float = 1e-8) -> bool:
        """Membership in the convex cone ``{xi : q(xi) >= 0, <xi, v+> >= 0}``.

        ``v_plus`` must be an eigenvector of P for a positive eigenvalue
        (validated to ``eig_tol``).
        """
        v_plus = self._check_dim(v_plus)
        xi = self._check_dim(xi)
        nv = float(np.linalg.norm(v_plus))
        if nv == 0.0:
            raise DimensionError("v_plus must be nonzero")
        lam = float(v_plus @ self._P @ v_plus) / nv**2
        resid = float(np.linalg.norm(self._P @ v_plus - lam * v_plus))
        if lam <= 0.0 or resid > eig_tol * max(1.0, float(np.max(np.abs(self._P)))) * nv:
            raise DegenerateConeError(
                "v_plus is not an eigenvector of P for a positive eigenvalue "
                f"(Rayleigh quotient {lam:.3e}, residual {resid:.3e})"
            )
        return self.quadratic_form(xi) >= 0.0 and float(xi @ v_plus) >= 0.0

    def sample_directions(
        self,
        count: int,
        stratum: Region,
        seed: int,
        boundary_tol: float = 1e-12,
        max_tries: int = 10000,
    ) -> list[np.ndarray]:
        """Draw unit vectors lying in the requested stratum of the cone.

        Boundary vectors are produced by sampling the unit sphere and
        projecting onto the quadric ``q = 0`` along the P-gradient direction;
        interior vectors by rejection sampling.  Deterministic for a fixed
        seed.
        """
        if count <= 0:
            raise ValueError("count must be positive")
        if stratum is Region.INTERIOR and self.rank == 0:
            raise EmptyStratumError("cone of rank 0 has no interior directions")
        if stratum is Region.EXTERIOR and self.rank == self.n:
            raise EmptyStratumError("cone of full rank has no exterior directions")
        rng = np.random.default_rng(seed)
        out: list[np.ndarray] = []
        tries = 0
        while len(out) < count:
            tries += 1
            if tries > max_tries:
                raise EmptyStratumError(
                    f"could not sample {count} {stratum.value} directions "
                    f"in {max_tries} attempts"
                )
            u = rng.normal(size=self.n)
            nu = np.linalg.norm(u)
            if nu < 1e-12:
                continue
            u /= nu
            if stratum is Region.BOUNDARY:
                v = self._project_to_boundary(u)
                if v is None:
                    continue
                if abs(self.quadratic_form(v)) > boundary_tol:
                    continue
                out.append(v)
            else:
                if self.contains(u).region is stratum:
                    out.append(u)
        return out

    def _project_to_boundary(self, u: np.ndarray) -> np.ndarray | None:
        # Move along the form's gradient line u + t*(P u) and solve the exact
        # quadratic q(u + t P u) = 0; pick the root of smaller magnitude.
        d = self._P @ u
        a = float(d @ self._P @ d)
        b = 2.0 * float(d @ d)  # u^T P d = ||P u||^2
        c = float(u @ self._P @ u)
        if c == 0.0:
            return u
        if abs(a) < 1e-14 * max(1.0, abs(b)):
            t = -c / b
        else:
            disc = b * b - 4.0 * a * c
            if disc < 0.0:
                return None
            sq = np.sqrt(disc)
            t1 = (-b + sq) / (2.0 * a)
            t2 = (-b - sq) / (2.0 * a)
            t = t1 if abs(t1) <= abs(t2) else t2
        v = u + t * d
        nv = np.linalg.norm(v)
        if nv < 0.1:
            return None
        v = v / nv
        # one Newton polish against roundoff from the normalization
        g = 2.0 * (self._P @ v)
        q = float(v @ self._P @ v)
        dq = float(g @ g) / 2.0
        if dq > 0.0:
            v = v - (q / (2.0 * dq)) * g
            v /= np.linalg.norm(v)
        return v


# Functional aliases matching the operation-style API used by the CLI layers.

def quadratic_form(cone: QuadraticCone, xi) -> float:
    return cone.quadratic_form(xi)


def contains(cone: QuadraticCone, xi, margin: float = 1e-10) -> ConePosition:
    return cone.contains(xi, margin)


def cone_rank(cone: QuadraticCone) -> int:
    return cone.rank


def competitive_cone_contains(cone: QuadraticCone, v_plus, xi) -> bool:
    return cone.competitive_contains(v_plus, xi)


def sample_cone_directions(
    cone: QuadraticCone, count: int, stratum: Region, seed: int, **kw
) -> list[np.ndarray]:
    return cone.sample_directions(count, stratum, seed, **kw)
