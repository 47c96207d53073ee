"""Observables as Hermitian matrices with spectral families.

Degenerate eigenvalues are merged by single-linkage clustering at
``eig_cluster_tol`` so numerical jitter cannot split a spectral
projection.  Value lookups (``spectral_projection``, value maps) also
match at ``eig_cluster_tol``, which lets file-supplied values like 1.0
find computed eigenvalues like 0.9999999999.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

import numpy as np

from .errors import DimMismatchError, NotHermitianError, UnmappedEigenvalueError
from .lattice import Projection
from .numlin import DEFAULT_TOL, ToleranceConfig, as_square, eigh, op_norm


class Observable:
    """A Hermitian operator with a text label."""

    __slots__ = ("matrix", "name")

    def __init__(self, matrix, name: str = "A", tol: ToleranceConfig = DEFAULT_TOL):
        m = as_square(matrix)
        if op_norm(m - m.conj().T) > tol.eq_tol * max(1.0, op_norm(m)):
            raise NotHermitianError(f"observable {name!r} is not Hermitian within eq_tol")
        m = np.array(m, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "name", str(name))

    def __setattr__(self, name, value):
        raise AttributeError("Observable is immutable")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, psi) -> float:
        v = np.asarray(psi, dtype=complex).reshape(-1)
        return float(np.real(v.conj() @ (self.matrix @ v)))

    def std_dev(self, psi) -> float:
        v = np.asarray(psi, dtype=complex).reshape(-1)
        mean = self.expectation(v)
        second = float(np.real(v.conj() @ (self.matrix @ (self.matrix @ v))))
        return float(np.sqrt(max(second - mean * mean, 0.0)))

    def __repr__(self):
        return f"Observable({self.name!r}, dim={self.dim})"


class SpectralFamily:
    """Distinct eigenvalues of an observable with their spectral projections.

    Entries are sorted ascending, pairwise separated by more than
    eig_cluster_tol, with mutually orthogonal projections summing to the
    identity.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[tuple[float, Projection]]):
        object.__setattr__(self, "entries", tuple((float(v), p) for v, p in entries))

    def __setattr__(self, name, value):
        raise AttributeError("SpectralFamily is immutable")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.entries)

    @property
    def projections(self) -> tuple[Projection, ...]:
        return tuple(p for _, p in self.entries)

    @property
    def dim(self) -> int:
        return self.entries[0][1].dim


def cluster_indices(values: np.ndarray, gap: float) -> list[slice]:
    """Single-linkage clusters of an ascending 1-d array: split where the gap exceeds ``gap``."""
    slices = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > gap:
            slices.append(slice(start, i))
            start = i
    if len(values):
        slices.append(slice(start, len(values)))
    return slices


def spectral_family(obs: Observable, tol: ToleranceConfig = DEFAULT_TOL) -> SpectralFamily:
    """Spectral resolution of an observable, degeneracies merged."""
    w, v = eigh(obs.matrix, tol)
    entries = []
    for sl in cluster_indices(w, tol.eig_cluster_tol):
        cols = v[:, sl]
        entries.append((float(np.mean(w[sl])), Projection._trusted(cols @ cols.conj().T)))
    return SpectralFamily(entries)


def spectral_projection(
    obs: Observable, values: Iterable[float], tol: ToleranceConfig = DEFAULT_TOL
) -> Projection:
    """Projection onto the eigenspaces whose eigenvalue lies within
    eig_cluster_tol of some element of ``values``; zero if none match."""
    wanted = [float(x) for x in values]
    family = spectral_family(obs, tol)
    total = np.zeros((obs.dim, obs.dim), dtype=complex)
    for eigval, proj in family:
        if any(abs(eigval - x) <= tol.eig_cluster_tol for x in wanted):
            total = total + proj.matrix
    return Projection._trusted(total)


def apply_value_map(
    obs: Observable, value_map: Mapping[float, float], tol: ToleranceConfig = DEFAULT_TOL
) -> Observable:
    """Post-process an observable through a finite map on its spectrum.

    Every eigenvalue must match a key of ``value_map`` within
    eig_cluster_tol; eigenspaces whose images coincide merge in the
    result's spectral family.
    """
    family = spectral_family(obs, tol)
    keys = [float(k) for k in value_map.keys()]
    vals = [float(v) for v in value_map.values()]
    out = np.zeros((obs.dim, obs.dim), dtype=complex)
    for eigval, proj in family:
        matches = [i for i, k in enumerate(keys) if abs(eigval - k) <= tol.eig_cluster_tol]
        if not matches:
            raise UnmappedEigenvalueError(
                f"value map is undefined on eigenvalue {eigval!r} of {obs.name!r}"
            )
        out = out + vals[matches[0]] * proj.matrix
    return Observable(out, name=f"f({obs.name})", tol=tol)


def born_distribution(
    obs: Observable, psi, tol: ToleranceConfig = DEFAULT_TOL
) -> dict[float, float]:
    """Outcome distribution p(λ) = ||E(λ) ψ||² of a pure state."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.size != obs.dim:
        raise DimMismatchError(f"state dim {v.size} vs observable dim {obs.dim}")
    family = spectral_family(obs, tol)
    return {
        eigval: float(np.linalg.norm(proj.matrix @ v) ** 2) for eigval, proj in family
    }
