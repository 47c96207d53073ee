"""Truth-value semantics for formulas over a fixed finite-dimensional space.

A formula denotes a projection, built compositionally from the spectral
projections of the observables it mentions.  Truth in a state ``psi`` means
``psi`` lies in the range of that projection; the probability reading is
the Born weight ``<psi|P|psi>``.  Equality of observables, joint
determinateness and joint-probability-distribution existence are all
state-dependent notions defined through the same lattice operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import lattice
from .errors import DimMismatchError, UnboundObservableError
from .lattice import Projection
from .numlin import DEFAULT_TOL, ToleranceConfig, as_state
from .qlang import And, Atom, Com, Equal, Formula, Iff, Not, Or, Sasaki
from .spectral import (
    Observable,
    born_distribution,
    cluster_indices,
    spectral_family,
    spectral_projection,
)


class Environment:
    """Immutable name -> Observable binding with a common dimension."""

    __slots__ = ("_bindings", "dim")

    def __init__(self, bindings: Mapping[str, Observable]):
        if not bindings:
            raise ValueError("environment needs at least one observable")
        items = dict(bindings)
        dims = {obs.dim for obs in items.values()}
        if len(dims) != 1:
            raise DimMismatchError(f"observables span several dimensions: {sorted(dims)}")
        self._bindings = items
        self.dim = dims.pop()

    def __getitem__(self, obs_id: str) -> Observable:
        try:
            return self._bindings[obs_id]
        except KeyError:
            raise UnboundObservableError(f"no observable bound to {obs_id!r}") from None

    def __contains__(self, obs_id: str) -> bool:
        return obs_id in self._bindings

    def names(self) -> tuple[str, ...]:
        return tuple(self._bindings)


@dataclass(frozen=True)
class TruthReport:
    projection: Projection
    probability: float
    holds: bool


def truth_projection(formula: Formula, env: Environment, *,
                     tol: ToleranceConfig = DEFAULT_TOL) -> Projection:
    """The projection denoted by ``formula`` under ``env``."""
    if isinstance(formula, Atom):
        return spectral_projection(env[formula.obs_id], formula.values, tol=tol)
    if isinstance(formula, Not):
        return lattice.complement(truth_projection(formula.operand, env, tol=tol))
    if isinstance(formula, And):
        return lattice.meet(truth_projection(formula.left, env, tol=tol),
                            truth_projection(formula.right, env, tol=tol), tol=tol)
    if isinstance(formula, Or):
        return lattice.join(truth_projection(formula.left, env, tol=tol),
                            truth_projection(formula.right, env, tol=tol), tol=tol)
    if isinstance(formula, Sasaki):
        return lattice.sasaki(truth_projection(formula.left, env, tol=tol),
                              truth_projection(formula.right, env, tol=tol), tol=tol)
    if isinstance(formula, Iff):
        return lattice.biconditional(truth_projection(formula.left, env, tol=tol),
                                     truth_projection(formula.right, env, tol=tol), tol=tol)
    if isinstance(formula, Equal):
        return value_identity(env[formula.left_id], env[formula.right_id], tol=tol)
    if isinstance(formula, Com):
        projections = []
        for name in formula.obs_ids:
            projections.extend(spectral_family(env[name], tol=tol).projections)
        return lattice.com_family(projections, tol=tol)
    raise TypeError(f"not a formula node: {formula!r}")


def holds_in(formula: Formula, env: Environment, psi: np.ndarray, *,
             tol: ToleranceConfig = DEFAULT_TOL) -> TruthReport:
    """Evaluate ``formula`` at the state ``psi``."""
    psi = as_state(psi, tol=tol)
    if psi.shape[0] != env.dim:
        raise DimMismatchError(f"state dim {psi.shape[0]} != environment dim {env.dim}")
    proj = truth_projection(formula, env, tol=tol)
    image = proj.apply(psi)
    probability = float(np.clip(np.real(np.vdot(psi, image)), 0.0, 1.0))
    holds = bool(np.linalg.norm(image - psi) <= tol.eq_tol)
    return TruthReport(projection=proj, probability=probability, holds=holds)


def _merged_spectrum(a: Observable, b: Observable, tol: ToleranceConfig):
    """Cluster spec(a) ∪ spec(b); yield (value, proj_in_a, proj_in_b) triples.

    A value held by only one observable pairs with the zero projection on
    the other side, so it counts against identity.
    """
    fam_a = spectral_family(a, tol=tol)
    fam_b = spectral_family(b, tol=tol)
    tagged = sorted(
        [(lam, 0, proj) for lam, proj in fam_a.entries]
        + [(lam, 1, proj) for lam, proj in fam_b.entries],
        key=lambda item: item[0],
    )
    values = [item[0] for item in tagged]
    zero = Projection.zero(a.dim)
    for block in cluster_indices(values, tol.eig_cluster_tol):
        group = tagged[block]
        lam = float(np.mean([item[0] for item in group]))
        proj_a = zero
        proj_b = zero
        for _, side, proj in group:
            # Same-side duplicates inside one cluster can only arise from
            # chained near-degeneracies; orthogonal ranges, so adding is safe.
            if side == 0:
                proj_a = proj if proj_a.is_zero else Projection(proj_a.matrix + proj.matrix, tol=tol)
            else:
                proj_b = proj if proj_b.is_zero else Projection(proj_b.matrix + proj.matrix, tol=tol)
        yield lam, proj_a, proj_b


def value_identity(a: Observable, b: Observable, *,
                   tol: ToleranceConfig = DEFAULT_TOL) -> Projection:
    """The projection expressing "a and b hold identical values"."""
    if a.dim != b.dim:
        raise DimMismatchError(f"dims differ: {a.dim} vs {b.dim}")
    result = Projection.identity(a.dim)
    for _, proj_a, proj_b in _merged_spectrum(a, b, tol):
        result = lattice.meet(result, lattice.biconditional(proj_a, proj_b, tol=tol), tol=tol)
    return result


def perfectly_correlated(a: Observable, b: Observable, psi: np.ndarray, *,
                         tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Direct vector test: every spectral projection acts identically on psi.

    Independent of the lattice route; used as the oracle for equality truth.
    """
    if a.dim != b.dim:
        raise DimMismatchError(f"dims differ: {a.dim} vs {b.dim}")
    psi = as_state(psi, tol=tol)
    if psi.shape[0] != a.dim:
        raise DimMismatchError(f"state dim {psi.shape[0]} != observable dim {a.dim}")
    for _, proj_a, proj_b in _merged_spectrum(a, b, tol):
        if np.linalg.norm(proj_a.apply(psi) - proj_b.apply(psi)) > tol.eq_tol:
            return False
    return True


def jointly_determinate(observables: list[Observable], psi: np.ndarray, *,
                        tol: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, Projection]:
    """Whether all listed observables have simultaneous values at psi.

    Returns the flag together with the projection onto the largest subspace
    where the full spectral family behaves classically.
    """
    if len(observables) < 2:
        raise ValueError("joint determinateness needs at least two observables")
    dims = {obs.dim for obs in observables}
    if len(dims) != 1:
        raise DimMismatchError(f"observables span several dimensions: {sorted(dims)}")
    psi = as_state(psi, tol=tol)
    if psi.shape[0] != dims.pop():
        raise DimMismatchError("state dim differs from observable dim")
    projections = []
    for obs in observables:
        projections.extend(spectral_family(obs, tol=tol).projections)
    proj = lattice.com_family(projections, tol=tol)
    return proj.contains(psi, tol=tol), proj


def nowhere_commuting(a: Observable, b: Observable, *,
                      tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when no state makes a and b jointly determinate."""
    if a.dim != b.dim:
        raise DimMismatchError(f"dims differ: {a.dim} vs {b.dim}")
    projections = list(spectral_family(a, tol=tol).projections)
    projections.extend(spectral_family(b, tol=tol).projections)
    return lattice.com_family(projections, tol=tol).rank == 0


def jpd_exists(a: Observable, b: Observable, psi: np.ndarray, *,
               tol: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, dict[tuple[float, float], float]]:
    """Meet-based joint-distribution candidate and whether it is a genuine JPD.

    The candidate weights are Born weights of pairwise meets; existence
    requires normalization and both marginals to reproduce the single-
    observable Born distributions.
    """
    if a.dim != b.dim:
        raise DimMismatchError(f"dims differ: {a.dim} vs {b.dim}")
    psi = as_state(psi, tol=tol)
    if psi.shape[0] != a.dim:
        raise DimMismatchError(f"state dim {psi.shape[0]} != observable dim {a.dim}")
    fam_a = spectral_family(a, tol=tol)
    fam_b = spectral_family(b, tol=tol)
    candidate: dict[tuple[float, float], float] = {}
    for lam, proj_a in fam_a.entries:
        for mu, proj_b in fam_b.entries:
            both = lattice.meet(proj_a, proj_b, tol=tol)
            weight = float(np.clip(np.real(np.vdot(psi, both.apply(psi))), 0.0, 1.0))
            candidate[(lam, mu)] = weight
    total = sum(candidate.values())
    born_a = born_distribution(a, psi, tol=tol)
    born_b = born_distribution(b, psi, tol=tol)
    marginals_ok = all(
        abs(sum(candidate[(lam, mu)] for mu in fam_b.eigenvalues) - born_a[lam]) <= tol.eq_tol
        for lam in fam_a.eigenvalues
    ) and all(
        abs(sum(candidate[(lam, mu)] for lam in fam_a.eigenvalues) - born_b[mu]) <= tol.eq_tol
        for mu in fam_b.eigenvalues
    )
    exists = abs(total - 1.0) <= tol.eq_tol and marginals_ok
    return exists, candidate
