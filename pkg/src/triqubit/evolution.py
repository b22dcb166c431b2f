"""Exact and closed-form unitary evolution, reduced states, Kraus pairs and
probe measurement with post-selection.

The exact path diagonalizes the total 8x8 Hamiltonian once per plan. When the
two pair Hamiltonians commute there is also a closed-form fast path: the total
Hamiltonian is block diagonal over the probe-axis eigenprojectors, and within
each block the body qubits see plain axis rotations, so no eigensolver is
needed at all. With all single-body terms zero this reduces to pure phases in
the joint interaction eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hamiltonians import (
    CommutingForm,
    NotCommutingError,
    NotRankOneError,
    PauliPairHamiltonian,
    canonical_commuting_form,
    commutator_norm,
)
from .linalg import I2, axis_sigma, kron, partial_trace_qubit
from .states import axis_eigenbasis, basis_matrix
from .tolerances import DEGENERATE_OUTCOME_PROB, STRUCTURAL_TOL
from .measures import density


class NoFastpathError(RuntimeError):
    """The plan has no commuting fast path."""


class NonFactorizedInitialStateError(ValueError):
    """The state does not factorize as (qubits 1,2) x (qubit 3)."""


@dataclass(frozen=True)
class CommutingFastpath:
    """Closed-form evolution data for a commuting pair: both canonical forms."""

    form13: CommutingForm
    form23: CommutingForm

    @property
    def probe_axis(self):
        return self.form13.probe_axis

    @property
    def strengths(self) -> tuple[float, float]:
        return self.form13.coupling_strength, self.form23.coupling_strength

    @property
    def body_axes(self):
        return self.form13.coupling_axis_self, self.form23.coupling_axis_self


@dataclass
class EvolutionPlan:
    """Total Hamiltonian with its spectral data and optional commuting fast path."""

    h13: PauliPairHamiltonian
    h23: PauliPairHamiltonian
    h_total: np.ndarray
    fastpath: CommutingFastpath | None
    commutator_norm: float
    fastpath_error: str | None = None
    _eig: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False, compare=False)

    @property
    def commuting(self) -> bool:
        return self.fastpath is not None

    def _spectral(self) -> tuple[np.ndarray, np.ndarray]:
        if self._eig is None:
            self._eig = np.linalg.eigh(self.h_total)
        return self._eig

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._spectral()[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._spectral()[1]

    def unitary(self, t: float) -> np.ndarray:
        w, v = self._spectral()
        return (v * np.exp(-1j * w * t)) @ v.conj().T


def make_plan(h13: PauliPairHamiltonian, h23: PauliPairHamiltonian) -> EvolutionPlan:
    """Build an evolution plan, attaching the fast path when the pair commutes."""
    h_total = h13.to_matrix() + h23.to_matrix()
    fastpath, fastpath_error = None, None
    try:
        form13, form23 = canonical_commuting_form(h13, h23)
        fastpath = CommutingFastpath(form13, form23)
    except (NotCommutingError, NotRankOneError) as exc:
        fastpath_error = str(exc)
    return EvolutionPlan(
        h13=h13,
        h23=h23,
        h_total=h_total,
        fastpath=fastpath,
        commutator_norm=commutator_norm(h13, h23),
        fastpath_error=fastpath_error,
    )


def evolve_exact(plan: EvolutionPlan, psi0, t: float) -> np.ndarray:
    """Spectral matrix-exponential evolution; preserves the norm."""
    psi0 = np.asarray(psi0, dtype=complex).reshape(8)
    return plan.unitary(t) @ psi0


def _axis_rotation(vec: np.ndarray, t: float) -> np.ndarray:
    """exp(-i t vec.sigma) in closed form."""
    n = float(np.linalg.norm(vec))
    if n == 0.0 or t == 0.0:
        return I2.copy()
    return np.cos(n * t) * I2 - 1j * np.sin(n * t) * axis_sigma(vec)


def fastpath_unitary(fastpath: CommutingFastpath, t: float) -> np.ndarray:
    """Closed-form U(t) for the full commuting Hamiltonian (entangling and local terms).

    Block decomposition over the probe-axis eigenprojectors: in the sector
    with probe eigenvalue m, qubit k rotates about m * (coupling strength) *
    (coupling axis) + (local strength) * (local axis).
    """
    f13, f23 = fastpath.form13, fastpath.form23
    plus, minus = axis_eigenbasis(fastpath.probe_axis)
    probe_local = f13.local_probe_strength + f23.local_probe_strength
    u = np.zeros((8, 8), dtype=complex)
    for m, probe_vec in ((1.0, plus), (-1.0, minus)):
        vec1 = m * f13.coupling_strength * np.asarray(f13.coupling_axis_self) + (
            f13.local_self_strength * np.asarray(f13.local_self_axis)
        )
        vec2 = m * f23.coupling_strength * np.asarray(f23.coupling_axis_self) + (
            f23.local_self_strength * np.asarray(f23.local_self_axis)
        )
        phase = np.exp(-1j * m * probe_local * t)
        u += phase * kron(_axis_rotation(vec1, t), _axis_rotation(vec2, t), np.outer(probe_vec, probe_vec.conj()))
    return u


def evolve_fastpath(plan: EvolutionPlan, psi0, t: float) -> np.ndarray:
    """Closed-form evolution; agrees with ``evolve_exact`` to the spectral tolerance."""
    if plan.fastpath is None:
        raise NoFastpathError("the pair Hamiltonians do not admit a commuting fast path")
    psi0 = np.asarray(psi0, dtype=complex).reshape(8)
    return fastpath_unitary(plan.fastpath, t) @ psi0


def evolve(plan: EvolutionPlan, psi0, t: float, fastpath: str = "auto") -> np.ndarray:
    """Evolve with mode 'auto' (fast path when available), 'on' or 'off'."""
    if fastpath not in ("auto", "on", "off"):
        raise ValueError(f"fastpath mode must be auto, on or off, got {fastpath!r}")
    if fastpath == "on" or (fastpath == "auto" and plan.fastpath is not None):
        return evolve_fastpath(plan, psi0, t)
    return evolve_exact(plan, psi0, t)


def closed_form_phases(fastpath: CommutingFastpath, t: float) -> np.ndarray:
    """The eight phases exp(-i (m1 m3 |a| + m2 m3 |b|) t) of the entangling evolution."""
    s13, s23 = fastpath.strengths
    phases = np.empty(8, dtype=complex)
    for idx in range(8):
        m1 = 1.0 - 2.0 * ((idx >> 2) & 1)
        m2 = 1.0 - 2.0 * ((idx >> 1) & 1)
        m3 = 1.0 - 2.0 * (idx & 1)
        phases[idx] = np.exp(-1j * (m1 * m3 * s13 + m2 * m3 * s23) * t)
    return phases


def evolve_commuting_closed_form(fastpath: CommutingFastpath, psi0, t: float) -> np.ndarray:
    """Entangling-only closed form: phase multiplication in the interaction eigenbasis.

    Single-body terms of the Hamiltonians are not applied here; this matches
    the exact evolution of the two entangling pieces alone.
    """
    if fastpath is None:
        raise NoFastpathError("no commuting fast path available")
    psi0 = np.asarray(psi0, dtype=complex).reshape(8)
    axes = (*fastpath.body_axes, fastpath.probe_axis)
    b = basis_matrix(axes)
    amps = b.conj().T @ psi0
    amps *= closed_form_phases(fastpath, t)
    return b @ amps


def reduced_state_12(psi) -> np.ndarray:
    """4x4 reduced density matrix of qubits 1 and 2."""
    psi = np.asarray(psi, dtype=complex).reshape(8)
    n2 = float(np.vdot(psi, psi).real)
    if abs(n2 - 1.0) > 1e-10:
        raise ValueError(f"state must be normalized: |norm^2 - 1| = {abs(n2 - 1.0):.3e}")
    rho = partial_trace_qubit(density(psi), 3)
    return (rho + rho.conj().T) / 2


def factor_probe(psi) -> tuple[np.ndarray, np.ndarray]:
    """Split a state as |chi>_12 x |phi>_3, or raise NonFactorizedInitialStateError."""
    psi = np.asarray(psi, dtype=complex).reshape(8)
    m = psi.reshape(4, 2)
    u, s, vh = np.linalg.svd(m)
    if s[1] > 1e-10 * max(s[0], 1e-300):
        raise NonFactorizedInitialStateError(
            f"qubits 1,2 are entangled with qubit 3 (second Schmidt coefficient {s[1]:.3e})"
        )
    return u[:, 0] * s[0], vh[0, :].copy()


@dataclass(frozen=True)
class KrausPair:
    """Conditional evolution operators of qubits 1,2 for the two probe outcomes."""

    a_plus: np.ndarray
    a_minus: np.ndarray

    def apply(self, rho12: np.ndarray) -> np.ndarray:
        return sum(a @ rho12 @ a.conj().T for a in (self.a_plus, self.a_minus))

    def completeness_defect(self) -> float:
        s = sum(a.conj().T @ a for a in (self.a_plus, self.a_minus))
        return float(np.max(np.abs(s - np.eye(4))))


def kraus_pair(plan: EvolutionPlan, probe_state, t: float, basis=None) -> KrausPair:
    """Kraus operators A_k = <b_k| U(t) |phi>_3 for an initial probe state |phi>.

    Valid whenever the initial state factorizes as |chi>_12 x |phi>_3; then
    rho_12(t) = sum_k A_k |chi><chi| A_k† for every |chi>. ``basis`` defaults
    to the probe-axis eigenbasis of the commuting fast path and must be given
    explicitly for noncommuting plans.
    """
    probe_state = np.asarray(probe_state, dtype=complex).reshape(2)
    if abs(float(np.vdot(probe_state, probe_state).real) - 1.0) > STRUCTURAL_TOL:
        raise ValueError("probe state must be normalized")
    if basis is None:
        if plan.fastpath is None:
            raise ValueError("a measurement basis is required for noncommuting plans")
        basis = axis_eigenbasis(plan.fastpath.probe_axis)
    b_plus, b_minus = (np.asarray(b, dtype=complex).reshape(2) for b in basis)
    u = plan.unitary(t).reshape(4, 2, 4, 2)
    a_plus = np.einsum("i,aibj,j->ab", b_plus.conj(), u, probe_state)
    a_minus = np.einsum("i,aibj,j->ab", b_minus.conj(), u, probe_state)
    return KrausPair(a_plus=a_plus, a_minus=a_minus)


@dataclass(frozen=True)
class MeasurementOutcome:
    """One projective outcome on qubit 3: label, Born probability, conditional state.

    ``state`` is the normalized conditional pure state of qubits 1,2, or None
    when the probability is below the degenerate-outcome threshold.
    """

    label: str
    probability: float
    state: np.ndarray | None

    @property
    def degenerate(self) -> bool:
        return self.state is None


def measure_probe(psi, basis, labels=("plus", "minus")) -> list[MeasurementOutcome]:
    """Projective measurement of qubit 3 in an orthonormal basis pair."""
    psi = np.asarray(psi, dtype=complex).reshape(8)
    b0, b1 = (np.asarray(b, dtype=complex).reshape(2) for b in basis)
    gram = np.array([[np.vdot(b0, b0), np.vdot(b0, b1)], [np.vdot(b1, b0), np.vdot(b1, b1)]])
    if np.max(np.abs(gram - np.eye(2))) > STRUCTURAL_TOL:
        raise ValueError("measurement basis must be orthonormal")
    m = psi.reshape(4, 2)
    outcomes = []
    for label, bvec in zip(labels, (b0, b1)):
        phi = m @ bvec.conj()
        p = float(np.vdot(phi, phi).real)
        state = phi / np.sqrt(p) if p >= DEGENERATE_OUTCOME_PROB else None
        outcomes.append(MeasurementOutcome(label=label, probability=p, state=state))
    return outcomes


def v_operators(cf: CommutingForm, rotation, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Branch unitaries V_± = exp(∓i strength t sigma_axis) R for one canonical form."""
    r = rotation.matrix()
    vec = cf.coupling_strength * np.asarray(cf.coupling_axis_self)
    return _axis_rotation(vec, t) @ r, _axis_rotation(-vec, t) @ r
