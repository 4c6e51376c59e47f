"""Brute-force matrix oracle.

Nothing here touches the analytic level formulas: spectra come from dense
diagonalisation, thermal states are assembled as matrices, marginals come
from an explicit partial trace and heats are traces of H against rho.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, ParameterError
from .spectra import DenseHamiltonian, SpinMagnitude, as_spin, hamiltonian_matrix, zeeman_matrix
from .thermo import CycleReport, log_normalize, operation_mode

RESIDUAL_TOL = 1e-10
ORTHO_TOL = 1e-12


def diagonalize(H):
    """Ascending eigenvalues and orthonormal eigenvector columns of a real symmetric matrix."""
    A = H.matrix if isinstance(H, DenseHamiltonian) else np.asarray(H, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    scale = max(np.abs(A).max(), 1.0)
    if np.abs(A - A.T).max() > 1e-14 * scale:
        raise ParameterError("matrix is not symmetric")
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    norm = np.linalg.norm(A, 2) if A.size else 0.0
    resid = np.linalg.norm(A @ V - V * w, axis=0)
    if np.any(resid > RESIDUAL_TOL * max(norm, 1.0)):
        raise ConvergenceError(f"eigenpair residual {resid.max():.3g} exceeds bound")
    if np.abs(V.T @ V - np.eye(len(w))).max() > ORTHO_TOL:
        raise ConvergenceError("eigenvectors are not orthonormal")
    return w, V


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Real symmetric thermal state; ``log_matrix`` stays finite when populations underflow."""

    matrix: np.ndarray
    log_matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def thermal_density_matrix(H, T: float) -> DensityMatrix:
    if not T > 0:
        raise ParameterError(f"temperature must be positive, got {T}")
    A = H.matrix if isinstance(H, DenseHamiltonian) else np.asarray(H, dtype=float)
    w, V = diagonalize(A)
    log_p = log_normalize(-w / T)
    p = np.exp(log_p)
    rho = (V * p) @ V.T
    rho = 0.5 * (rho + rho.T)
    log_rho = (V * log_p) @ V.T
    return DensityMatrix(rho, log_rho)


def reduced_matrix(rho, keep: str, s) -> np.ndarray:
    """Partial trace in the (half (x) spin) product basis, both factors m-descending."""
    spin = as_spin(s)
    M = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=float)
    d = spin.multiplicity
    if M.shape != (2 * d, 2 * d):
        raise DimensionError(f"expected a {2 * d}x{2 * d} matrix for s={spin}, got {M.shape}")
    R = M.reshape(2, d, 2, d)
    if keep == "half":
        return np.einsum("ajbj->ab", R)
    if keep == "spin":
        return np.einsum("iaib->ab", R)
    raise ParameterError(f"keep must be 'half' or 'spin', got {keep!r}")


def partial_trace(rho, keep: str, s) -> np.ndarray:
    """Diagonal of the reduced state, reordered so the local ground level comes first."""
    red = reduced_matrix(rho, keep, s)
    # descending m -> ascending Zeeman energy for B > 0
    return np.diag(red)[::-1].copy()


def _hamiltonian(spin: SpinMagnitude, coupled: bool, B: float, J: float):
    return hamiltonian_matrix(spin, B, J) if coupled else zeeman_matrix(spin, B)


def common_eigenbasis(H1, H2):
    """Orthonormal basis diagonalising two commuting symmetric matrices.

    A generic combination has no accidental degeneracies beyond those shared
    by both operators, so its eigenvectors diagonalise each one.
    """
    A1 = H1.matrix if isinstance(H1, DenseHamiltonian) else np.asarray(H1, dtype=float)
    A2 = H2.matrix if isinstance(H2, DenseHamiltonian) else np.asarray(H2, dtype=float)
    scale = max(np.abs(A1).max(), np.abs(A2).max(), 1.0)
    if np.abs(A1 @ A2 - A2 @ A1).max() > 1e-10 * scale ** 2:
        raise ParameterError("matrices do not commute")
    _, V = diagonalize(A1 + 0.6180339887498949 * A2)
    out = []
    for A in (A1, A2):
        D = V.T @ A @ V
        off = D - np.diag(np.diag(D))
        if np.abs(off).max() > 1e-10 * scale:
            raise ConvergenceError("combined eigenbasis does not diagonalise both matrices")
        out.append(np.diag(D).copy())
    return V, out[0], out[1]


def brute_force_cycle(s, coupled: bool, B1: float, B2: float, T1: float, T2: float, J: float = 0.0) -> CycleReport:
    """Full cycle report from dense diagonalisation and matrix traces.

    The adiabatic strokes keep populations per eigenvector.  Both Hamiltonians
    share eigenvectors (Zeeman and exchange terms commute), so the state after
    each stroke equals the other bath's thermal matrix and
    Q1 = Tr[H1 (rho1 - rho2)], Q2 = Tr[H2 (rho2 - rho1)].  The difference
    rho1 - rho2 is assembled from population differences in the shared basis
    and the energies are measured from the dominant eigenvector, which keeps
    the traces accurate when populations are nearly frozen.
    """
    spin = as_spin(s)
    if not T1 > T2 > 0:
        raise ParameterError(f"need T1 > T2 > 0, got T1={T1}, T2={T2}")
    H1 = _hamiltonian(spin, coupled, B1, J).matrix
    H2 = _hamiltonian(spin, coupled, B2, J).matrix
    V, w1, w2 = common_eigenbasis(H1, H2)
    lp1, lp2 = log_normalize(-w1 / T1), log_normalize(-w2 / T2)
    p1, p2 = np.exp(lp1), np.exp(lp2)
    d = p1 - p2
    ref = int(np.argmax(p1 + p2))
    d[ref] = -(d.sum() - d[ref])
    diff = (V * d) @ V.T
    eye = np.eye(len(d))
    K1 = H1 - w1[ref] * eye
    K2 = H2 - w2[ref] * eye
    Q1 = float(np.trace(K1 @ diff))
    Q2 = float(-np.trace(K2 @ diff))
    W = float(np.trace((K1 - K2) @ diff))
    rho1, rho2 = (V * p1) @ V.T, (V * p2) @ V.T
    log1, log2 = (V * lp1) @ V.T, (V * lp2) @ V.T
    S1 = float(-np.trace(rho1 @ log1))
    S2 = float(-np.trace(rho2 @ log2))
    D_pp = float(np.trace(rho1 @ (log1 - log2)))
    D_ppr = float(np.trace(rho2 @ (log2 - log1)))
    return CycleReport(
        Q1=Q1, Q2=Q2, W=W, eta=W / Q1 if Q1 > 0 else None,
        S1=S1, S2=S2, D_pp=D_pp, D_ppr=D_ppr,
        dS_tot=-Q2 / T2 - Q1 / T1,
        mode=operation_mode(Q1, Q2, W),
        T1=float(T1), T2=float(T2),
    )
