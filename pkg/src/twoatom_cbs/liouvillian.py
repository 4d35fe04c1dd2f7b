"""Generators of the two-atom master equation.

Assembles the linear equation of motion d<Q>/dt = (A + V)<Q> + j for the
255 two-atom basis-operator expectation values: A collects the two
independent driven-atom generators, V the far-field photon-exchange
coupling (first order in the complex coupling g), and j the inhomogeneity
produced by the constant trace element.

Frequencies are in units of gamma (half the spontaneous decay rate),
lengths in units of 1/k0.  The quantization axis is along the laser wave
vector; the laser drives |1> <-> |4> with positive-helicity polarization
and the backscattered channel with flipped helicity comes from |1> <-> |2>.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .basis import (
    N_SINGLE,
    N_TWO,
    TRACE_ELEMENT_VALUE,
    sigma,
    two_atom_basis_flat,
)

# helicity unit vectors, spherical convention
E_PLUS = np.array([-1.0, -1.0j, 0.0]) / np.sqrt(2)
E_MINUS = np.array([1.0, -1.0j, 0.0]) / np.sqrt(2)
E_ZERO = np.array([0.0, 0.0, 1.0], dtype=complex)
HELICITY = (-1, 0, 1)
_HELICITY_VECS = {-1: E_MINUS, 0: E_ZERO, 1: E_PLUS}

# components of the dipole lowering operator D = sum_q e_q d_q
_DIPOLE_COMPONENTS = {
    -1: -sigma(1, 2),
    0: sigma(1, 3),
    1: -sigma(1, 4),
}

FAR_FIELD_WARN_THRESHOLD = 0.1


class ConfigurationError(ValueError):
    """Physically invalid or numerically unusable configuration."""


@dataclass(frozen=True)
class DriveConfig:
    """Laser drive parameters, all in units of gamma."""

    rabi: float
    detuning: float = 0.0
    gamma: float = 1.0
    laser_polarization: int = 1

    def __post_init__(self):
        if self.rabi < 0:
            raise ConfigurationError("rabi must be non-negative")
        if self.gamma <= 0:
            raise ConfigurationError("gamma must be positive")
        if self.laser_polarization != 1:
            raise ConfigurationError("only the +1 helicity drive channel is supported")

    @property
    def saturation(self):
        """s = Omega^2 / 2(gamma^2 + delta^2)."""
        return self.rabi ** 2 / (2.0 * (self.gamma ** 2 + self.detuning ** 2))


@dataclass(frozen=True)
class Geometry:
    """Atom positions and propagation directions (positions in 1/k0 units)."""

    r1: np.ndarray
    r2: np.ndarray
    k_laser_dir: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    k_out_dir: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, -1.0]))

    def __post_init__(self):
        for name in ("r1", "r2", "k_laser_dir", "k_out_dir"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        for name in ("k_laser_dir", "k_out_dir"):
            v = getattr(self, name)
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ConfigurationError(f"{name} must be a unit vector")
        if self.k0_r12 <= 0:
            raise ConfigurationError("atoms must not coincide")

    @classmethod
    def backscattering(cls, k0_r12, separation_dir=(1.0, 0.0, 0.0)):
        """Atoms separated by k0_r12 transverse to the laser, detection at theta=0."""
        d = np.asarray(separation_dir, dtype=float)
        d = d / np.linalg.norm(d)
        return cls(r1=np.zeros(3), r2=-k0_r12 * d)

    @property
    def r12(self):
        return self.r1 - self.r2

    @property
    def k0_r12(self):
        return float(np.linalg.norm(self.r12))

    @property
    def n_hat(self):
        return self.r12 / self.k0_r12


def coupling_constant(k0_r12):
    """Far-field photon-exchange coupling g = (3i / 2 k0 r12) exp(i k0 r12).

    Accepts a scalar or an array of separations.
    """
    k0_r12 = np.asarray(k0_r12, dtype=float)
    if np.any(k0_r12 <= 0):
        raise ValueError("k0_r12 must be positive")
    g = 1.5j / k0_r12 * np.exp(1j * k0_r12)
    if np.any(np.abs(g) >= FAR_FIELD_WARN_THRESHOLD):
        warnings.warn(
            f"|g| = {np.max(np.abs(g)):.3g} >= {FAR_FIELD_WARN_THRESHOLD}: "
            "far-field expansion is unreliable at this separation",
            stacklevel=2,
        )
    return g[()] if g.ndim == 0 else g


def transverse_projector(n_hat):
    """Projector 1 - n n^T onto the plane transverse to the unit vector n."""
    n_hat = np.asarray(n_hat, dtype=float)
    if abs(np.linalg.norm(n_hat) - 1.0) > 1e-12:
        raise ValueError("n_hat must be a unit vector")
    return np.eye(3) - np.outer(n_hat, n_hat)


def helicity_projector(n_hat):
    """Transverse projector in the helicity basis: P[i, j] = e_qi^* . Delta . e_qj.

    Rows/columns ordered by HELICITY = (-1, 0, +1).
    """
    delta = transverse_projector(n_hat)
    out = np.empty((3, 3), dtype=complex)
    for i, q in enumerate(HELICITY):
        for j, qp in enumerate(HELICITY):
            out[i, j] = _HELICITY_VECS[q].conj() @ delta @ _HELICITY_VECS[qp]
    return out


def delta_plus_plus(n_hat):
    """Tensor element e_{+1} . Delta . e_{+1} of the transverse projector (no conjugation)."""
    return E_PLUS @ transverse_projector(n_hat) @ E_PLUS


def angular_weight(n_hat, g):
    """|g|^2 |Delta_{+1,+1}|^2, the geometric weight of all order-g^2 observables."""
    return abs(g) ** 2 * abs(delta_plus_plus(n_hat)) ** 2


# ---------------------------------------------------------------------------
# superoperator actions on 16x16 two-atom operators
# ---------------------------------------------------------------------------

_I4 = np.eye(4, dtype=complex)
_I16 = np.eye(N_SINGLE, dtype=complex)


def _embed(op, atom):
    """Lift a single-atom operator into the two-atom space (atom 1 or 2)."""
    if atom == 1:
        return np.kron(op, _I4)
    if atom == 2:
        return np.kron(_I4, op)
    raise ValueError("atom must be 1 or 2")


def _single_atom_operators(cfg, rabi_phase):
    """Excited projector, drive Hamiltonian term, dipole components (4x4)."""
    excited = sigma(2, 2) + sigma(3, 3) + sigma(4, 4)
    eps_l = _HELICITY_VECS[cfg.laser_polarization]
    omega_a = cfg.rabi * rabi_phase
    drive = np.zeros((4, 4), dtype=complex)
    for q in HELICITY:
        d_q = _DIPOLE_COMPONENTS[q]
        drive += omega_a * (_HELICITY_VECS[q].conj() @ eps_l) * d_q.conj().T
        drive += np.conj(omega_a) * (_HELICITY_VECS[q] @ eps_l.conj()) * d_q
    return excited, drive


def apply_single_atom_generator(cfg, Q, atom, rabi_phase=1.0):
    """Direct action of the independent-atom generator on a two-atom operator.

    Implements -i delta [D^dag.D, Q] - (i/2)[Omega_a D^dag.eps_L
    + Omega_a^* D.eps_L^*, Q] + gamma sum_q (d_q^dag [Q, d_q]
    + [d_q^dag, Q] d_q) by plain matrix algebra; this is the reference
    path against which the assembled matrix A is cross-validated.
    """
    Q = np.asarray(Q, dtype=complex)
    excited, drive = _single_atom_operators(cfg, rabi_phase)
    excited = _embed(excited, atom)
    drive = _embed(drive, atom)
    out = -1j * cfg.detuning * (excited @ Q - Q @ excited)
    out += -0.5j * (drive @ Q - Q @ drive)
    for q in HELICITY:
        d = _embed(_DIPOLE_COMPONENTS[q], atom)
        dd = d.conj().T
        out += cfg.gamma * (dd @ (Q @ d - d @ Q) + (dd @ Q - Q @ dd) @ d)
    return out


def apply_interaction_generator(cfg, geom, g, Q, alpha, beta):
    """Direct action of the photon-exchange generator L_{alpha beta}.

    Implements D_a^dag . T . [Q, D_b] + [D_b^dag, Q] . T^* . D_a with
    T = gamma g Delta(n_hat).
    """
    Q = np.asarray(Q, dtype=complex)
    ph = helicity_projector(geom.n_hat)
    out = np.zeros_like(Q)
    for i, q in enumerate(HELICITY):
        for j, qp in enumerate(HELICITY):
            w = cfg.gamma * ph[i, j]
            if w == 0:
                continue
            da_dag = _embed(_DIPOLE_COMPONENTS[q].conj().T, alpha)
            db = _embed(_DIPOLE_COMPONENTS[qp], beta)
            out += w * g * (da_dag @ (Q @ db - db @ Q))
            db_dag = _embed(_DIPOLE_COMPONENTS[q].conj().T, beta)
            da = _embed(_DIPOLE_COMPONENTS[qp], alpha)
            out += w * np.conj(g) * ((db_dag @ Q - Q @ db_dag) @ da)
    return out


# ---------------------------------------------------------------------------
# matrix assembly
# ---------------------------------------------------------------------------

def _lmul(X):
    return np.kron(X, _I16)


def _rmul(Y):
    return np.kron(_I16, Y.T)


def _single_atom_superop(cfg, atom, rabi_phase):
    excited, drive = _single_atom_operators(cfg, rabi_phase)
    excited = _embed(excited, atom)
    drive = _embed(drive, atom)
    s = -1j * cfg.detuning * (_lmul(excited) - _rmul(excited))
    s += -0.5j * (_lmul(drive) - _rmul(drive))
    for q in HELICITY:
        d = _embed(_DIPOLE_COMPONENTS[q], atom)
        dd = d.conj().T
        s += cfg.gamma * (2.0 * np.kron(dd, d.T) - _lmul(dd @ d) - _rmul(dd @ d))
    return s


def _interaction_superop(cfg, geom, g, alpha, beta):
    ph = helicity_projector(geom.n_hat)
    s = np.zeros((N_TWO, N_TWO), dtype=complex)
    for i, q in enumerate(HELICITY):
        for j, qp in enumerate(HELICITY):
            w = cfg.gamma * ph[i, j]
            if w == 0:
                continue
            da_dag = _embed(_DIPOLE_COMPONENTS[q].conj().T, alpha)
            db = _embed(_DIPOLE_COMPONENTS[qp], beta)
            s += w * g * (np.kron(da_dag, db.T) - _lmul(da_dag @ db))
            db_dag = _embed(_DIPOLE_COMPONENTS[q].conj().T, beta)
            da = _embed(_DIPOLE_COMPONENTS[qp], alpha)
            s += w * np.conj(g) * (np.kron(db_dag, da.T) - _rmul(db_dag @ da))
    return s


def _superop_to_coefficient_matrix(s):
    """Coefficient matrix M with L(B_n) = sum_m M[n, m] B_m."""
    flat = two_atom_basis_flat()
    return (flat @ s.T) @ flat.conj().T


def rabi_phases(geom):
    """Position-dependent laser phase factor exp(i k_L . r_alpha) per atom."""
    k_l = geom.k_laser_dir
    return np.exp(1j * (k_l @ geom.r1)), np.exp(1j * (k_l @ geom.r2))


@dataclass(frozen=True)
class GeneratorSet:
    """Matrices of the linear master equation d<Q>/dt = (A + V)<Q> + j."""

    A: np.ndarray
    V: np.ndarray
    j: np.ndarray
    cfg: DriveConfig
    geom: Geometry
    g: complex

    @property
    def angular_weight(self):
        return angular_weight(self.geom.n_hat, self.g)

    @property
    def detection_phase(self):
        """exp(i k . r12) entering the crossed intensity and spectrum."""
        return np.exp(1j * self.geom.k0_r12 * (self.geom.k_out_dir @ self.geom.n_hat))


def assemble(cfg, geom, g=None):
    """Build the GeneratorSet for the given drive and geometry.

    The coupling g defaults to the far-field value at the interatomic
    distance but may be overridden (e.g. rescaled) independently of the
    geometric phases.
    """
    if g is None:
        g = coupling_constant(geom.k0_r12)
    ph1, ph2 = rabi_phases(geom)
    s_single = _single_atom_superop(cfg, 1, ph1) + _single_atom_superop(cfg, 2, ph2)
    s_int = _interaction_superop(cfg, geom, g, 1, 2) + _interaction_superop(cfg, geom, g, 2, 1)

    m_single = _superop_to_coefficient_matrix(s_single)
    m_int = _superop_to_coefficient_matrix(s_int)

    # identity must be stationary under both generators
    if max(np.abs(m_single[0]).max(), np.abs(m_int[0]).max()) > 1e-12:
        raise ConfigurationError("generator does not leave the identity invariant")
    # the interaction has no inhomogeneous part
    if np.abs(m_int[1:, 0]).max() > 1e-12 * max(1.0, np.abs(m_int).max()):
        raise ConfigurationError("interaction generator produced a trace-element source")

    a = np.ascontiguousarray(m_single[1:, 1:])
    v = np.ascontiguousarray(m_int[1:, 1:])
    j = np.ascontiguousarray(m_single[1:, 0]) * TRACE_ELEMENT_VALUE

    sign, logdet = np.linalg.slogdet(a)
    if sign == 0 or not np.isfinite(logdet):
        raise ConfigurationError("single-atom generator matrix A is singular")
    return GeneratorSet(A=a, V=v, j=j, cfg=cfg, geom=geom, g=complex(g))
