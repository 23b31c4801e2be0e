"""States, effects, POVMs, and completely positive maps.

A channel acting on a bipartite system always sits on the SECOND tensor
factor here; the first factor is the ancilla.  The Choi operator of a
channel E is accordingly (I (x) E)[Psi] with Psi the unnormalized
maximally entangled projector, so it has unit second marginal when E is
trace preserving.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    dagger,
    herm_eig,
    kron,
    max_abs,
    partial_trace,
    vec_reshape,
)

# Eigenvalues below this fraction of the largest are dropped when
# extracting Kraus operators from a PSD matrix.
KRAUS_CUTOFF = 1e-12


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis vector |index> of the given dimension."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v: np.ndarray) -> np.ndarray:
    """Rank-one projector |v><v| (input need not be normalized)."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def max_entangled_ket(d: int, normalized: bool = False) -> np.ndarray:
    """The maximally entangled vector sum_j |j>|j> on H_d (x) H_d.

    Unnormalized by default (squared norm d); pass ``normalized=True`` for
    the unit vector.
    """
    v = np.eye(d, dtype=complex).reshape(-1)
    return v / np.sqrt(d) if normalized else v


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _frozen(m: np.ndarray) -> np.ndarray:
    out = np.array(m, dtype=complex)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# validators for operator-valued objects (plain ndarrays)
# ---------------------------------------------------------------------------


def check_density(m: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a density operator: Hermitian, PSD, unit trace."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"density operator must be square, got {m.shape}")
    values, _ = herm_eig(m, tol)
    if values[0] < -tol * max(1.0, float(values[-1])):
        raise ValueError(f"density operator not PSD: min eigenvalue {values[0]:.3e}")
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > 1e-9:
        raise ValueError(f"density operator trace {tr} != 1")
    return m


def check_effect(m: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate an effect: Hermitian with spectrum inside [0, 1]."""
    m = np.asarray(m, dtype=complex)
    values, _ = herm_eig(m, tol)
    if values[0] < -tol or values[-1] > 1.0 + tol:
        raise ValueError(
            f"effect spectrum [{values[0]:.3e}, {values[-1]:.3e}] not within [0, 1]"
        )
    return m


def check_process_state(omega: np.ndarray, d: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a process state on H_d (x) H_d.

    Must be Hermitian PSD with trace d and second marginal equal to the
    identity; this characterizes Choi operators of trace-preserving
    channels.
    """
    omega = np.asarray(omega, dtype=complex)
    if omega.shape != (d * d, d * d):
        raise ValueError(f"process state must be {d * d}x{d * d}, got {omega.shape}")
    values, _ = herm_eig(omega, tol)
    if values[0] < -tol * max(1.0, float(values[-1])):
        raise ValueError(f"process state not PSD: min eigenvalue {values[0]:.3e}")
    tr = float(np.trace(omega).real)
    if abs(tr - d) > 1e-9 * max(1.0, d):
        raise ValueError(f"process state trace {tr} != {d}")
    marginal = partial_trace(omega, d, d, "second")
    if max_abs(marginal - np.eye(d)) > 1e-9 * max(1.0, max_abs(omega)):
        raise ValueError("process state second marginal differs from identity")
    return omega


# ---------------------------------------------------------------------------
# POVMs and Kraus channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Povm:
    """A measurement: effects summing to the identity, one label each."""

    effects: tuple[np.ndarray, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        effects = tuple(_frozen(e) for e in self.effects)
        object.__setattr__(self, "effects", effects)
        if not effects:
            raise ValueError("POVM needs at least one effect")
        labels = self.labels
        if labels is None:
            labels = tuple(str(k) for k in range(len(effects)))
        object.__setattr__(self, "labels", tuple(labels))
        if len(self.labels) != len(effects):
            raise ValueError("label count does not match effect count")
        dim = effects[0].shape[0]
        for e in effects:
            if e.shape != (dim, dim):
                raise ValueError("POVM effects must share one square dimension")
            check_effect(e)
        total = sum(effects)
        if max_abs(total - np.eye(dim)) > 1e-9:
            raise ValueError("POVM effects do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self) -> int:
        return len(self.effects)


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive map X -> sum_k A_k X A_k^dag.

    Not necessarily trace preserving; ``is_trace_preserving`` reports
    whether sum A^dag A = I holds to 1e-9.
    """

    dim_in: int
    dim_out: int
    kraus: tuple[np.ndarray, ...] = field(default=())

    def __post_init__(self):
        ops = tuple(_frozen(a) for a in self.kraus)
        object.__setattr__(self, "kraus", ops)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        for a in ops:
            if a.shape != (self.dim_out, self.dim_in):
                raise ValueError(
                    f"Kraus operator shape {a.shape} != ({self.dim_out}, {self.dim_in})"
                )

    @property
    def is_trace_preserving(self) -> bool:
        total = sum(dagger(a) @ a for a in self.kraus)
        return max_abs(total - np.eye(self.dim_in)) <= 1e-9


def apply_channel(ch: KrausChannel, x: np.ndarray) -> np.ndarray:
    """Apply the channel: sum_k A_k x A_k^dag."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (ch.dim_in, ch.dim_in):
        raise ValueError(f"operator shape {x.shape} != ({ch.dim_in}, {ch.dim_in})")
    out = np.zeros((ch.dim_out, ch.dim_out), dtype=complex)
    for a in ch.kraus:
        out += a @ x @ dagger(a)
    return out


def dual_channel(ch: KrausChannel) -> KrausChannel:
    """The adjoint map, with Kraus operators {A_k^dag}.

    Satisfies Tr(B^dag ch[A]) = Tr(dual(ch)[B]^dag A) for all A, B.
    """
    return KrausChannel(ch.dim_out, ch.dim_in, tuple(dagger(a) for a in ch.kraus))


def apply_first(ch: KrausChannel, x: np.ndarray, right_dim: int) -> np.ndarray:
    """Apply the channel to the first factor of an operator on
    H_{dim_in} (x) H_{right_dim}, identity on the second."""
    eye = np.eye(right_dim)
    out = np.zeros((ch.dim_out * right_dim,) * 2, dtype=complex)
    for a in ch.kraus:
        k = kron(a, eye)
        out += k @ x @ dagger(k)
    return out


def apply_second(ch: KrausChannel, x: np.ndarray, left_dim: int) -> np.ndarray:
    """Apply the channel to the second factor of an operator on
    H_{left_dim} (x) H_{dim_in}, identity on the first."""
    eye = np.eye(left_dim)
    out = np.zeros((left_dim * ch.dim_out,) * 2, dtype=complex)
    for a in ch.kraus:
        k = kron(eye, a)
        out += k @ x @ dagger(k)
    return out


# ---------------------------------------------------------------------------
# Choi correspondence
# ---------------------------------------------------------------------------


def choi_of_channel(ch: KrausChannel) -> np.ndarray:
    """Choi operator (I (x) ch)[Psi], channel on the second factor.

    Requires dim_in = dim_out.  The result is a valid process state
    exactly when the channel is trace preserving; validation is left to
    the caller so that CP-only maps can still be converted.
    """
    if ch.dim_in != ch.dim_out:
        raise ValueError("Choi operator requires a square channel")
    d = ch.dim_in
    omega = np.zeros((d * d, d * d), dtype=complex)
    for a in ch.kraus:
        v = a.T.reshape(-1)  # v[i*d + m] = a[m, i]
        omega += np.outer(v, v.conj())
    return omega


def channel_of_choi(omega: np.ndarray, d: int, tol: float = DEFAULT_TOL) -> KrausChannel:
    """Extract a Kraus decomposition from a Choi operator on H_d (x) H_d.

    Eigenvectors with eigenvalue above the extraction cutoff become Kraus
    operators K[m, i] = sqrt(s) v[i*d + m].
    """
    omega = np.asarray(omega, dtype=complex)
    if omega.shape != (d * d, d * d):
        raise ValueError(f"Choi operator must be {d * d}x{d * d}, got {omega.shape}")
    values, vectors = herm_eig(omega, tol)
    top = float(values[-1]) if values.size else 0.0
    if top <= 0.0:
        raise ValueError("Choi operator has no positive spectrum")
    if values[0] < -tol * max(1.0, top):
        raise ValueError(f"Choi operator not PSD: min eigenvalue {values[0]:.3e}")
    ops = []
    for s, v in zip(values, vectors.T):
        if s > KRAUS_CUTOFF * top:
            ops.append(np.sqrt(s) * v.reshape(d, d).T)
    return KrausChannel(d, d, tuple(ops))


def state_to_map(state: np.ndarray, anc_dim: int, d: int, tol: float = DEFAULT_TOL) -> KrausChannel:
    """The CP map R with (R (x) I)[Psi] = state, for a state on
    H_anc (x) H_d.

    Each eigenvector phi of the state folds into a Kraus operator
    sqrt(lambda) * vec_reshape(phi): H_d -> H_anc.
    """
    state = np.asarray(state, dtype=complex)
    n = anc_dim * d
    if state.shape != (n, n):
        raise ValueError(f"state must be {n}x{n}, got {state.shape}")
    values, vectors = herm_eig(state, tol)
    top = float(values[-1]) if values.size else 0.0
    if top <= 0.0:
        raise ValueError("state has no positive spectrum")
    if values[0] < -tol * max(1.0, top):
        raise ValueError(f"state not PSD: min eigenvalue {values[0]:.3e}")
    ops = []
    for s, v in zip(values, vectors.T):
        if s > KRAUS_CUTOFF * top:
            ops.append(np.sqrt(s) * vec_reshape(v, anc_dim, d))
    return KrausChannel(d, anc_dim, tuple(ops))


# ---------------------------------------------------------------------------
# standard channel factories
# ---------------------------------------------------------------------------


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(d, d, (np.eye(d, dtype=complex),))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if u.shape != (d, d) or max_abs(dagger(u) @ u - np.eye(d)) > 1e-9:
        raise ValueError("operator is not unitary within tolerance")
    return KrausChannel(d, d, (u,))


def contraction_channel(target: np.ndarray) -> KrausChannel:
    """Channel sending every state to the fixed pure state ``target``.

    Kraus operators are |target><k| over the computational basis.
    """
    t = np.asarray(target, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(t) - 1.0) > 1e-9:
        raise ValueError("target state must be normalized")
    d = t.size
    ops = tuple(np.outer(t, ket(k, d).conj()) for k in range(d))
    return KrausChannel(d, d, ops)


def _weyl_ops(d: int) -> list[np.ndarray]:
    """The d^2 discrete Weyl (shift-and-phase) unitaries."""
    shift = np.zeros((d, d), dtype=complex)
    for j in range(d):
        shift[(j + 1) % d, j] = 1.0
    phase = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    ops = []
    xj = np.eye(d, dtype=complex)
    for _ in range(d):
        zk = np.eye(d, dtype=complex)
        for _ in range(d):
            ops.append(xj @ zk)
            zk = zk @ phase
        xj = xj @ shift
    return ops


def depolarizing_channel(p: float, d: int) -> KrausChannel:
    """Mix toward the maximally mixed state: rho -> (1-p) rho + p I/d."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength {p} outside [0, 1]")
    weyl = _weyl_ops(d)
    ops = [np.sqrt(1.0 - p + p / d**2) * weyl[0]]
    ops += [np.sqrt(p) / d * w for w in weyl[1:]]
    return KrausChannel(d, d, tuple(ops))
