"""Quantum channels in Kraus form.

Covers structural checks (trace preservation, unitality, complete
positivity), the constructive channels used to realize majorization between
states (pinching, phase averaging, rank-one transfer, mixed-unitary
transfer), and the detector that decides whether a channel is conjugation by
an isometry, which is exactly the entropy-preserving case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .densop import (
    DensityMatrix,
    eig_hermitian,
    haar_unitary,
    random_density,
    spectrum,
    state_majorized,
    trace_distance,
    von_neumann_entropy,
)
from .errors import (
    DimensionMismatch,
    MajorizationFailed,
    NotTracePreserving,
    NotUnitary,
)
from .xfer import (
    birkhoff_decompose,
    chain_to_doubly_stochastic,
    find_transfer_chain,
    schur_horn_orthogonal,
)

COMPLETENESS_TOL = 1e-8
UNITARY_TOL = 1e-9


@dataclass(frozen=True)
class KrausChannel:
    """Ordered family of d_out x d_in Kraus operators with validity flags.

    When flagged trace_preserving, sum_i A_i^* A_i must be the identity; when
    flagged unital, sum_i A_i A_i^* must be.  Both are checked entrywise at
    construction.
    """

    d_in: int
    d_out: int
    kraus: tuple[np.ndarray, ...]
    trace_preserving: bool = True
    unital: bool = False

    def __post_init__(self):
        ops = tuple(np.array(a, dtype=complex) for a in self.kraus)
        if not ops:
            raise ValueError("need at least one Kraus operator")
        for idx, a in enumerate(ops):
            if a.shape != (self.d_out, self.d_in):
                raise DimensionMismatch(
                    f"kraus[{idx}] has shape {a.shape}, expected "
                    f"({self.d_out}, {self.d_in})")
            a.setflags(write=False)
        if self.trace_preserving:
            dev = self.completeness_defect_of(ops, self.d_in)
            if dev > COMPLETENESS_TOL:
                raise NotTracePreserving(f"sum A*A deviates from I by {dev}")
        if self.unital:
            dev = self.unitality_defect_of(ops, self.d_out)
            if dev > COMPLETENESS_TOL:
                raise ValueError(f"flagged unital but sum AA* deviates from I by {dev}")
        object.__setattr__(self, "kraus", ops)

    @staticmethod
    def completeness_defect_of(ops, d_in: int) -> float:
        acc = sum(a.conj().T @ a for a in ops)
        return float(np.abs(acc - np.eye(d_in)).max())

    @staticmethod
    def unitality_defect_of(ops, d_out: int) -> float:
        acc = sum(a @ a.conj().T for a in ops)
        return float(np.abs(acc - np.eye(d_out)).max())

    @property
    def num_kraus(self) -> int:
        return len(self.kraus)


@dataclass(frozen=True)
class IsometryReport:
    """Outcome of the isometric-conjugation test.

    On success `isometry` holds the recovered V (global phase fixed by making
    its first nonzero column entry real positive) and `gram` the matrix of
    pairwise scalars.  On failure `failure_witness` is ((i, j), deviation)
    for the first violated Kraus pair or self-consistency check.
    """

    is_isometric_conjugation: bool
    isometry: Optional[np.ndarray] = None
    gram: Optional[np.ndarray] = None
    failure_witness: Optional[tuple[tuple[int, int], float]] = None


@dataclass(frozen=True)
class StructureReport:
    trace_preserving: bool
    unital: bool
    completely_positive: bool
    trace_preserving_defect: float
    unitality_defect: float
    min_choi_eigenvalue: float


@dataclass(frozen=True)
class MixedUnitaryTransfer:
    """Convex mixture of unitaries carrying one state onto another."""

    weights: np.ndarray
    unitaries: tuple[np.ndarray, ...]

    def to_channel(self) -> KrausChannel:
        return mixed_unitary_channel(self.weights, self.unitaries)


@dataclass(frozen=True)
class PinchRow:
    n: int
    trace_distance: float
    bound: float


@dataclass(frozen=True)
class EntropyProbeResult:
    max_deviation: float
    worst_seed: int
    trials: int


@dataclass(frozen=True)
class FixedPointReport:
    is_fixed: bool
    defect: float
    max_commutator_norm: float


def _require_trace_preserving(phi: KrausChannel):
    dev = KrausChannel.completeness_defect_of(phi.kraus, phi.d_in)
    if dev > COMPLETENESS_TOL:
        raise NotTracePreserving(f"sum A*A deviates from I by {dev}")


def apply_channel(phi: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Evaluate sum_i A_i rho A_i^* as a validated state."""
    if rho.d != phi.d_in:
        raise DimensionMismatch(f"state dimension {rho.d} != channel input {phi.d_in}")
    _require_trace_preserving(phi)
    out = np.zeros((phi.d_out, phi.d_out), dtype=complex)
    for a in phi.kraus:
        out += a @ rho.matrix @ a.conj().T
    return DensityMatrix((out + out.conj().T) / 2.0)


def apply_raw(phi: KrausChannel, x: np.ndarray) -> np.ndarray:
    """sum_i A_i X A_i^* on an arbitrary matrix, without state validation."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (phi.d_in, phi.d_in):
        raise DimensionMismatch(f"matrix shape {x.shape} != ({phi.d_in}, {phi.d_in})")
    out = np.zeros((phi.d_out, phi.d_out), dtype=complex)
    for a in phi.kraus:
        out += a @ x @ a.conj().T
    return out


def adjoint_apply(phi: KrausChannel, x: np.ndarray) -> np.ndarray:
    """Dual action sum_i A_i^* X A_i; satisfies tr(dual(X) Y) = tr(X phi(Y))."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (phi.d_out, phi.d_out):
        raise DimensionMismatch(f"matrix shape {x.shape} != ({phi.d_out}, {phi.d_out})")
    out = np.zeros((phi.d_in, phi.d_in), dtype=complex)
    for a in phi.kraus:
        out += a.conj().T @ x @ a
    return out


def choi_of_linear_map(fn, d_in: int, d_out: int) -> np.ndarray:
    """Choi matrix sum_ij e_ij (x) fn(e_ij), trace-normalized by d_in.

    Accepts any linear map given as a callable on d_in x d_in matrices, so
    non-Kraus maps (e.g. the transpose) can be probed for complete
    positivity: the map is completely positive exactly when this matrix is
    positive semidefinite.
    """
    c = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            e = np.zeros((d_in, d_in), dtype=complex)
            e[i, j] = 1.0
            block = np.asarray(fn(e), dtype=complex)
            c[i * d_out:(i + 1) * d_out, j * d_out:(j + 1) * d_out] = block
    return c / d_in


def choi_matrix(phi: KrausChannel) -> np.ndarray:
    """Choi matrix of a Kraus channel (trace-normalized by d_in)."""
    c = np.zeros((phi.d_in * phi.d_out, phi.d_in * phi.d_out), dtype=complex)
    for a in phi.kraus:
        v = a.T.reshape(-1)  # columns of A stacked: (e_i (x) A e_i) summed
        c += np.outer(v, v.conj())
    return c / phi.d_in


def structure_checks(phi: KrausChannel) -> StructureReport:
    """Report trace preservation, unitality, and complete positivity defects."""
    tp_dev = KrausChannel.completeness_defect_of(phi.kraus, phi.d_in)
    un_dev = KrausChannel.unitality_defect_of(phi.kraus, phi.d_out)
    min_eig = float(np.linalg.eigvalsh(choi_matrix(phi)).min())
    return StructureReport(
        trace_preserving=tp_dev <= COMPLETENESS_TOL,
        unital=un_dev <= COMPLETENESS_TOL,
        completely_positive=min_eig >= -1e-8,
        trace_preserving_defect=tp_dev,
        unitality_defect=un_dev,
        min_choi_eigenvalue=min_eig,
    )


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(d_in=d, d_out=d, kraus=(np.eye(d, dtype=complex),),
                        trace_preserving=True, unital=True)


def mixed_unitary_channel(weights, unitaries) -> KrausChannel:
    """Bistochastic channel sum_i t_i U_i X U_i^* from weights and unitaries."""
    w = np.asarray(weights, dtype=float)
    us = [np.asarray(u, dtype=complex) for u in unitaries]
    if w.size != len(us) or w.size == 0:
        raise ValueError("need one weight per unitary")
    if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be positive and sum to 1")
    d = us[0].shape[0]
    for u in us:
        if u.shape != (d, d):
            raise DimensionMismatch("unitaries must share one square shape")
        if np.abs(u.conj().T @ u - np.eye(d)).max() > 1e-8:
            raise NotUnitary("matrix is not unitary within 1e-8")
    ops = tuple(np.sqrt(t) * u for t, u in zip(w, us))
    return KrausChannel(d_in=d, d_out=d, kraus=ops,
                        trace_preserving=True, unital=True)


def pinching_channel(basis) -> KrausChannel:
    """Channel that zeroes all off-diagonal entries in the given orthonormal basis.

    Kraus operators are the rank-one projections onto the basis columns;
    the channel is bistochastic and idempotent.
    """
    b = np.asarray(basis, dtype=complex)
    d = b.shape[0]
    if b.shape != (d, d) or np.abs(b.conj().T @ b - np.eye(d)).max() > UNITARY_TOL:
        raise NotUnitary("basis must be unitary within 1e-9")
    ops = tuple(np.outer(b[:, i], b[:, i].conj()) for i in range(d))
    return KrausChannel(d_in=d, d_out=d, kraus=ops,
                        trace_preserving=True, unital=True)


def phase_averaging_channel(n: int, d: int) -> KrausChannel:
    """Uniform mixture of conjugations by powers of a diagonal phase unitary.

    The unitary carries the first n coordinates through the n-th roots of
    unity and fixes the rest; averaging its first n powers kills every
    off-diagonal entry that touches the first n-1 coordinates and converges
    to the full pinching as n grows.
    """
    if not 1 <= n <= d:
        raise ValueError(f"n={n} out of range 1..{d}")
    omega = np.exp(2j * np.pi / n)
    diag = np.concatenate([omega ** np.arange(1, n + 1), np.ones(d - n)])
    ops = tuple(np.diag(diag ** k) / np.sqrt(n) for k in range(1, n + 1))
    return KrausChannel(d_in=d, d_out=d, kraus=ops,
                        trace_preserving=True, unital=True)


def pinch_convergence_experiment(rho2: DensityMatrix, basis) -> list[PinchRow]:
    """Distance of phase averaging to full pinching, with its corner-mass bound.

    For each n the row holds the trace distance between the n-power average
    and the pinching of rho2 in `basis`, and the bound twice the trace of
    rho2 compressed to coordinates n..d of that basis.  The distance never
    exceeds the bound, and the n = d row is exactly pinched.
    """
    b = np.asarray(basis, dtype=complex)
    d = rho2.d
    if b.shape != (d, d) or np.abs(b.conj().T @ b - np.eye(d)).max() > UNITARY_TOL:
        raise NotUnitary("basis must be unitary within 1e-9")
    rot = b.conj().T @ rho2.matrix @ b  # rho2 expressed in the pinching basis
    rot = DensityMatrix((rot + rot.conj().T) / 2.0)
    pinched = DensityMatrix(np.diag(np.diag(rot.matrix).real.astype(complex)))
    tail = np.diag(rot.matrix).real
    rows = []
    for n in range(1, d + 1):
        avg = apply_channel(phase_averaging_channel(n, d), rot)
        dist = trace_distance(avg, pinched)
        bound = 2.0 * float(tail[n - 1:].sum())
        rows.append(PinchRow(n=n, trace_distance=dist, bound=bound))
    return rows


def uhlmann_channel(rho1: DensityMatrix, rho2: DensityMatrix,
                    tol: float = 1e-9) -> KrausChannel:
    """Bistochastic channel carrying rho2 onto rho1 when rho1 is spectrally flatter.

    Rank-one construction: rotate the eigenbasis of rho2 by the orthogonal
    matrix that realizes the spectral transfer, so the rotated basis sees
    rho1's eigenvalues on the diagonal, then relabel those directions onto
    the eigenbasis of rho1.  The result pinches and relabels in one step and
    is exactly bistochastic.
    """
    if rho1.d != rho2.d:
        raise DimensionMismatch(f"dimensions {rho1.d} vs {rho2.d}")
    verdict = state_majorized(rho1, rho2, tol)
    if not verdict.holds:
        raise MajorizationFailed("spectrum(rho1) is not majorized by spectrum(rho2)",
                                 verdict=verdict)
    a = spectrum(rho1)
    b = spectrum(rho2)
    f = eig_hermitian(rho1).eigenvectors
    y = eig_hermitian(rho2).eigenvectors
    u = schur_horn_orthogonal(a, b, tol).entries
    e = y @ u.T  # column i satisfies <rho2 e_i, e_i> = a_i
    ops = tuple(np.outer(f[:, i], e[:, i].conj()) for i in range(rho1.d))
    return KrausChannel(d_in=rho1.d, d_out=rho1.d, kraus=ops,
                        trace_preserving=True, unital=True)


def mixed_unitary_uhlmann(rho1: DensityMatrix, rho2: DensityMatrix,
                          tol: float = 1e-9) -> MixedUnitaryTransfer:
    """Mixture of unitaries with sum_i t_i U_i rho2 U_i^* = rho1.

    The transfer chain's doubly stochastic matrix is split into permutations;
    each permutation becomes a unitary that relabels rho2's eigenbasis onto
    rho1's through that permutation.
    """
    if rho1.d != rho2.d:
        raise DimensionMismatch(f"dimensions {rho1.d} vs {rho2.d}")
    verdict = state_majorized(rho1, rho2, tol)
    if not verdict.holds:
        raise MajorizationFailed("spectrum(rho1) is not majorized by spectrum(rho2)",
                                 verdict=verdict)
    a = spectrum(rho1)
    b = spectrum(rho2)
    f = eig_hermitian(rho1).eigenvectors
    y = eig_hermitian(rho2).eigenvectors
    chain = find_transfer_chain(a, b, tol)
    q = chain_to_doubly_stochastic(chain)
    decomp = birkhoff_decompose(q, tol=1e-10)
    d = rho1.d
    eye = np.eye(d)
    unitaries = []
    for p in decomp.permutations:
        # P[i, p[i]] = 1, so P rearranges rho2's sorted eigenvalues by p
        unitaries.append(f @ eye[p] @ y.conj().T)
    return MixedUnitaryTransfer(weights=decomp.weights, unitaries=tuple(unitaries))


def detect_isometry(phi: KrausChannel, tol: float = 1e-7) -> IsometryReport:
    """Decide whether the channel is X -> V X V^* for an isometry V.

    Tests the Kraus family pairwise: every A_j^* A_i must be a scalar
    multiple of the identity, the scalars must form a rank-one Gram matrix
    with unit diagonal sum, and the normalized first operator must be an
    isometry.  Kraus terms of negligible weight are dropped first, since a
    zero operator is removable representation redundancy.
    """
    _require_trace_preserving(phi)
    weights = [float(np.trace(a.conj().T @ a).real) / phi.d_in for a in phi.kraus]
    kept = [i for i, w in enumerate(weights) if w > tol]
    if not kept:
        raise NotTracePreserving("all Kraus operators are negligible")
    ops = [phi.kraus[i] for i in kept]
    m = len(ops)
    eye = np.eye(phi.d_in)

    gram = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            prod = ops[j].conj().T @ ops[i]
            lam = np.trace(prod) / phi.d_in
            gram[j, i] = lam
            dev = float(np.abs(prod - lam * eye).max())
            if dev > tol:
                return IsometryReport(is_isometric_conjugation=False,
                                      failure_witness=((kept[i], kept[j]), dev))

    diag = np.diag(gram).real
    for i in range(m):
        for j in range(m):
            dev = float(abs(abs(gram[i, j]) ** 2 - diag[i] * diag[j]))
            if dev > tol:
                return IsometryReport(is_isometric_conjugation=False, gram=gram,
                                      failure_witness=((kept[i], kept[j]), dev))
    if abs(diag.sum() - 1.0) > tol:
        return IsometryReport(is_isometric_conjugation=False, gram=gram,
                              failure_witness=((kept[0], kept[0]),
                                               float(abs(diag.sum() - 1.0))))

    v = ops[0] / np.sqrt(diag[0])
    dev = float(np.abs(v.conj().T @ v - eye).max())
    if dev > tol:
        return IsometryReport(is_isometric_conjugation=False, gram=gram,
                              failure_witness=((kept[0], kept[0]), dev))
    # fix the global phase: first nonzero column entry becomes real positive
    flat = v.T.reshape(-1)
    lead = flat[np.abs(flat) > 1e-12][0]
    v = v * (lead.conjugate() / abs(lead))
    v.setflags(write=False)
    return IsometryReport(is_isometric_conjugation=True, isometry=v, gram=gram)


def entropy_probe(phi: KrausChannel, trials: int, d: int,
                  rng: np.random.Generator) -> EntropyProbeResult:
    """Largest entropy change observed on random full-rank states.

    Each trial derives its own seed from the generator, so the result is
    reproducible and independent of evaluation order; the seed of the worst
    state is reported.  Rectangular channels are fine: the input state lives
    at d = d_in and the output entropy is taken at d_out.
    """
    if d != phi.d_in:
        raise DimensionMismatch(f"probe states must match the channel input {phi.d_in}")
    _require_trace_preserving(phi)
    seeds = rng.integers(0, 2**63 - 1, size=trials)
    worst = -1.0
    worst_seed = int(seeds[0]) if trials else 0
    for s in seeds:
        local = np.random.default_rng(int(s))
        rho = random_density(d, local)
        dev = abs(von_neumann_entropy(apply_channel(phi, rho)) - von_neumann_entropy(rho))
        if dev > worst:
            worst = dev
            worst_seed = int(s)
    return EntropyProbeResult(max_deviation=worst, worst_seed=worst_seed, trials=trials)


def fixed_point_commutant_check(phi: KrausChannel, b, tol: float = 1e-9) -> FixedPointReport:
    """Check whether B is fixed by the channel and commutes with its Kraus family.

    Requires the dual map to be subunital (sum A_i^* A_i <= I within tol);
    for a fixed point the commutators with every A_i and A_i^* should vanish.
    """
    if phi.d_in != phi.d_out:
        raise DimensionMismatch("fixed points need a square channel")
    x = np.asarray(b, dtype=complex)
    if x.shape != (phi.d_in, phi.d_in):
        raise DimensionMismatch(f"matrix shape {x.shape} != ({phi.d_in}, {phi.d_in})")
    dual_unit = sum(a.conj().T @ a for a in phi.kraus)
    excess = float(np.linalg.eigvalsh(dual_unit).max()) - 1.0
    if excess > tol:
        raise ValueError(f"dual map is not subunital: largest eigenvalue 1+{excess}")
    defect = float(np.abs(apply_raw(phi, x) - x).max())
    comm = 0.0
    for a in phi.kraus:
        comm = max(comm, float(np.abs(a @ x - x @ a).max()))
        ah = a.conj().T
        comm = max(comm, float(np.abs(ah @ x - x @ ah).max()))
    return FixedPointReport(is_fixed=defect <= tol, defect=defect,
                            max_commutator_norm=comm)


def compose_channels(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """Composition outer(inner(.)) with the product Kraus family."""
    if inner.d_out != outer.d_in:
        raise DimensionMismatch(
            f"inner output {inner.d_out} != outer input {outer.d_in}")
    ops = tuple(a @ b for a in outer.kraus for b in inner.kraus)
    return KrausChannel(d_in=inner.d_in, d_out=outer.d_out, kraus=ops,
                        trace_preserving=inner.trace_preserving and outer.trace_preserving,
                        unital=inner.unital and outer.unital)


def depolarizing_channel(d: int, p: float) -> KrausChannel:
    """Mixture of the identity with the uniform average over shift/clock unitaries.

    For p = 1 every state goes to I/d; any 0 < p <= 1 gives a bistochastic
    channel whose Kraus operators are not proportional to one isometry.
    """
    if not 0 < p <= 1:
        raise ValueError("p must be in (0, 1]")
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    weights = np.full(d * d, p / d**2)
    weights[0] += 1.0 - p
    unitaries = [np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, bb)
                 for a in range(d) for bb in range(d)]
    return mixed_unitary_channel(weights, unitaries)


def random_isometry(d_in: int, d_out: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random isometry: the first d_in columns of a random unitary."""
    if d_out < d_in:
        raise DimensionMismatch("an isometry needs d_out >= d_in")
    return haar_unitary(d_out, rng)[:, :d_in]


def random_isometric_conjugation_channel(d_in: int, d_out: int,
                                         rng: np.random.Generator,
                                         num_terms: int = 1) -> tuple[KrausChannel, np.ndarray]:
    """Channel X -> V X V^* written with redundant phase-multiple Kraus terms.

    Returns the channel and the ground-truth isometry V.
    """
    v = random_isometry(d_in, d_out, rng)
    weights = rng.dirichlet(np.ones(num_terms))
    phases = np.exp(2j * np.pi * rng.random(num_terms))
    ops = tuple(np.sqrt(w) * ph * v for w, ph in zip(weights, phases))
    chan = KrausChannel(d_in=d_in, d_out=d_out, kraus=ops,
                        trace_preserving=True, unital=(d_in == d_out))
    return chan, v


def random_bistochastic_channel(d: int, rng: np.random.Generator,
                                kind: Optional[str] = None) -> KrausChannel:
    """Random bistochastic channel: mixed unitary, pinching, or a composition."""
    if kind is None:
        kind = ["mixed_unitary", "pinching", "composition"][int(rng.integers(3))]
    if kind == "mixed_unitary":
        m = int(rng.integers(2, 5))
        weights = rng.dirichlet(np.ones(m))
        return mixed_unitary_channel(weights, [haar_unitary(d, rng) for _ in range(m)])
    if kind == "pinching":
        return pinching_channel(haar_unitary(d, rng))
    if kind == "composition":
        weights = rng.dirichlet(np.ones(2))
        mixed = mixed_unitary_channel(weights, [haar_unitary(d, rng) for _ in range(2)])
        return compose_channels(pinching_channel(haar_unitary(d, rng)), mixed)
    raise ValueError(f"unknown channel kind {kind!r}")
