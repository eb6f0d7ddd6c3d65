"""Constructive certificates that one vector is majorized by another.

Four interoperating witnesses: chains of elementary two-coordinate transfers,
the doubly stochastic matrix a chain multiplies out to, its decomposition into
a convex mixture of permutations, and a real orthogonal matrix whose squared
entries carry the sorted source spectrum onto the sorted target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import MajorizationFailed, MatchingFailed, NotDoublyStochastic, NotOrthogonal
from .seqmaj import ProbVector, is_majorized, sort_desc

ENTRY_TOL = 1e-12
SUM_TOL = 1e-9
# Two values closer than this are considered already transferred.
MATCH_TOL = 1e-12


@dataclass(frozen=True)
class TTransform:
    """Mix coordinates i and j: (v_i, v_j) -> (t*v_i + (1-t)*v_j, (1-t)*v_i + t*v_j)."""

    i: int
    j: int
    t: float

    def __post_init__(self):
        if self.i == self.j or self.i < 0 or self.j < 0:
            raise ValueError("need two distinct non-negative indices")
        if not -ENTRY_TOL <= self.t <= 1.0 + ENTRY_TOL:
            raise ValueError(f"t={self.t} outside [0, 1]")
        object.__setattr__(self, "t", min(max(self.t, 0.0), 1.0))


@dataclass(frozen=True)
class TransferChain:
    d: int
    steps: tuple[TTransform, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        for s in self.steps:
            if s.i >= self.d or s.j >= self.d:
                raise ValueError(f"step indices ({s.i},{s.j}) exceed dimension {self.d}")


def _square_array(entries, name: str) -> np.ndarray:
    arr = np.array(entries, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DoublyStochasticMatrix:
    """Non-negative square matrix with unit row and column sums."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _square_array(self.entries, "doubly stochastic matrix")
        if np.any(arr < -ENTRY_TOL) or np.any(arr > 1.0 + ENTRY_TOL):
            raise NotDoublyStochastic(f"entry outside [0,1]: {arr.min()}..{arr.max()}")
        rows = arr.sum(axis=1)
        cols = arr.sum(axis=0)
        worst = max(np.abs(rows - 1).max(), np.abs(cols - 1).max())
        if worst > SUM_TOL:
            raise NotDoublyStochastic(f"row/column sum deviates from 1 by {worst}")
        object.__setattr__(self, "entries", arr)

    @property
    def d(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class OrthogonalMatrix:
    entries: np.ndarray

    def __post_init__(self):
        arr = _square_array(self.entries, "orthogonal matrix")
        defect = np.abs(arr.T @ arr - np.eye(arr.shape[0])).max()
        if defect > SUM_TOL:
            raise NotOrthogonal(f"U^T U deviates from identity by {defect}")
        object.__setattr__(self, "entries", arr)

    @property
    def d(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BirkhoffDecomposition:
    """Convex mixture of permutations: weights t_i and maps row -> column."""

    weights: np.ndarray
    permutations: tuple[np.ndarray, ...]

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        perms = tuple(np.array(p, dtype=int) for p in self.permutations)
        if w.size != len(perms) or w.size == 0:
            raise ValueError("need one weight per permutation")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"weights sum to {w.sum()}, not 1")
        d = perms[0].size
        bound = (d - 1) ** 2 + 1
        if len(perms) > bound:
            raise ValueError(f"{len(perms)} terms exceed the bound {bound} for d={d}")
        ident = np.arange(d)
        for p in perms:
            if p.size != d or np.any(np.sort(p) != ident):
                raise ValueError("not a permutation of 0..d-1")
            p.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "permutations", perms)

    @property
    def d(self) -> int:
        return self.permutations[0].size

    def matrix(self) -> np.ndarray:
        """Assemble sum_i t_i P(pi_i)."""
        out = np.zeros((self.d, self.d))
        rows = np.arange(self.d)
        for w, p in zip(self.weights, self.permutations):
            out[rows, p] += w
        return out


def apply_t_transform(step: TTransform, v) -> ProbVector:
    """Apply one elementary transfer; the total is preserved."""
    p = v if isinstance(v, ProbVector) else ProbVector(v)
    arr = np.array(p.entries)
    if step.i >= arr.size or step.j >= arr.size:
        raise ValueError(f"indices ({step.i},{step.j}) out of range for d={arr.size}")
    vi, vj = arr[step.i], arr[step.j]
    arr[step.i] = step.t * vi + (1.0 - step.t) * vj
    arr[step.j] = (1.0 - step.t) * vi + step.t * vj
    return ProbVector(arr, normalized=p.normalized)


def find_transfer_chain(a, b, tol: float = 1e-9) -> TransferChain:
    """Build at most d-1 elementary transfers carrying b's sorted vector to a's.

    At each step the mass surplus at the deepest still-mismatched coordinate
    is moved to the first coordinate that is short of its target, fixing at
    least one coordinate exactly.
    """
    verdict = is_majorized(a, b, tol)
    if not verdict.holds:
        raise MajorizationFailed("a is not majorized by b", verdict=verdict)
    av = sort_desc(a if isinstance(a, ProbVector) else ProbVector(a)).entries
    bv = sort_desc(b if isinstance(b, ProbVector) else ProbVector(b)).entries
    d = max(av.size, bv.size)
    av = np.pad(av, (0, d - av.size))
    cur = np.pad(bv, (0, d - bv.size)).copy()

    steps = []
    for _ in range(d):  # terminates in <= d-1 transfers
        over = np.nonzero(cur - av > MATCH_TOL)[0]
        if over.size == 0:
            break
        j = int(over[-1])
        under = np.nonzero(av - cur > MATCH_TOL)[0]
        under = under[under > j]
        if under.size == 0:
            # residuals below MATCH_TOL only; nothing meaningful remains
            break
        k = int(under[0])
        delta = min(cur[j] - av[j], av[k] - cur[k])
        t = 1.0 - delta / (cur[j] - cur[k])
        steps.append(TTransform(i=j, j=k, t=t))
        # assign exactly-hit targets to avoid accumulating rounding residue
        cur[j] = av[j] if delta == cur[j] - av[j] else cur[j] - delta
        cur[k] = av[k] if delta == av[k] - cur[k] else cur[k] + delta
    if len(steps) > d - 1:
        raise RuntimeError("transfer chain exceeded d-1 steps")
    return TransferChain(d=d, steps=tuple(steps))


def chain_to_doubly_stochastic(chain: TransferChain) -> DoublyStochasticMatrix:
    """Multiply out the chain's elementary matrices, last step leftmost."""
    q = np.eye(chain.d)
    for s in chain.steps:
        rows = q[[s.i, s.j], :]
        mix = np.array([[s.t, 1.0 - s.t], [1.0 - s.t, s.t]])
        q[[s.i, s.j], :] = mix @ rows
    return DoublyStochasticMatrix(q)


def schur_horn_orthogonal(a, b, tol: float = 1e-9) -> OrthogonalMatrix:
    """Real orthogonal U with diag(U diag(b_sorted) U^T) = a_sorted.

    One plane rotation per transfer step, with cos^2(theta) equal to the
    step's mixing weight.  Each step's coordinate pair is off-diagonal-free
    at the time it is rotated, so the diagonal evolves exactly like the
    transfer chain.
    """
    chain = find_transfer_chain(a, b, tol)
    u = np.eye(chain.d)
    for s in chain.steps:
        c = np.sqrt(s.t)
        sn = np.sqrt(1.0 - s.t)
        rows = u[[s.i, s.j], :]
        u[[s.i, s.j], :] = np.array([[c, -sn], [sn, c]]) @ rows
    return OrthogonalMatrix(u)


def orthostochastic_of(u) -> DoublyStochasticMatrix:
    """Squared entries of an orthogonal matrix; doubly stochastic by the norm identity."""
    arr = u.entries if isinstance(u, OrthogonalMatrix) else np.asarray(u, dtype=float)
    defect = np.abs(arr.T @ arr - np.eye(arr.shape[0])).max()
    if defect > SUM_TOL:
        raise NotOrthogonal(f"U^T U deviates from identity by {defect}")
    return DoublyStochasticMatrix(arr ** 2)


def birkhoff_decompose(q, tol: float = 1e-9) -> BirkhoffDecomposition:
    """Greedy decomposition into a convex mixture of permutation matrices.

    Repeatedly finds a perfect matching on the support graph of the
    residual, subtracts the minimal matched entry, and stops once the
    residual's largest entry falls below tol.  Each round zeroes at least
    one entry, so the loop is finite.

    The support graph keeps entries down to tol / (100 d): while any entry
    is still >= tol, every row of the residual carries at least tol of mass,
    so the invisible sub-floor mass (at most tol/100 per row) cannot break
    Hall's condition and a perfect matching exists.  A floor at tol itself
    would let borderline entries strand whole rows.

    Raises MatchingFailed when the residual support admits no perfect
    matching above the floor (numerical breakdown), NotDoublyStochastic for
    bad input.
    """
    if isinstance(q, DoublyStochasticMatrix):
        arr = q.entries
    else:
        arr = np.asarray(q, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise NotDoublyStochastic("input must be a square matrix")
        rows = arr.sum(axis=1)
        cols = arr.sum(axis=0)
        worst = max(np.abs(rows - 1).max(), np.abs(cols - 1).max())
        if np.any(arr < -tol) or worst > max(tol, SUM_TOL):
            raise NotDoublyStochastic(f"row/column sums deviate by {worst}")
    residual = arr.copy()
    residual[residual < 0] = 0.0
    d = residual.shape[0]
    rows = np.arange(d)
    floor = tol / (100.0 * d)

    weights = []
    perms = []
    while residual.max() >= tol:
        support = csr_matrix(residual > floor)
        match = maximum_bipartite_matching(support, perm_type="column")
        if np.any(match < 0):
            raise MatchingFailed(
                f"no perfect matching on the support above {floor} "
                f"after {len(weights)} terms")
        perm = np.asarray(match, dtype=int)
        w = float(residual[rows, perm].min())
        weights.append(w)
        perms.append(perm)
        residual[rows, perm] -= w
    return BirkhoffDecomposition(weights=np.array(weights), permutations=tuple(perms))
