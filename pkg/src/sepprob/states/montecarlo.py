"""Deterministic, chunked Monte Carlo over Hilbert-Schmidt states.

Draws are grouped into fixed chunks of ``CHUNK`` samples. Chunk ``c`` uses
its own generator seeded by ``SeedSequence(seed, spawn_key=(c,))``, so the
stream of every draw depends only on ``(seed, c, position in chunk)``. Worker
threads process whole chunks and the per-chunk tallies are reduced in chunk
order, which makes every result independent of the thread count.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import DivisionAlgebra
from .density import DIM, TIE_TOL, PairingError, _block_swap, _paired, sample_hs_batch
from .quaternion import complex_adjoint

CHUNK = 1 << 15
DET_LO = -1 / 16
DET_HI = 1 / 256
RANGE_TOL = 1e-10
NEG_EIG_TOL = 1e-12


class SpectrumViolation(ArithmeticError):
    """A sampled partial transpose had more than one negative eigenvalue."""


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def pt_determinants(algebra: DivisionAlgebra, A: np.ndarray, B: np.ndarray, spectrum_check: bool = True) -> np.ndarray:
    """det of the partial transpose for a batch in complex-pair form."""
    pa = _block_swap(A)
    if algebra is DivisionAlgebra.QUATERNION:
        pb = _block_swap(B)
        ev = _paired(np.linalg.eigvalsh(complex_adjoint(pa, pb)))
        return np.prod(ev, axis=-1)
    if algebra is DivisionAlgebra.REAL:
        pa = pa.real
    if spectrum_check:
        ev = np.linalg.eigvalsh(pa)
        if np.any((ev < -NEG_EIG_TOL).sum(axis=-1) > 1):
            raise SpectrumViolation("partial transpose with two or more negative eigenvalues")
    return np.linalg.det(pa).real


@dataclass
class _Tally:
    n: int = 0
    separable: int = 0
    ties: int = 0
    det_min: float = math.inf
    det_max: float = -math.inf
    det_rho_max: float = -math.inf
    pt_pow: np.ndarray | None = None
    pt_pow2: np.ndarray | None = None
    joint_pow: np.ndarray | None = None
    joint_pow2: np.ndarray | None = None
    biv: np.ndarray | None = None
    biv2: np.ndarray | None = None

    def merge(self, other: "_Tally") -> None:
        self.n += other.n
        self.separable += other.separable
        self.ties += other.ties
        self.det_min = min(self.det_min, other.det_min)
        self.det_max = max(self.det_max, other.det_max)
        self.det_rho_max = max(self.det_rho_max, other.det_rho_max)
        for name in ("pt_pow", "pt_pow2", "joint_pow", "joint_pow2", "biv", "biv2"):
            mine, theirs = getattr(self, name), getattr(other, name)
            if theirs is not None:
                setattr(self, name, theirs.copy() if mine is None else mine + theirs)


def _powers(x: np.ndarray, order: int) -> np.ndarray:
    return np.cumprod(np.concatenate([np.ones((x.size, 1)), np.repeat(x[:, None], order, axis=1)], axis=1), axis=1)


def _run_chunk(algebra, seed, chunk, size, moment_order, bivariate_order, spectrum_check) -> _Tally:
    rng = _chunk_rng(seed, chunk)
    A, B, det_rho = sample_hs_batch(algebra, rng, size)
    d = pt_determinants(algebra, A, B, spectrum_check)
    ties = np.abs(d) < TIE_TOL
    t = _Tally(
        n=size,
        separable=int(np.count_nonzero((d >= 0) | ties)),
        ties=int(np.count_nonzero(ties)),
        det_min=float(d.min()),
        det_max=float(d.max()),
        det_rho_max=float(det_rho.max()),
    )
    if moment_order:
        p = _powers(d, 2 * moment_order)
        t.pt_pow = p[:, : moment_order + 1].sum(axis=0)
        t.pt_pow2 = p[:, 0::2].sum(axis=0)
        q = _powers(d * det_rho, 2 * moment_order)
        t.joint_pow = q[:, : moment_order + 1].sum(axis=0)
        t.joint_pow2 = q[:, 0::2].sum(axis=0)
    if bivariate_order:
        pd = _powers(d, bivariate_order)
        pr = _powers(det_rho, bivariate_order)
        outer = pd[:, :, None] * pr[:, None, :]
        t.biv = outer.sum(axis=0)
        t.biv2 = (outer * outer).sum(axis=0)
    return t


@dataclass(frozen=True)
class McEstimate:
    """Separability fraction with its binomial standard error."""

    probability_estimate: float
    standard_error: float
    samples: int
    seed: int
    algebra: DivisionAlgebra
    ties: int = 0
    det_min: float = math.nan
    det_max: float = math.nan

    @classmethod
    def from_counts(cls, separable: int, samples: int, seed: int, algebra, **extra) -> "McEstimate":
        p = separable / samples
        return cls(p, math.sqrt(p * (1 - p) / samples), samples, seed, algebra, **extra)

    def z_score(self, reference: float) -> float:
        if self.standard_error == 0:
            return 0.0 if self.probability_estimate == reference else math.inf
        return (self.probability_estimate - float(reference)) / self.standard_error

    @property
    def det_in_range(self) -> bool:
        return DET_LO - RANGE_TOL <= self.det_min and self.det_max <= DET_HI + RANGE_TOL


@dataclass(frozen=True)
class MomentEstimates:
    """Sample means (index = power) with standard errors."""

    algebra: DivisionAlgebra
    samples: int
    seed: int
    pt: tuple[float, ...]
    pt_stderr: tuple[float, ...]
    joint: tuple[float, ...]
    joint_stderr: tuple[float, ...]
    bivariate: np.ndarray | None = field(default=None, compare=False)
    bivariate_stderr: np.ndarray | None = field(default=None, compare=False)

    def moment_sequence(self, which: str = "pt"):
        from ..recon import MomentSequence

        means, errs = (self.pt, self.pt_stderr) if which == "pt" else (self.joint, self.joint_stderr)
        interval = (DET_LO, DET_HI) if which == "pt" else (DET_LO * DET_HI, DET_HI**2)
        return MomentSequence(
            moments=list(means),
            stderr=list(errs),
            interval=interval,
            metadata={"algebra": self.algebra.value, "seed": self.seed, "samples": self.samples, "kind": which},
        )

    def to_csv(self) -> str:
        return moments_csv(self.pt, self.pt_stderr, self.samples, self.algebra, self.seed)


@dataclass(frozen=True)
class McRun:
    estimate: McEstimate
    moments: MomentEstimates | None
    det_rho_max: float


def _mean_and_stderr(s1: np.ndarray, s2: np.ndarray, n: int):
    mean = s1 / n
    if n > 1:
        var = np.maximum(s2 / n - mean * mean, 0.0) * n / (n - 1)
        err = np.sqrt(var / n)
    else:
        err = np.full_like(mean, math.inf)
    return mean, err


def _floats(a: np.ndarray) -> tuple[float, ...]:
    return tuple(float(x) for x in a)


def run_mc(
    algebra,
    samples: int,
    seed: int = 0,
    threads: int = 1,
    moment_order: int = 0,
    bivariate_order: int = 0,
    spectrum_check: bool = True,
) -> McRun:
    """Sample, tally the PPT test and accumulate determinantal power sums."""
    algebra = DivisionAlgebra.parse(algebra)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if threads < 1:
        raise ValueError("threads must be at least 1")
    sizes = [CHUNK] * (samples // CHUNK)
    if samples % CHUNK:
        sizes.append(samples % CHUNK)
    args = [(algebra, seed, c, s, moment_order, bivariate_order, spectrum_check) for c, s in enumerate(sizes)]
    total = _Tally()
    if threads == 1:
        for a in args:
            total.merge(_run_chunk(*a))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for t in pool.map(lambda a: _run_chunk(*a), args):
                total.merge(t)

    est = McEstimate.from_counts(
        total.separable, samples, seed, algebra, ties=total.ties, det_min=total.det_min, det_max=total.det_max
    )
    moments = None
    if moment_order:
        n = total.n
        # pt_pow2[k] holds the sum of d**(2k), the square of the k-th power
        pt_m, pt_e = _mean_and_stderr(total.pt_pow, total.pt_pow2, n)
        jm, je = _mean_and_stderr(total.joint_pow, total.joint_pow2, n)
        pt_m[0] = jm[0] = 1.0
        pt_e[0] = je[0] = 0.0
        bm = be = None
        if bivariate_order:
            bm, be = _mean_and_stderr(total.biv, total.biv2, n)
        moments = MomentEstimates(
            algebra, samples, seed, _floats(pt_m), _floats(pt_e), _floats(jm), _floats(je), bm, be
        )
    return McRun(est, moments, total.det_rho_max)


def mc_separability(algebra, samples: int, seed: int = 0, threads: int = 1) -> McEstimate:
    return run_mc(algebra, samples, seed, threads).estimate


def mc_moments(
    algebra, max_order: int, samples: int, seed: int = 0, threads: int = 1, bivariate_order: int = 0
) -> MomentEstimates:
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    return run_mc(algebra, samples, seed, threads, moment_order=max_order, bivariate_order=bivariate_order).moments


MOMENT_HEADER = ("order", "moment", "stderr", "samples", "algebra", "seed")


def moments_csv(moments, stderr, samples: int, algebra, seed: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MOMENT_HEADER)
    tag = DivisionAlgebra.parse(algebra).value
    for k, (m, e) in enumerate(zip(moments, stderr)):
        w.writerow([k, f"{m:.17g}", f"{e:.17g}", samples, tag, seed])
    return buf.getvalue()
