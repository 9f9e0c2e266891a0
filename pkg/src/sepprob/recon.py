"""Legendre-series reconstruction of a density on [a, b] from its power moments.

The variable is mapped to ``y = (2x - a - b)/(b - a)`` on [-1, 1] and the
density of ``y`` is expanded as ``sum_k lambda_k P_k(y)`` with
``lambda_k = (2k+1)/2 E[P_k(y)]``. Monomial coefficients of the Legendre
polynomials come from the three-term recurrence, so the coefficient of each
``lambda_k`` is obtained by one dot product with the moments of ``y``.

Rational inputs keep every stage exact. Floating moments (Monte Carlo
means) are binary rationals and are converted to ``Fraction`` without loss,
so the default pipeline is exact on whatever numbers it is given. A
multiprecision floating pipeline is kept for comparison.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Sequence

import numpy as np
from mpmath.ctx_mp import MPContext

DEFAULT_INTERVAL = (Fraction(-1, 16), Fraction(1, 256))
MAX_MC_DEGREE = 20
HANKEL_TOL = 1e-9


def _exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v)
    fv = float(v)
    if not math.isfinite(fv):
        raise ValueError(f"non-finite moment {v!r}")
    return Fraction(fv)


@dataclass
class MomentSequence:
    """Power moments ``mu_n = E[X**n]``, ``n = 0..d``, of a law on ``interval``."""

    moments: list
    interval: tuple = DEFAULT_INTERVAL
    stderr: list | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.moments = [_exact(m) for m in self.moments]
        self.interval = (_exact(self.interval[0]), _exact(self.interval[1]))
        a, b = self.interval
        if not a < b:
            raise ValueError("interval must satisfy a < b")
        if not self.moments:
            raise ValueError("at least the zeroth moment is required")
        if abs(self.moments[0] - 1) > Fraction(1, 10**12):
            raise ValueError(f"mu_0 must be 1, got {float(self.moments[0])!r}")
        if self.stderr is not None:
            if len(self.stderr) != len(self.moments):
                raise ValueError("stderr must have one entry per moment")
            self.stderr = [float(e) for e in self.stderr]
            if not all(math.isfinite(e) and e >= 0 for e in self.stderr):
                raise ValueError("stderr entries must be finite and nonnegative")
        r = max(abs(a), abs(b))
        for n, m in enumerate(self.moments):
            if abs(m) > r**n * (1 + Fraction(1, 10**12)):
                raise ValueError(f"|mu_{n}| exceeds max(|a|,|b|)^{n}")

    @property
    def order(self) -> int:
        return len(self.moments) - 1

    def truncated(self, order: int) -> "MomentSequence":
        if order > self.order:
            raise ValueError(f"requested order {order} exceeds available order {self.order}")
        err = None if self.stderr is None else self.stderr[: order + 1]
        return MomentSequence(self.moments[: order + 1], self.interval, err, dict(self.metadata))

    def mapped_moments(self, order: int | None = None) -> list[Fraction]:
        """Moments of ``y = s x + t`` on [-1, 1], by exact binomial expansion."""
        order = self.order if order is None else order
        a, b = self.interval
        s = 2 / (b - a)
        t = -(a + b) / (b - a)
        out = []
        for n in range(order + 1):
            out.append(sum(comb(n, k) * s**k * t ** (n - k) * self.moments[k] for k in range(n + 1)))
        return out

    def hankel_ok(self, size: int = 3, tol: float = HANKEL_TOL) -> bool:
        """Positive semidefiniteness of leading Hankel blocks of the mapped moments."""
        y = self.mapped_moments()
        size = min(size, self.order // 2 + 1)
        for m in range(1, size + 1):
            H = np.array([[float(y[i + j]) for j in range(m)] for i in range(m)])
            if np.linalg.eigvalsh(H).min() < -tol:
                return False
        return True


def legendre_monomials(degree: int) -> list[list[Fraction]]:
    """Ascending monomial coefficients of ``P_0 .. P_degree``.

    Uses ``(k+1) P_{k+1} = (2k+1) y P_k - k P_{k-1}``.
    """
    polys = [[Fraction(1)]]
    if degree >= 1:
        polys.append([Fraction(0), Fraction(1)])
    for k in range(1, degree):
        shifted = [Fraction(0)] + [(2 * k + 1) * c for c in polys[k]]
        prev = polys[k - 1] + [Fraction(0)] * (len(shifted) - len(polys[k - 1]))
        polys.append([(u - k * v) / (k + 1) for u, v in zip(shifted, prev)])
    return polys


def legendre_values(y, degree: int) -> list:
    """``P_0(y) .. P_degree(y)`` at one point; exact for rational ``y``."""
    vals = [y * 0 + 1]
    if degree >= 1:
        vals.append(y)
    for k in range(1, degree):
        vals.append(((2 * k + 1) * y * vals[k] - k * vals[k - 1]) / (k + 1))
    return vals


@dataclass(frozen=True)
class LegendreReconstruction:
    degree: int
    lambdas: tuple
    interval: tuple
    context: object = field(default=None, compare=False, repr=False)

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.lambdas)

    def to_y(self, x):
        a, b = self.interval
        if self.exact and not isinstance(x, float):
            x = _exact(x)
            return (2 * x - a - b) / (b - a)
        return (2 * float(x) - float(a + b)) / float(b - a)

    def density(self, x) -> float:
        """Reconstructed density in the original variable (may dip negative)."""
        y = self.to_y(x)
        vals = legendre_values(y, self.degree)
        g = sum(c * p for c, p in zip(self.lambdas, vals))
        a, b = self.interval
        return g * 2 / (b - a) if self.exact and isinstance(g, Fraction) else float(g) * 2 / float(b - a)

    def _antiderivative(self, y):
        vals = legendre_values(y, self.degree + 1)
        total = self.lambdas[0] * vals[1]
        for k in range(1, self.degree + 1):
            total += self.lambdas[k] * (vals[k + 1] - vals[k - 1]) / (2 * k + 1)
        return total

    def cumulative(self, lower, upper):
        a, b = self.interval
        lo, hi = _exact(lower), _exact(upper)
        if not (a <= lo <= hi <= b):
            raise ValueError(f"bounds [{lower}, {upper}] outside the interval [{a}, {b}]")
        if self.exact:
            return self._antiderivative(self.to_y(hi)) - self._antiderivative(self.to_y(lo))
        # the floating coefficients live in a private mpmath context
        ctx = self.context
        ylo, yhi = ((2 * v - a - b) / (b - a) for v in (lo, hi))
        ylo = ctx.mpf(ylo.numerator) / ylo.denominator
        yhi = ctx.mpf(yhi.numerator) / yhi.denominator
        return self._antiderivative(yhi) - self._antiderivative(ylo)

    def density_grid(self, points: int = 1024) -> tuple[np.ndarray, np.ndarray]:
        a, b = float(self.interval[0]), float(self.interval[1])
        xs = np.linspace(a, b, points)
        ys = (2 * xs - a - b) / (b - a)
        lam = np.array([float(c) for c in self.lambdas])
        g = np.polynomial.legendre.legval(ys, lam) * 2 / (b - a)
        return xs, g

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "lambda_k"])
        for k, c in enumerate(self.lambdas):
            w.writerow([k, f"{float(c):.17g}"])
        return buf.getvalue()

    def density_csv(self, points: int = 1024) -> str:
        xs, g = self.density_grid(points)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "g(x)"])
        for x, v in zip(xs, g):
            w.writerow([f"{x:.17g}", f"{v:.17g}"])
        return buf.getvalue()


def legendre_coefficients(m: MomentSequence, degree: int, mode: str = "exact", precision_bits: int = 256) -> LegendreReconstruction:
    """Legendre coefficients ``lambda_0 .. lambda_degree`` from moments.

    ``mode="exact"`` works in rationals; ``mode="float"`` dots mpmath images
    of the same coefficients at ``precision_bits`` bits.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree > m.order:
        raise ValueError(f"degree {degree} exceeds available moment order {m.order}")
    y = m.mapped_moments(degree)
    polys = legendre_monomials(degree)
    if mode == "exact":
        lam = _dot_lambdas(y, polys)
    elif mode == "float":
        ctx = MPContext()
        ctx.prec = precision_bits
        yf = [ctx.mpf(v.numerator) / v.denominator for v in y]
        lam = tuple(
            ctx.mpf(2 * k + 1) / 2 * ctx.fsum(ctx.mpf(c.numerator) / c.denominator * yf[j] for j, c in enumerate(p))
            for k, p in enumerate(polys)
        )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    rec = LegendreReconstruction(degree, lam, m.interval, ctx if mode == "float" else None)
    total = rec.cumulative(*m.interval)
    if abs(total - 1) > 1e-12:
        raise ArithmeticError(f"reconstruction does not integrate to one ({total})")
    return rec


def float_pipeline_agrees(m: MomentSequence, degree: int, precision_bits: int = 256, tol: float = 1e-8) -> bool:
    """Compare the floating pipeline with the rational one for ``degree``."""
    ex = legendre_coefficients(m, degree, "exact")
    fl = legendre_coefficients(m, degree, "float", precision_bits)
    return all(abs(float(e) - float(f)) <= tol for e, f in zip(ex.lambdas, fl.lambdas))


def cumulative_probability(r: LegendreReconstruction, lower, upper):
    return r.cumulative(lower, upper)


def separability_from_moments(m: MomentSequence, degree: int, mode: str = "exact"):
    """Reconstructed mass of ``[0, b]``, the nonnegative part of the interval."""
    r = legendre_coefficients(m, degree, mode)
    return r.cumulative(0, m.interval[1])


def cumulative_weights(m: MomentSequence, degree: int, lower, upper) -> list[Fraction]:
    """``w`` with ``cumulative(lower, upper) = sum_n w_n mu_n`` at this degree."""
    polys = legendre_monomials(degree)
    out = []
    for n in range(degree + 1):
        unit = MomentSequence([Fraction(1)] + [Fraction(0)] * degree, m.interval)
        unit.moments[0], unit.moments[n] = Fraction(int(n == 0)), Fraction(1)
        rec = LegendreReconstruction(degree, _dot_lambdas(unit.mapped_moments(), polys), m.interval)
        out.append(rec.cumulative(lower, upper))
    return out


def _dot_lambdas(y: Sequence[Fraction], polys) -> tuple:
    return tuple(Fraction(2 * k + 1, 2) * sum(c * y[j] for j, c in enumerate(p)) for k, p in enumerate(polys))


def propagated_error(m: MomentSequence, degree: int, lower=0, upper=None) -> float:
    """Linear propagation of the moment standard errors into the cumulative mass."""
    if m.stderr is None:
        return 0.0
    upper = m.interval[1] if upper is None else upper
    w = cumulative_weights(m, degree, lower, upper)
    return math.sqrt(sum(float(wi) ** 2 * e**2 for wi, e in zip(w, m.stderr)))


def choose_degree(m: MomentSequence, tolerance: float, cap: int = MAX_MC_DEGREE) -> int:
    """Largest degree whose propagated statistical error stays below ``tolerance``."""
    best = 0
    for d in range(0, min(cap, m.order) + 1):
        if propagated_error(m, d) <= tolerance:
            best = d
    return best


# ---------------------------------------------------------------- oracle laws


def uniform_moments(order: int, interval=DEFAULT_INTERVAL) -> MomentSequence:
    a, b = (_exact(v) for v in interval)
    mom = [(b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a)) for k in range(order + 1)]
    return MomentSequence(mom, (a, b), metadata={"exact": True, "law": "uniform"})


def beta_moments(p, q, order: int, interval=DEFAULT_INTERVAL) -> MomentSequence:
    """Exact moments of ``a + (b - a) U`` with ``U ~ Beta(p, q)`` (rational p, q)."""
    p, q = _exact(p), _exact(q)
    a, b = (_exact(v) for v in interval)
    u = [Fraction(1)]
    for j in range(order):
        u.append(u[-1] * (p + j) / (p + q + j))
    mom = [sum(comb(n, j) * a ** (n - j) * (b - a) ** j * u[j] for j in range(n + 1)) for n in range(order + 1)]
    return MomentSequence(mom, (a, b), metadata={"exact": True, "law": f"beta({p},{q})"})


# ---------------------------------------------------------------- files


def read_moments_csv(source: "str | Path") -> MomentSequence:
    """Parse the ``order,moment,stderr,samples,algebra,seed`` file."""
    text = Path(source).read_text() if not (isinstance(source, str) and "\n" in source) else source
    rows = list(csv.DictReader(io.StringIO(text)))
    need = {"order", "moment", "stderr"}
    if not rows or not need <= set(rows[0]):
        raise ValueError("moment CSV must have columns order,moment,stderr")
    try:
        rows.sort(key=lambda r: int(r["order"]))
        orders = [int(r["order"]) for r in rows]
        if orders != list(range(len(rows))):
            raise ValueError("moment orders must run 0..d without gaps")
        moments = [Fraction(float(r["moment"])) for r in rows]
        stderr = [float(r["stderr"]) for r in rows]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed moment CSV: {exc}") from exc
    meta = {k: rows[0][k] for k in ("samples", "algebra", "seed") if k in rows[0]}
    return MomentSequence(moments, stderr=stderr, metadata=meta)


def write_moments_csv(m: MomentSequence) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["order", "moment", "stderr", "samples", "algebra", "seed"])
    err = m.stderr or [0.0] * len(m.moments)
    for k, (v, e) in enumerate(zip(m.moments, err)):
        w.writerow([k, f"{float(v):.17g}", f"{e:.17g}", m.metadata.get("samples", ""), m.metadata.get("algebra", ""), m.metadata.get("seed", "")])
    return buf.getvalue()
