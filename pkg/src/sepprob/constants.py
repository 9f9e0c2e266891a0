"""Reference constants with symbolic definitions and frozen 50-digit expansions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath.ctx_mp import MPContext

DIGITS = 50


@dataclass(frozen=True)
class ReferenceConstant:
    name: str
    symbolic: str
    provenance: str
    decimal: str
    exact: Fraction | None = None
    evaluate: Callable[[MPContext], mpmath.mpf] | None = None

    def value(self, dps: int = DIGITS + 10):
        ctx = MPContext()
        ctx.dps = dps
        if self.exact is not None:
            return ctx.mpf(self.exact.numerator) / self.exact.denominator
        return self.evaluate(ctx)

    def digits_match(self, digits: int = DIGITS) -> bool:
        """Compare the frozen literal with a fresh evaluation at ``digits`` significant digits."""
        ctx = MPContext()
        ctx.dps = digits + 15
        fresh = self.value(digits + 15)
        literal = ctx.mpf(self.decimal)
        return abs(fresh - literal) <= abs(fresh) * ctx.mpf(10) ** (1 - digits)


def _rat(name, p, q, provenance, decimal):
    return ReferenceConstant(name, f"{p}/{q}" if q != 1 else str(p), provenance, decimal, exact=Fraction(p, q))


GRID = "series value on the half-integer grid"
SPECIAL = "series value at a negative point"
BOUNDARY = "boundary-state probability, one half of the separability probability"
VOLUME = "Hilbert-Schmidt volume of the separable states"

REFERENCE = (
    _rat("P(0)", 1, 1, GRID, "1"),
    _rat("P(1/2)", 29, 64, GRID + " (real case)", "0.453125"),
    _rat("P(1)", 8, 33, GRID + " (complex case)", "0.24242424242424242424242424242424242424242424242424"),
    _rat("P(2)", 26, 323, GRID + " (quaternion case)", "0.080495356037151702786377708978328173374613003095975"),
    _rat("P(-1/2)", 2, 3, SPECIAL, "0.66666666666666666666666666666666666666666666666667"),
    _rat("P(-1/4)", 2, 1, SPECIAL, "2"),
    _rat("P(-1)", 2, 5, SPECIAL, "0.4"),
    _rat("P(-3/2)", 2, 3, SPECIAL, "0.66666666666666666666666666666666666666666666666667"),
    _rat("P'(1)", -130577, 457380, "first derivative at alpha=1", "-0.28548909003454457999912545367090821636276181730727"),
    _rat("P'(0)", -2, 1, "first derivative at alpha=0", "-2"),
    ReferenceConstant(
        "P''(0)",
        "40 - 20*zeta(2)",
        "second derivative at alpha=0",
        "7.1013186630354712705516966670794962156210019758640",
        evaluate=lambda ctx: 40 - 20 * ctx.zeta(2),
    ),
    ReferenceConstant(
        "P(-1/3)",
        "2 + 3*Gamma(1/3)^3/(4*pi^2)",
        SPECIAL + "; 2 plus Baxter's four-coloring constant",
        "3.4609984862063183581588731178460596970389313558075",
        evaluate=lambda ctx: 2 + 3 * ctx.gamma(ctx.mpf(1) / 3) ** 3 / (4 * ctx.pi**2),
    ),
    _rat("boundary real", 29, 128, BOUNDARY, "0.2265625"),
    _rat("boundary complex", 4, 33, BOUNDARY, "0.12121212121212121212121212121212121212121212121212"),
    _rat("boundary quaternion", 13, 323, BOUNDARY, "0.040247678018575851393188854489164086687306501547988"),
    ReferenceConstant(
        "volume real",
        "29*pi^4/61931520",
        VOLUME + " (real case)",
        "0.000045612696733199357610741180710120601371355006053588",
        evaluate=lambda ctx: 29 * ctx.pi**4 / 61931520,
    ),
    ReferenceConstant(
        "volume complex",
        "pi^6/449513064000",
        VOLUME + " (complex case)",
        "0.0000000021387347122247473480108232041336620616374734062925",
        evaluate=lambda ctx: ctx.pi**6 / 449513064000,
    ),
    ReferenceConstant(
        "volume quaternion",
        "pi^12/3914156909371803494400000",
        VOLUME + " (quaternion case)",
        "2.3613493350518575053768736581517477578160860151601e-19",
        evaluate=lambda ctx: ctx.pi**12 / 3914156909371803494400000,
    ),
)

BY_NAME = {c.name: c for c in REFERENCE}

# denominators of the separable volumes in factored form
FACTORIZATIONS = {
    61931520: {2: 16, 3: 3, 5: 1, 7: 1},
    449513064000: {2: 6, 3: 6, 5: 3, 7: 2, 11: 2, 13: 1},
    3914156909371803494400000: {2: 14, 3: 10, 5: 5, 7: 3, 11: 2, 13: 1, 17: 2, 19: 2, 23: 1},
}


def factorization_holds(n: int, powers: dict[int, int]) -> bool:
    prod = 1
    for p, e in powers.items():
        prod *= p**e
    return prod == n


def halving_holds() -> bool:
    """The boundary constants are exactly half of the separability values."""
    pairs = (("boundary real", "P(1/2)"), ("boundary complex", "P(1)"), ("boundary quaternion", "P(2)"))
    return all(BY_NAME[b].exact * 2 == BY_NAME[p].exact for b, p in pairs)
