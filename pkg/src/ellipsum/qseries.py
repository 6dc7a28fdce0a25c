"""Truncated series in q = exp(2 pi i tau) with polynomial tau-dependence.

A :class:`QTauSeries` stores finitely many terms ``c * tau**i * q**j`` with
``0 <= j <= q_order`` and arbitrary-precision complex coefficients.  The class
supports ring arithmetic, differentiation in tau, the regularized primitive
(antiderivative toward ``i*infinity`` with the boundary constant discarded),
and guarded numerical evaluation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import mpmath as mp

from .numkernel import PrecisionCtx

__all__ = [
    "Tau",
    "QTauSeries",
    "GuardError",
    "reg_primitive",
    "eval_at",
    "eval_with_bound",
    "auto_q_order",
]


class GuardError(ValueError):
    """A numeric guard (convergence/precision precondition) was violated."""


@dataclass(frozen=True)
class Tau:
    """Point in the upper half plane."""

    value: mp.mpc

    def __init__(self, value):
        v = mp.mpc(value)
        if not mp.im(v) > 0:
            raise GuardError("tau must have positive imaginary part")
        object.__setattr__(self, "value", v)

    @property
    def q(self) -> mp.mpc:
        return mp.exp(2j * mp.pi * self.value)

    @property
    def abs_q(self) -> mp.mpf:
        return mp.exp(-2 * mp.pi * mp.im(self.value))


def as_tau(value) -> Tau:
    return value if isinstance(value, Tau) else Tau(value)


_ZERO_TOL_SHIFT = 15


class QTauSeries:
    """Finite sum of ``c * tau**i * q**j`` terms, truncated at ``q**q_order``."""

    __slots__ = ("q_order", "coeffs")

    def __init__(self, q_order: int, coeffs=None):
        if q_order < 0:
            raise ValueError("q_order must be nonnegative")
        self.q_order = int(q_order)
        clean = {}
        for (i, j), c in (coeffs or {}).items():
            i, j = int(i), int(j)
            if i < 0 or j < 0:
                raise ValueError("tau and q exponents must be nonnegative")
            if j > self.q_order:
                continue
            c = mp.mpc(c)
            if c != 0:
                clean[(i, j)] = clean.get((i, j), mp.mpc(0)) + c
        self.coeffs = {k: v for k, v in clean.items() if v != 0}

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, q_order: int) -> "QTauSeries":
        return cls(q_order, {(0, 0): mp.mpc(c)})

    @classmethod
    def tau_power(cls, i: int, q_order: int, c=1) -> "QTauSeries":
        return cls(q_order, {(i, 0): mp.mpc(c)})

    # -- ring operations ----------------------------------------------------
    def add(self, other: "QTauSeries") -> "QTauSeries":
        order = min(self.q_order, other.q_order)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, mp.mpc(0)) + c
        return QTauSeries(order, out)

    def sub(self, other: "QTauSeries") -> "QTauSeries":
        return self.add(other.scale(-1))

    def mul(self, other: "QTauSeries") -> "QTauSeries":
        order = min(self.q_order, other.q_order)
        out: dict = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                j = j1 + j2
                if j > order:
                    continue
                key = (i1 + i2, j)
                out[key] = out.get(key, mp.mpc(0)) + c1 * c2
        return QTauSeries(order, out)

    def scale(self, c) -> "QTauSeries":
        c = mp.mpc(c)
        return QTauSeries(self.q_order, {k: v * c for k, v in self.coeffs.items()})

    __add__ = add
    __sub__ = sub
    __mul__ = mul

    def dtau(self) -> "QTauSeries":
        """Derivative d/dtau: tau-power rule plus q**j -> 2 pi i j q**j."""
        out: dict = {}
        two_pi_i = 2j * mp.pi
        for (i, j), c in self.coeffs.items():
            if i > 0:
                key = (i - 1, j)
                out[key] = out.get(key, mp.mpc(0)) + c * i
            if j > 0:
                key = (i, j)
                out[key] = out.get(key, mp.mpc(0)) + c * two_pi_i * j
        return QTauSeries(self.q_order, out)

    def truncate(self, q_order: int) -> "QTauSeries":
        return QTauSeries(min(q_order, self.q_order), self.coeffs)

    def max_abs_coeff(self) -> mp.mpf:
        if not self.coeffs:
            return mp.mpf(0)
        return max(abs(c) for c in self.coeffs.values())

    def drop_negligible(self, threshold) -> "QTauSeries":
        return QTauSeries(
            self.q_order,
            {k: c for k, c in self.coeffs.items() if abs(c) > threshold},
        )

    def coeff(self, tau_exp: int, q_exp: int) -> mp.mpc:
        return self.coeffs.get((tau_exp, q_exp), mp.mpc(0))

    # -- serialization ------------------------------------------------------
    def to_json(self) -> str:
        terms = [
            {
                "tau_exp": i,
                "q_exp": j,
                "re": mp.nstr(mp.re(c), mp.mp.dps, strip_zeros=False),
                "im": mp.nstr(mp.im(c), mp.mp.dps, strip_zeros=False),
            }
            for (i, j), c in sorted(self.coeffs.items())
        ]
        return json.dumps({"q_order": self.q_order, "terms": terms})

    @classmethod
    def from_json(cls, text: str) -> "QTauSeries":
        data = json.loads(text)
        coeffs = {
            (t["tau_exp"], t["q_exp"]): mp.mpc(mp.mpf(t["re"]), mp.mpf(t["im"]))
            for t in data["terms"]
        }
        return cls(data["q_order"], coeffs)

    def __repr__(self) -> str:
        return f"QTauSeries(q_order={self.q_order}, nterms={len(self.coeffs)})"


def reg_primitive(f: QTauSeries) -> QTauSeries:
    """Regularized primitive toward i*infinity: the unique antiderivative F
    with d/dtau F = -f whose tau-polynomial part has no constant of
    integration and whose q-part decays at the cusp."""
    out: dict = {}
    two_pi_i = 2j * mp.pi

    def put(key, c):
        out[key] = out.get(key, mp.mpc(0)) + c

    for (i, j), c in f.coeffs.items():
        if j == 0:
            put((i + 1, 0), -c / (i + 1))
        else:
            denom = two_pi_i * j
            fall = mp.mpc(1)  # falling factorial i*(i-1)*...*(i-s+1)
            sign = 1
            for s in range(i + 1):
                put((i - s, j), -c * sign * fall / denom ** (s + 1))
                fall *= i - s
                sign = -sign
                if fall == 0:
                    break
    return QTauSeries(f.q_order, out)


def auto_q_order(tau, ctx: PrecisionCtx) -> int:
    """Smallest N with |q|**(N+1) <= 10**-(digits+guard)."""
    t = as_tau(tau)
    with ctx.workprec():
        decay = 2 * mp.pi * mp.im(t.value) / mp.log(10)  # digits gained per power
        return max(1, int(mp.ceil(ctx.dps / decay)) )


def eval_with_bound(f: QTauSeries, tau, ctx: PrecisionCtx):
    """Evaluate the series at tau; returns ``(value, truncation_bound)``.

    Raises :class:`GuardError` if the truncation bound is not below the
    context's target error.
    """
    t = as_tau(tau)
    with ctx.workprec():
        absq = t.abs_q
        maxc = f.max_abs_coeff()
        bound = absq ** (f.q_order + 1) / (1 - absq) * maxc
        if maxc > 0 and bound > ctx.eps:
            raise GuardError(
                f"q_order={f.q_order} insufficient at Im(tau)={mp.nstr(mp.im(t.value), 8)}: "
                f"truncation bound {mp.nstr(bound, 5)} exceeds target {mp.nstr(ctx.eps, 5)}"
            )
        q = t.q
        tv = t.value
        tau_pows: dict[int, mp.mpc] = {0: mp.mpc(1)}
        q_pows: dict[int, mp.mpc] = {0: mp.mpc(1)}
        total = mp.mpc(0)
        for (i, j), c in sorted(f.coeffs.items()):
            if i not in tau_pows:
                tau_pows[i] = tv**i
            if j not in q_pows:
                q_pows[j] = q**j
            total += c * tau_pows[i] * q_pows[j]
        return +total, +bound


def eval_at(f: QTauSeries, tau, ctx: PrecisionCtx):
    """Evaluate the series at tau under the truncation guard."""
    return eval_with_bound(f, tau, ctx)[0]
