"""Binding bounds and device feasibility for the two-basis quantum commitment.

All binomial sums are evaluated in log space so that n up to 10^6 is fine.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammainc, gammaln, logsumexp

from relcommit.qcommit.states import BasisPair, DeviceModel

LN10 = math.log(10)


class InfeasibleError(ValueError):
    pass


def floor_mul(delta: float, n: int) -> int:
    """floor(delta·n) with delta read as the decimal it was written as."""
    return math.floor(Fraction(repr(float(delta))) * n)


def _check_delta(delta: float, lam1: float) -> None:
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta >= lam1:
        raise InfeasibleError(
            f"delta must satisfy delta < lambda_1 = {lam1:.6f} (binding fails once the tolerated "
            f"error reaches lambda_1); got delta = {delta}")


def log_binomial_cdf(k: int, n: int, p: float) -> float:
    """log sum_{j<=k} C(n,j) p^j (1-p)^(n-j)."""
    if k < 0:
        return -math.inf
    k = min(k, n)
    j = np.arange(k + 1)
    logc = gammaln(n + 1) - gammaln(j + 1) - gammaln(n - j + 1)
    with np.errstate(divide="ignore"):
        terms = logc + j * np.log(p) + (n - j) * np.log1p(-p)
    return float(logsumexp(terms))


def log_chernoff(n: float, delta: float, lam1: float) -> float:
    return -((math.sqrt(lam1) - delta / math.sqrt(lam1)) ** 2) * n / 2


@dataclass(frozen=True)
class EpsilonBound:
    n: int
    delta: float
    lambda0: float
    lambda1: float
    log_exact: float
    log_chernoff: float
    formula: str

    @property
    def exact(self) -> float:
        return math.exp(self.log_exact)

    @property
    def chernoff(self) -> float:
        return math.exp(self.log_chernoff)

    @property
    def log_epsilon(self) -> float:
        return self.log_exact if self.delta == 0 else self.log_chernoff

    @property
    def epsilon(self) -> float:
        return math.exp(self.log_epsilon)

    def to_json(self) -> dict:
        return {
            "n": self.n, "delta": self.delta, "lambda0": self.lambda0, "lambda1": self.lambda1,
            "epsilon": self.epsilon, "log10_epsilon": self.log_epsilon / LN10,
            "exact": self.exact, "log10_exact": self.log_exact / LN10,
            "chernoff": self.chernoff, "log10_chernoff": self.log_chernoff / LN10,
            "formula": self.formula,
        }


def epsilon_bound(n: int, delta: float, pair: BasisPair | None = None) -> EpsilonBound:
    """Bound on p0 + p1 - 1 after n rounds with error tolerance delta.

    delta = 0 gives lambda0^n. Otherwise the exact binomial tail
    sum_{k <= floor(delta n)} C(n,k) lambda0^(n-k) lambda1^k is returned next
    to its Chernoff relaxation exp(-(sqrt(lambda1) - delta/sqrt(lambda1))^2 n / 2),
    and the latter is the reported epsilon.
    """
    pair = pair or BasisPair.bb84()
    lam0, lam1 = pair.lambda0, pair.lambda1
    if n < 1:
        raise ValueError("n must be positive")
    _check_delta(delta, lam1)
    if delta == 0:
        log_exact = n * math.log(lam0)
        formula = "epsilon = lambda0^n, lambda0 = (1 + c)/2"
    else:
        # lambda0 + lambda1 = 1, so the sum is a Binomial(n, lambda1) lower tail
        log_exact = log_binomial_cdf(floor_mul(delta, n), n, lam1)
        formula = ("epsilon = exp(-(sqrt(lambda1) - delta/sqrt(lambda1))^2 n / 2); exact = "
                   "sum_{k<=floor(delta n)} C(n,k) lambda0^(n-k) lambda1^k, lambda1 = (1 - c)/2")
    lc = log_chernoff(n, delta, lam1)
    if log_exact > lc + 1e-9 * max(1.0, abs(lc)):
        raise ArithmeticError(f"exact tail {log_exact} exceeds its Chernoff bound {lc}")
    return EpsilonBound(n, delta, lam0, lam1, log_exact, lc, formula)


@dataclass(frozen=True)
class MultiphotonEpsilon:
    n: int
    rounds: int          # size of the reported valid set, ceil(gamma n)
    p_multi: float
    k_threshold: float
    log_epsilon: float
    formula: str

    @property
    def epsilon(self) -> float:
        return math.exp(self.log_epsilon)

    def to_json(self) -> dict:
        return {"n": self.n, "valid_rounds": self.rounds, "p_multiphoton": self.p_multi,
                "k_threshold": self.k_threshold, "epsilon": self.epsilon,
                "log10_epsilon": self.log_epsilon / LN10, "formula": self.formula}


def multiphoton_probability(mu: float) -> float:
    """Pr[a weak-coherent pulse carries two or more photons] = 1 - e^-mu (1 + mu)."""
    return float(gammainc(2, mu)) if mu > 0 else 0.0


def effective_delta(delta: float, rounds: int, k: int) -> float:
    """Error allowance left on the single-photon rounds when k of ``rounds`` are multiphoton."""
    if k >= rounds:
        return math.inf
    return delta * rounds / (rounds - k)


def multiphoton_epsilon(n: int, gamma: float, delta: float, mu: float, pair: BasisPair | None = None) -> MultiphotonEpsilon:
    """Binding bound against an Alice who exploits multiphoton pulses.

    The number of multiphoton pulses among the n sent is Binomial(n, p_m).
    With k of them inside the N = ceil(gamma n) reported rounds, the bound on
    the remaining N - k rounds is the Chernoff expression at the effective
    allowance delta N / (N - k), or lambda0^(N-k) when delta = 0; once
    k >= N (1 - delta / lambda1) nothing is guaranteed and the term is 1.
    """
    pair = pair or BasisPair.bb84()
    lam0, lam1 = pair.lambda0, pair.lambda1
    if n < 1 or not 0 < gamma <= 1 or mu < 0:
        raise ValueError("need n >= 1, 0 < gamma <= 1 and mu >= 0")
    _check_delta(delta, lam1)
    rounds = math.ceil(Fraction(repr(float(gamma))) * n)
    k_t = rounds * (1 - delta / lam1)
    k = np.arange(n + 1)
    rem = (rounds - k).astype(float)
    guarded = k < k_t
    log_cond = np.zeros(n + 1)
    r = rem[guarded]
    if delta == 0:
        log_cond[guarded] = r * math.log(lam0)
    else:
        log_cond[guarded] = -0.5 * (np.sqrt(r * lam1) - delta * rounds / np.sqrt(r * lam1)) ** 2
    p_m = multiphoton_probability(mu)
    if p_m == 0:
        log_eps = float(log_cond[0])
    else:
        log_pm = math.log(p_m)
        log_q = -mu + math.log1p(mu)  # log(1 - p_m)
        logc = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
        log_pmf = logc + k * log_pm + (n - k) * log_q
        log_eps = float(logsumexp(log_pmf + log_cond))
        if log_eps > -math.log(2):
            # near saturation sum the complement 1 - eps instead, which rounds far less
            with np.errstate(divide="ignore"):
                log_gap = float(logsumexp(log_pmf[guarded] + np.log(-np.expm1(log_cond[guarded]))))
            log_eps = math.log1p(-math.exp(log_gap)) if log_gap < 0 else -math.inf
    formula = ("epsilon = sum_k C(n,k) p_m^k (1-p_m)^(n-k) Pr[cheat | k], p_m = 1 - e^-mu (1+mu), "
               "Pr[cheat | k] = exp(-(sqrt((N-k) lambda1) - delta N / sqrt((N-k) lambda1))^2 / 2) for "
               "k < N (1 - delta/lambda1), else 1; N = ceil(gamma n)")
    return MultiphotonEpsilon(n, rounds, p_m, k_t, min(0.0, log_eps), formula)


# -- device feasibility -----------------------------------------------------

@dataclass(frozen=True)
class Feasibility:
    correct: bool
    secure: bool
    combined: bool
    achievable: bool     # some mu > 0 satisfies the combined requirement
    best_mu: float | None
    best_margin: float | None
    margins: Mapping[str, float]

    def to_json(self) -> dict:
        return asdict(self)


def combined_margin(mu: float, eta: float, err: float, lam1: float) -> float:
    """e^-mu (1 + mu) + (1 - err/lambda1)(1 - e^-mu eta) - 1, evaluated without cancellation."""
    return float(-gammainc(2, mu) + (1 - err / lam1) * -math.expm1(-mu * eta)) if mu > 0 else 0.0


def feasibility(dev: DeviceModel, pair: BasisPair | None = None) -> Feasibility:
    pair = pair or BasisPair.bb84()
    lam1 = pair.lambda1
    mu, eta, err, gamma, delta = dev.mu, dev.eta, dev.err, dev.gamma, dev.delta
    no_click = math.exp(-mu * eta)
    m_correct = 1 - (no_click + gamma)
    single = 1 - multiphoton_probability(mu)   # e^-mu (1 + mu)
    m_secure = single + (1 - delta / lam1) * gamma - 1
    m_combined = combined_margin(mu, eta, err, lam1)
    achievable = err < lam1 and eta > 0
    best_mu = best = None
    if achievable:
        res = minimize_scalar(lambda s: -combined_margin(math.exp(s), eta, err, lam1),
                              bounds=(-40.0, 5.0), method="bounded", options={"xatol": 1e-10})
        best_mu, best = math.exp(res.x), -res.fun
    return Feasibility(
        correct=m_correct > 0 and err < delta,
        secure=m_secure > 0,
        combined=m_combined > 0,
        achievable=achievable,
        best_mu=best_mu,
        best_margin=best,
        margins={"correct": m_correct, "secure": m_secure, "combined": m_combined, "err_vs_delta": delta - err},
    )


SWEEP_FIELDS = ("mu", "eta", "err", "gamma", "delta")


def feasibility_sweep(ranges: Mapping[str, Iterable[float]], base: DeviceModel, pair: BasisPair | None = None) -> list[dict]:
    """One row per grid point; parameters not in ``ranges`` come from ``base``."""
    unknown = set(ranges) - set(SWEEP_FIELDS)
    if unknown:
        raise ValueError(f"cannot sweep {sorted(unknown)}")
    names = [f for f in SWEEP_FIELDS if f in ranges]
    axes = [list(ranges[f]) for f in names]
    if not names or any(not a for a in axes):
        raise ValueError("empty sweep grid")
    rows = []
    for point in product(*axes):
        dev = replace(base, **dict(zip(names, point)))
        f = feasibility(dev, pair)
        rows.append({**{k: getattr(dev, k) for k in SWEEP_FIELDS}, "correct": f.correct, "secure": f.secure,
                     "combined": f.combined, "achievable": f.achievable})
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (int(v) if isinstance(v, bool) else repr(v)) for k, v in r.items()})
    return buf.getvalue()
