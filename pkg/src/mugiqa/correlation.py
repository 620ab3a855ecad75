"""SRCC / PLCC and the five-parameter logistic mapping used before PLCC."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit
from scipy.stats import rankdata

from .errors import DegenerateInput, FitDivergence

N_PARAMS = 5
N_STARTS = 4
MAX_ITER = 5000
REL_TOL = 1e-10


def _pair(x, y, name):
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise DegenerateInput(f"{name}: length mismatch {x.size} vs {y.size}")
    if x.size < 2:
        raise DegenerateInput(f"{name}: need at least 2 samples, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DegenerateInput(f"{name}: non-finite input")
    return x, y


def _pearson(x, y, name):
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = np.dot(xc, xc)
    syy = np.dot(yc, yc)
    if sxx == 0 or syy == 0:
        raise DegenerateInput(f"{name}: input has zero variance")
    r = np.dot(xc, yc) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


def plcc(x, y):
    """Pearson product-moment correlation."""
    x, y = _pair(x, y, "plcc")
    return _pearson(x, y, "plcc")


def srcc(x, y):
    """Spearman correlation as Pearson of average ranks, correct under ties."""
    x, y = _pair(x, y, "srcc")
    return _pearson(rankdata(x), rankdata(y), "srcc")


@dataclass(frozen=True)
class LogisticParams:
    beta1: float
    beta2: float
    beta3: float
    beta4: float
    beta5: float

    @property
    def beta(self):
        return [self.beta1, self.beta2, self.beta3, self.beta4, self.beta5]

    def __call__(self, x):
        return logistic(x, self.beta)


def logistic(x, beta):
    """``b1 * (1/2 - 1 / (1 + exp(b2 * (x - b3)))) + b4 * x + b5``."""
    b1, b2, b3, b4, b5 = beta
    x = np.asarray(x, dtype=np.float64)
    # 1 / (1 + e^z) == expit(-z), overflow-free
    return b1 * (0.5 - expit(-b2 * (x - b3))) + b4 * x + b5


def _sse(beta, x, y):
    with np.errstate(over="ignore", invalid="ignore"):
        r = logistic(x, beta) - y
        value = float(np.dot(r, r))
    return value if np.isfinite(value) else np.inf


def _starts(x, y):
    spread = float(y.max() - y.min())
    if spread == 0:
        spread = 1.0
    sx = float(np.std(x))
    xc, yc = x - x.mean(), y - y.mean()
    sign = -1.0 if np.dot(xc, yc) < 0 else 1.0
    b2 = 1.0 / sx if sx > 0 else 1.0
    b3 = float(x.mean())
    base = np.array([sign * spread, b2, b3, 0.0, float(y.mean())])
    starts = [base]
    for j2, j3 in ((1.5, 0.5), (0.5, 1.5), (1.5, 1.5))[: N_STARTS - 1]:
        # +-50% jitter on slope and centre; centre jitter is in units of std(x)
        # when the mean is ~0 so it does not collapse onto the base start
        shift = (j3 - 1.0) * (abs(b3) if abs(b3) > sx else sx)
        starts.append(np.array([base[0], b2 * j2, b3 + shift, 0.0, base[4]]))
    # the best straight line, so the fit can never lose to it
    slope, intercept = np.polyfit(x, y, 1)
    starts.append(np.array([0.0, b2, b3, slope, intercept]))
    return starts


def fit_logistic(scores, mos):
    """Least-squares fit of the logistic mapping from ``scores`` to ``mos``.

    Nelder-Mead from several starts (the standard initialisation, three
    jittered copies and the least-squares line); each start is restarted at
    its optimum until the SSE gain drops below ``REL_TOL`` times the total
    sum of squares of ``mos``. Returns the best parameters found.
    """
    x, y = _pair(scores, mos, "fit_logistic")
    if x.size < N_PARAMS:
        raise DegenerateInput(f"fit_logistic: need at least {N_PARAMS} points, got {x.size}")
    if np.ptp(x) == 0:
        raise DegenerateInput("fit_logistic: scores have zero variance")

    # tolerance relative to the total sum of squares, so a near-perfect fit still terminates
    sst = float(np.dot(y - y.mean(), y - y.mean()))
    ftol = REL_TOL * (sst if sst > 0 else 1.0)
    best_beta, best_sse = None, np.inf
    for start in _starts(x, y):
        beta, sse = start, _sse(start, x, y)
        if not np.isfinite(sse):
            continue
        for _ in range(5):
            res = minimize(
                _sse, beta, args=(x, y), method="Nelder-Mead",
                # convergence is judged on SSE alone
                options={"maxiter": MAX_ITER, "maxfev": 2 * MAX_ITER, "xatol": np.inf, "fatol": ftol},
            )
            improved = np.isfinite(res.fun) and res.fun < sse
            if improved:
                gain = sse - float(res.fun)
                beta, sse = res.x, float(res.fun)
            if not improved or gain <= ftol:
                break
        if sse < best_sse:
            best_beta, best_sse = beta, sse
    if best_beta is None or not np.all(np.isfinite(best_beta)):
        raise FitDivergence("logistic fit did not converge from any start")
    return LogisticParams(*(float(b) for b in best_beta))
