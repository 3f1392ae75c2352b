"""Closed-form phase diagram in the (tau, alpha) plane.

Region predicates, hierarchy exponents, leading constants of the ultra-fast
mechanisms, the ``f_k`` recursion behind the k-hop construction and the
timeblock arithmetic used by hierarchy timing checks.
"""
from dataclasses import asdict, dataclass
import enum
import math
from typing import NamedTuple, Optional


from .errors import UsageError

PHI = (1.0 + math.sqrt(5.0)) / 2.0
SQRT2_PLUS_1 = math.sqrt(2.0) + 1.0
K_CAP = 64


class Regime(str, enum.Enum):
    UltraFast = "UltraFast"
    Fast = "Fast"
    Slow = "Slow"
    Boundary = "Boundary"


def _check_domain(tau, alpha):
    if not (math.isfinite(tau) and tau > 2):
        raise UsageError(f"tau must be > 2, got {tau}")
    if not (math.isfinite(alpha) and alpha > 1):
        raise UsageError(f"alpha must be finite and > 1, got {alpha}")


def _near(x, y, tol):
    return abs(x - y) <= tol * max(1.0, abs(y))


def on_boundary(tau, alpha, tol=1e-9):
    """True if (tau, alpha) lies within relative ``tol`` of an active separating curve.

    Only the segments that actually separate two different labels count, e.g.
    ``tau = 5/2`` matters only where ``alpha >= 1/(tau-2) = 2``.
    """
    a_uf = 1.0 / (tau - 2.0)
    a_slow = (tau - 1.0) / (tau - 2.0)
    if _near(tau, 2.5, tol) and alpha >= 2.0 * (1 - tol):
        return True
    if _near(alpha, a_uf, tol) and tau >= 2.5 * (1 - tol):
        return True
    if _near(tau, PHI + 1.0, tol) and alpha >= a_slow * (1 - tol):
        return True
    if _near(alpha, a_slow, tol) and tau >= (PHI + 1.0) * (1 - tol):
        return True
    return False


def raw_label(tau, alpha):
    """Label from the strict region inequalities, ignoring boundaries."""
    if tau < 2.5 or alpha < 1.0 / (tau - 2.0):
        return Regime.UltraFast
    if tau > PHI + 1.0 and alpha > (tau - 1.0) / (tau - 2.0):
        return Regime.Slow
    return Regime.Fast


def gamma_weak(tau, alpha):
    return alpha * (tau - 1.0) / (alpha + tau - 1.0)


def gamma_strong(tau):
    return tau * (tau - 1.0) / (2.0 * tau - 1.0)


def delta_exponent(gamma):
    if not (0 < gamma < 1):
        raise UsageError(f"gamma must lie in (0, 1), got {gamma}")
    return 1.0 / math.log2(1.0 / gamma)


def f_k(tau, k):
    """``f^(2) = tau`` and ``f^(j+1) = tau - 1/f^(j)``."""
    if k < 2 or int(k) != k:
        raise UsageError("k must be an integer >= 2")
    if tau < 2:
        raise UsageError("tau must be >= 2")
    f = float(tau)
    for _ in range(int(k) - 2):
        f = tau - 1.0 / f
    return f


def f_limit(tau):
    if tau < 2:
        raise UsageError("tau must be >= 2")
    return (tau + math.sqrt(tau * tau - 4.0)) / 2.0


def _beta_star(tau, f):
    return 1.0 / ((tau - 2.0) * (tau - 1.0 / f)) - 1.0


def min_k_for_tau(tau):
    """Smallest ``k`` making the k-hop construction feasible, and the open
    supremum of the admissible ``beta`` at that ``k``."""
    if not (2 < tau < 2.5):
        raise UsageError(f"no finite k exists for tau={tau}; the k-hop construction needs 2 < tau < 2.5")
    f = float(tau)
    k = 2
    while (tau - 2.0) >= 1.0 / (tau - 1.0 / f):
        f = tau - 1.0 / f
        k += 1
        if k > 10_000:
            raise UsageError(f"no k up to 10000 is feasible for tau={tau}")
    return k, _beta_star(tau, f)


class UltraFastConstant(NamedTuple):
    constant: float
    mechanism: str
    k: Optional[int] = None
    beta: Optional[float] = None


def _khop(tau):
    # the k-hop construction is only set up for sqrt(2)+1 <= tau < 5/2
    if not (SQRT2_PLUS_1 <= tau < 2.5):
        return None
    best = None
    f = float(tau)
    for k in range(2, K_CAP + 1):
        b = _beta_star(tau, f)
        if b > 0:
            c = 2.0 * (k + 1) / math.log1p(b)
            if best is None or c < best.constant:
                best = UltraFastConstant(c, "khop", k, b)
        f = tau - 1.0 / f
    return best


def ultrafast_constant(tau, alpha):
    """Smallest leading constant C over the applicable mechanisms (rounds
    ``~ C * log log n``)."""
    _check_domain(tau, alpha)
    if raw_label(tau, alpha) is not Regime.UltraFast:
        raise UsageError(f"(tau={tau}, alpha={alpha}) is not in the ultra-fast region")
    cands = []
    if alpha * (tau - 2.0) < 1.0:
        cands.append(UltraFastConstant(4.0 / abs(math.log(alpha * (tau - 2.0))), "weak"))
    if tau < SQRT2_PLUS_1:
        cands.append(UltraFastConstant(6.0 / abs(math.log(tau * (tau - 2.0))), "strong3hop"))
    kh = _khop(tau)
    if kh is not None:
        cands.append(kh)
    return min(cands, key=lambda c: c.constant)


def mcd_label(tau, d):
    """Trivial MCD rule: ultra-fast for ``tau < 3`` (with d >= 2)."""
    if tau <= 2:
        raise UsageError("tau must be > 2")
    if d < 2:
        raise UsageError("the minimum-component rule needs d >= 2")
    if tau < 3:
        return "mcd-ultrafast", 4.0 / abs(math.log(tau - 2.0))
    return "mcd-fast", None


@dataclass
class RegimeReport:
    tau: float
    alpha: float
    label: Regime
    gamma_weak: float
    gamma_strong: float
    delta_weak: Optional[float]
    delta_strong: Optional[float]
    weak_precondition: bool
    strong_precondition: bool
    ultrafast_constant: Optional[float] = None
    mechanism: Optional[str] = None
    min_k: Optional[int] = None
    sup_beta: Optional[float] = None
    fitted_slow_exponent: Optional[float] = None

    def to_dict(self):
        out = asdict(self)
        out["label"] = self.label.value
        return out


def _delta_or_none(g):
    return delta_exponent(g) if 0 < g < 1 else None


def classify(tau, alpha, tol=1e-9):
    _check_domain(tau, alpha)
    if tol < 0:
        raise UsageError("tol must be nonnegative")
    label = Regime.Boundary if on_boundary(tau, alpha, tol) else raw_label(tau, alpha)
    gw, gs = gamma_weak(tau, alpha), gamma_strong(tau)
    rep = RegimeReport(
        tau, alpha, label, gw, gs, _delta_or_none(gw), _delta_or_none(gs),
        weak_precondition=alpha < (tau - 1.0) / (tau - 2.0),
        strong_precondition=tau < PHI + 1.0,
    )
    if raw_label(tau, alpha) is Regime.UltraFast:
        uc = ultrafast_constant(tau, alpha)
        rep.ultrafast_constant, rep.mechanism = uc.constant, uc.mechanism
    if 2 < tau < 2.5:
        rep.min_k, rep.sup_beta = min_k_for_tau(tau)
    return rep


def phase_grid(taus, alphas, tol=1e-9):
    """Labels over a rectangular grid, rows indexed by alpha."""
    return [[classify(t, a, tol).label for t in taus] for a in alphas]


class Timeblock(NamedTuple):
    kind: str
    rank: int
    lo: int
    hi: int


def gap_block(Z, i):
    return Timeblock("gap", i, 4 * i * Z, (4 * i + 1) * Z)


def edge_block(Z, j):
    return Timeblock("edge", j, (4 * j + 2) * Z, (4 * j + 3) * Z)


def timeblocks(Z, R):
    """All gap and edge blocks of a depth-``R`` hierarchy, in time order."""
    if Z < 2 or R < 2:
        raise UsageError("Z and R must both be >= 2")
    ngap = 2 ** (R - 1)
    out = []
    for i in range(ngap):
        out.append(gap_block(Z, i))
        if i < ngap - 1:
            out.append(edge_block(Z, i))
    return out
