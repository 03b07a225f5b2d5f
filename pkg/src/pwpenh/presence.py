"""Speech presence/absence probabilities and the thresholding shape parameters.

The recursive a priori SNR average runs along the coefficient index of each
subband; the local and global averages run across neighbouring subbands.
Defaults come from the constants table of the method: smoothing 0.7,
xi_min -10 dB, xi_max -5 dB, xi_peak 10 dB, windows of half-width 1 and 15.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, UninitializedState


def db_to_lin(db):
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class PresenceConfig:
    kappa: float = 0.7
    xi_min_db: float = -10.0
    xi_max_db: float = -5.0
    xi_peak_db: float = 10.0
    w_local: int = 1
    w_global: int = 15
    kappa_dd: float = 0.98
    eta_min: float = 0.0316
    q_max: float = 0.99

    def __post_init__(self):
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError("kappa must lie in [0, 1]")
        if not 0.0 <= self.kappa_dd <= 1.0:
            raise ValueError("kappa_dd must lie in [0, 1]")
        if not self.xi_min_db < self.xi_max_db:
            raise ValueError("xi_min must be below xi_max")
        if self.w_local < 0 or self.w_global < 0:
            raise ValueError("window half-widths must be >= 0")
        if not 0.0 < self.q_max <= 1.0:
            raise ValueError("q_max must lie in (0, 1]")

    @property
    def xi_min(self):
        return db_to_lin(self.xi_min_db)

    @property
    def xi_max(self):
        return db_to_lin(self.xi_max_db)

    @property
    def xi_peak(self):
        return db_to_lin(self.xi_peak_db)


@dataclass
class PresenceState:
    """Per-stream recursion memory, one slot per subband."""
    xi: np.ndarray = None
    prev_amp_sq: np.ndarray = None
    prev_eta: np.ndarray = None
    xi_subband: np.ndarray = None  # frame average of xi, lagged one frame

    @classmethod
    def initial(cls, n_subbands, config=PresenceConfig()):
        fill = np.full(n_subbands, config.eta_min)
        return cls(xi=fill.copy(), prev_amp_sq=np.zeros(n_subbands),
                   prev_eta=fill.copy(), xi_subband=fill.copy())

    @property
    def initialized(self):
        return self.xi is not None

    def copy(self):
        return PresenceState(*(None if a is None else a.copy() for a in
                               (self.xi, self.prev_amp_sq, self.prev_eta, self.xi_subband)))


@dataclass(frozen=True)
class ShapeParams:
    alpha: float
    beta: float


@dataclass(frozen=True)
class PresenceProbs:
    R: float
    Q: float
    R_local: float
    R_global: float
    R_subband: float
    xi_local: float
    xi_global: float
    xi_subband: float
    mu: float
    v: float


def aposteriori_snr(coeff, sigma_n_sq):
    return np.asarray(coeff, dtype=np.float64) ** 2 / sigma_n_sq


def decision_directed(prev_amp_sq, sigma_n_sq, upsilon, kappa_dd, eta_min):
    """Vectorised decision-directed a priori SNR."""
    eta = kappa_dd * (prev_amp_sq / sigma_n_sq) + (1.0 - kappa_dd) * np.maximum(upsilon - 1.0, 0.0)
    return np.maximum(eta, eta_min)


def apriori_snr_dd(state, k, upsilon, sigma_n_sq=1.0, config=PresenceConfig()):
    """Decision-directed a priori SNR for subband ``k`` (0-based); updates ``state.prev_eta``."""
    if state is None or not state.initialized:
        raise UninitializedState("presence state has not been initialised")
    eta = float(decision_directed(state.prev_amp_sq[k], sigma_n_sq, upsilon,
                                  config.kappa_dd, config.eta_min))
    state.prev_eta[k] = eta
    return eta


def presence_prob(eta_hat, upsilon, q):
    """Posterior speech presence probability given the prior absence ``q``.

    ``q == 1`` gives exactly 0; elementwise on arrays.
    """
    eta_hat = np.asarray(eta_hat, dtype=np.float64)
    upsilon = np.asarray(upsilon, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    v = eta_hat * upsilon / (1.0 + eta_hat)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        odds = q / (1.0 - q) * (1.0 + eta_hat) * np.exp(-v)
        r = np.where(q >= 1.0, 0.0, 1.0 / (1.0 + odds))
    return r if r.ndim else float(r)


def recursive_xi(xi_prev, eta_prev, kappa):
    return kappa * xi_prev + (1.0 - kappa) * eta_prev


def windowed_xi(xi_by_subband, k, w):
    """Uniform average of xi over subbands ``k-w .. k+w`` (0-based ``k``).

    The window is truncated at the ends of the subband axis and renormalised.
    """
    xi = np.asarray(xi_by_subband, dtype=np.float64)
    lo = max(k - w, 0)
    hi = min(k + w, xi.size - 1)
    return float(xi[lo:hi + 1].mean())


def windowed_xi_all(xi_by_subband, w):
    """``windowed_xi`` for every subband at once (cumulative-sum form)."""
    xi = np.asarray(xi_by_subband, dtype=np.float64)
    n = xi.shape[-1]
    csum = np.concatenate([np.zeros(xi.shape[:-1] + (1,)), np.cumsum(xi, axis=-1)], axis=-1)
    idx = np.arange(n)
    lo = np.maximum(idx - w, 0)
    hi = np.minimum(idx + w, n - 1) + 1
    return (csum[..., hi] - csum[..., lo]) / (hi - lo)


def presence_from_xi(xi_tau, config=PresenceConfig()):
    """Local/global presence: 0 at or below xi_min, 1 at or above xi_max, log-linear between."""
    xi_tau = np.asarray(xi_tau, dtype=np.float64)
    xmin, xmax = config.xi_min, config.xi_max
    with np.errstate(divide="ignore", invalid="ignore"):
        ramp = np.log(xi_tau / xmin) / np.log(xmax / xmin)
    r = np.where(xi_tau <= xmin, 0.0, np.where(xi_tau >= xmax, 1.0, np.clip(ramp, 0.0, 1.0)))
    return r if r.ndim else float(r)


def subband_xi(xi_values):
    xi = np.asarray(xi_values, dtype=np.float64)
    if xi.size == 0:
        raise EmptyInput("no xi values to average")
    return float(xi.mean())


def mu_subband(xi_sb, config=PresenceConfig()):
    xi_sb = np.asarray(xi_sb, dtype=np.float64)
    lo = config.xi_peak * config.xi_min
    hi = config.xi_peak * config.xi_max
    with np.errstate(divide="ignore", invalid="ignore"):
        ramp = np.log(xi_sb / lo) / np.log(config.xi_max / config.xi_min)
    mu = np.where(xi_sb <= lo, 0.0, np.where(xi_sb >= hi, 1.0, np.clip(ramp, 0.0, 1.0)))
    return mu if mu.ndim else float(mu)


def subband_presence(xi_sb, xi_sb_prev, config=PresenceConfig()):
    """Subband-level presence: 0 below xi_min, 1 on a rise above xi_min, else ``mu``.

    ``xi_sb_prev`` is the value for the next-lower subband; pass ``None`` (or
    NaN) for the lowest subband, which has no predecessor and takes ``mu``.
    """
    if xi_sb < config.xi_min:
        return 0.0
    if xi_sb_prev is not None and not np.isnan(xi_sb_prev) and xi_sb > xi_sb_prev and xi_sb > config.xi_min:
        return 1.0
    return float(mu_subband(xi_sb, config))


def subband_presence_all(xi_sb, config=PresenceConfig()):
    """``subband_presence`` for every subband, each compared with its lower neighbour."""
    xi_sb = np.asarray(xi_sb, dtype=np.float64)
    prev = np.concatenate([[np.inf], xi_sb[:-1]])
    rising = (xi_sb > prev) & (xi_sb > config.xi_min)
    out = np.where(xi_sb < config.xi_min, 0.0, np.where(rising, 1.0, mu_subband(xi_sb, config)))
    return out


def absence_prob(r_local, r_global, r_subband, q_max=0.99):
    q = 1.0 - np.asarray(r_local) * np.asarray(r_global) * np.asarray(r_subband)
    q = np.minimum(q, q_max)
    return q if np.ndim(q) else float(q)


def shape_params(r, q):
    """``alpha = (1+R) / (2(1+Q))`` and its reciprocal ``beta``."""
    r = np.asarray(r, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    num = 1.0 + r
    den = 2.0 * (1.0 + q)
    alpha, beta = num / den, den / num
    if alpha.ndim:
        return ShapeParams(alpha, beta)
    return ShapeParams(float(alpha), float(beta))


def presence_probs(eta_hat, upsilon, xi_by_subband, k, xi_sb, xi_sb_prev, config=PresenceConfig()):
    """Every intermediate quantity for one coefficient of subband ``k`` (0-based)."""
    xi_local = windowed_xi(xi_by_subband, k, config.w_local)
    xi_global = windowed_xi(xi_by_subband, k, config.w_global)
    r_local = presence_from_xi(xi_local, config)
    r_global = presence_from_xi(xi_global, config)
    r_sub = subband_presence(xi_sb, xi_sb_prev, config)
    q = absence_prob(r_local, r_global, r_sub, config.q_max)
    r = presence_prob(eta_hat, upsilon, q)
    v = eta_hat * upsilon / (1.0 + eta_hat)
    return PresenceProbs(R=r, Q=q, R_local=r_local, R_global=r_global, R_subband=r_sub,
                         xi_local=xi_local, xi_global=xi_global, xi_subband=xi_sb,
                         mu=float(mu_subband(xi_sb, config)), v=v)
