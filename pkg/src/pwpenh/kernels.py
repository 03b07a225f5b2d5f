"""Hot numeric kernels, each with a numba loop and a vectorised numpy twin.

The public ``*_dispatch`` helpers pick the implementation from
``_accel.backend()`` at call time.
"""

from functools import lru_cache

import numpy as np

from . import _accel
from ._accel import njit


# --------------------------------------------------------------------------
# periodic two-channel filter bank step
# --------------------------------------------------------------------------

@njit(cache=True)
def _analysis_step_nb(x, h, g):
    n_frames, n = x.shape
    half = n // 2
    taps = h.shape[0]
    lo = np.zeros((n_frames, half))
    hi = np.zeros((n_frames, half))
    for f in range(n_frames):
        for i in range(half):
            acc_lo = 0.0
            acc_hi = 0.0
            base = 2 * i
            for k in range(taps):
                v = x[f, (base + k) % n]
                acc_lo += h[k] * v
                acc_hi += g[k] * v
            lo[f, i] = acc_lo
            hi[f, i] = acc_hi
    return lo, hi


@njit(cache=True)
def _synthesis_step_nb(lo, hi, h, g):
    n_frames, half = lo.shape
    n = 2 * half
    taps = h.shape[0]
    out = np.zeros((n_frames, n))
    for f in range(n_frames):
        for i in range(half):
            a = lo[f, i]
            d = hi[f, i]
            base = 2 * i
            for k in range(taps):
                out[f, (base + k) % n] += h[k] * a + g[k] * d
    return out


@lru_cache(maxsize=64)
def _periodized_matrix(n, taps_key):
    # rows are the filter shifted by 2, wrapped modulo n
    taps = np.frombuffer(taps_key, dtype=np.float64)
    half = n // 2
    mat = np.zeros((half, n))
    rows = np.repeat(np.arange(half), taps.size)
    cols = (2 * np.arange(half)[:, None] + np.arange(taps.size)[None, :]) % n
    np.add.at(mat, (rows, cols.ravel()), np.tile(taps, half))
    mat.setflags(write=False)
    return mat


def _analysis_step_np(x, h, g):
    n = x.shape[1]
    lo_mat = _periodized_matrix(n, h.tobytes())
    hi_mat = _periodized_matrix(n, g.tobytes())
    return x @ lo_mat.T, x @ hi_mat.T


def _synthesis_step_np(lo, hi, h, g):
    n = 2 * lo.shape[1]
    lo_mat = _periodized_matrix(n, h.tobytes())
    hi_mat = _periodized_matrix(n, g.tobytes())
    return lo @ lo_mat + hi @ hi_mat


def analysis_step(x, h, g):
    """One periodic lowpass/highpass split of each row of ``x`` (2-D)."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if _accel.use_numba():
        return _analysis_step_nb(x, h, g)
    return _analysis_step_np(x, h, g)


def synthesis_step(lo, hi, h, g):
    lo = np.ascontiguousarray(lo, dtype=np.float64)
    hi = np.ascontiguousarray(hi, dtype=np.float64)
    if _accel.use_numba():
        return _synthesis_step_nb(lo, hi, h, g)
    return _synthesis_step_np(lo, hi, h, g)


# --------------------------------------------------------------------------
# per-coefficient presence estimation + custom thresholding
# --------------------------------------------------------------------------
#
# params layout (float64 vector), shared by both implementations
P_KAPPA, P_KAPPA_DD, P_ETA_MIN, P_XI_MIN, P_XI_MAX, P_XI_PEAK, P_Q_MAX, \
    P_GAMMA_FLOOR, P_EPS_POW, P_UPDATE, P_UPDATE_RATE, P_UPDATE_Q = range(12)
N_PARAMS = 12


@njit(cache=True)
def _ramp_prob(x, lo, hi, log_span):
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    r = np.log(x / lo) / log_span
    return min(max(r, 0.0), 1.0)


@njit(cache=True)
def _pct(y, l1, l2, alpha, beta):
    a = abs(y)
    s = 1.0 if y > 0 else (-1.0 if y < 0 else 0.0)
    if a < l1:
        return alpha * s * a * (a / l1) ** (beta - 1.0)
    if a > l2:
        return y
    return (1.0 - alpha) * s * l2 * (a - l1) / (l2 - l1) + alpha * y


@njit(cache=True)
def _enhance_frames_nb(y, offsets, lengths, sigma_n_sq, xi, amp2, eta, xi_sb,
                       w_local, w_global, params, shape):
    n_frames = y.shape[0]
    n_sub = lengths.shape[0]
    kappa = params[P_KAPPA]
    kappa_dd = params[P_KAPPA_DD]
    eta_min = params[P_ETA_MIN]
    xi_min = params[P_XI_MIN]
    xi_max = params[P_XI_MAX]
    xi_peak = params[P_XI_PEAK]
    q_max = params[P_Q_MAX]
    log_span = np.log(xi_max / xi_min)

    t_max = 0
    for k in range(n_sub):
        t_max = max(t_max, lengths[k])
    stride = np.empty(n_sub, dtype=np.int64)
    for k in range(n_sub):
        stride[k] = t_max // lengths[k]

    out = np.zeros_like(y)
    q_mean = np.zeros((n_frames, n_sub))
    lam1 = np.zeros((n_frames, n_sub))
    noise_track = np.zeros((n_frames, n_sub))
    r_sub = np.zeros(n_sub)
    xi_sum = np.zeros(n_sub)
    active = np.zeros(n_sub, dtype=np.bool_)
    m_idx = np.zeros(n_sub, dtype=np.int64)

    for f in range(n_frames):
        # frame-level threshold from subband powers
        sig_y = np.zeros(n_sub)
        for k in range(n_sub):
            acc = 0.0
            for j in range(offsets[k], offsets[k + 1]):
                acc += y[f, j] * y[f, j]
            sig_y[k] = acc / lengths[k]
            sn2 = sigma_n_sq[k]
            sr2 = max(sig_y[k] - sn2, 0.0)
            g = max(sr2 / sn2, params[P_GAMMA_FLOOR])
            sn = np.sqrt(sn2)
            lam = sn / np.sqrt(g) * np.sqrt(2.0 * (g + g * g)) * np.log(np.sqrt(1.0 + 1.0 / g))
            lam1[f, k] = min(lam, sn * np.sqrt(2.0 * np.log(lengths[k])))
            noise_track[f, k] = sn2

        # subband-level presence, from the previous frame's xi averages
        for k in range(n_sub):
            xs = xi_sb[k]
            if xs < xi_min:
                r_sub[k] = 0.0
            elif k > 0 and xs > xi_sb[k - 1]:
                r_sub[k] = 1.0
            else:
                r_sub[k] = _ramp_prob(xs, xi_peak * xi_min, xi_peak * xi_max, log_span)
            xi_sum[k] = 0.0
            q_mean[f, k] = 0.0

        for t in range(t_max):
            for k in range(n_sub):
                active[k] = (t % stride[k]) == 0
                if active[k]:
                    m_idx[k] = t // stride[k]
                    xi[k] = kappa * xi[k] + (1.0 - kappa) * eta[k]
                    xi_sum[k] += xi[k]
            for k in range(n_sub):
                if not active[k]:
                    continue
                lo = max(k - w_local, 0)
                hi = min(k + w_local, n_sub - 1)
                acc = 0.0
                for i in range(lo, hi + 1):
                    acc += xi[i]
                r_loc = _ramp_prob(acc / (hi - lo + 1), xi_min, xi_max, log_span)
                lo = max(k - w_global, 0)
                hi = min(k + w_global, n_sub - 1)
                acc = 0.0
                for i in range(lo, hi + 1):
                    acc += xi[i]
                r_glob = _ramp_prob(acc / (hi - lo + 1), xi_min, xi_max, log_span)
                q = min(1.0 - r_loc * r_glob * r_sub[k], q_max)

                j = offsets[k] + m_idx[k]
                yv = y[f, j]
                sn2 = sigma_n_sq[k] * shape[j]
                ups = yv * yv / sn2
                e = kappa_dd * (amp2[k] / sn2) + (1.0 - kappa_dd) * max(ups - 1.0, 0.0)
                e = max(e, eta_min)
                v = e * ups / (1.0 + e)
                if q >= 1.0:
                    r = 0.0
                else:
                    r = 1.0 / (1.0 + q / (1.0 - q) * (1.0 + e) * np.exp(-v))
                alpha = (1.0 + r) / (2.0 * (1.0 + q))
                beta = (2.0 * (1.0 + q)) / (1.0 + r)
                l1 = lam1[f, k] * np.sqrt(shape[j])
                z = _pct(yv, l1, 2.0 * l1, alpha, beta)
                out[f, j] = z
                amp2[k] = z * z
                eta[k] = e
                q_mean[f, k] += q

        for k in range(n_sub):
            xi_sb[k] = xi_sum[k] / lengths[k]
            q_mean[f, k] /= lengths[k]
            if params[P_UPDATE] > 0.5 and q_mean[f, k] > params[P_UPDATE_Q]:
                rate = params[P_UPDATE_RATE]
                sigma_n_sq[k] = max(rate * sigma_n_sq[k] + (1.0 - rate) * sig_y[k], params[P_EPS_POW])

    return out, q_mean, lam1, noise_track


def _enhance_frames_np(y, offsets, lengths, sigma_n_sq, xi, amp2, eta, xi_sb,
                       w_local, w_global, params, shape):
    # Same recursion, vectorised across the subbands active at each step.
    from .presence import (PresenceConfig, absence_prob, decision_directed, presence_from_xi,
                           presence_prob, shape_params, subband_presence_all, windowed_xi_all)
    from .threshold import adaptive_threshold, subband_gamma
    from .thresholding import custom_threshold

    cfg = _config_from_params(params, w_local, w_global, PresenceConfig)
    n_frames = y.shape[0]
    n_sub = lengths.size
    t_max = int(lengths.max())
    stride = t_max // lengths
    out = np.zeros_like(y)
    q_mean = np.zeros((n_frames, n_sub))
    lam1 = np.zeros((n_frames, n_sub))
    noise_track = np.zeros((n_frames, n_sub))
    sub_ids = [np.arange(offsets[k], offsets[k + 1]) for k in range(n_sub)]

    for f in range(n_frames):
        sig_y = np.array([np.mean(y[f, ids] ** 2) for ids in sub_ids])
        gamma = subband_gamma(sig_y, sigma_n_sq, params[P_GAMMA_FLOOR])
        lam1[f] = adaptive_threshold(np.sqrt(sigma_n_sq), gamma, lengths)
        noise_track[f] = sigma_n_sq
        r_sub = subband_presence_all(xi_sb, cfg)
        xi_sum = np.zeros(n_sub)
        q_sum = np.zeros(n_sub)
        for t in range(t_max):
            act = np.flatnonzero(t % stride == 0)
            xi[act] = cfg.kappa * xi[act] + (1.0 - cfg.kappa) * eta[act]
            xi_sum[act] += xi[act]
            r_loc = presence_from_xi(windowed_xi_all(xi, cfg.w_local)[act], cfg)
            r_glob = presence_from_xi(windowed_xi_all(xi, cfg.w_global)[act], cfg)
            q = absence_prob(r_loc, r_glob, r_sub[act], cfg.q_max)
            j = offsets[act] + t // stride[act]
            yv = y[f, j]
            sn2 = sigma_n_sq[act] * shape[j]
            ups = yv * yv / sn2
            e = decision_directed(amp2[act], sn2, ups, cfg.kappa_dd, cfg.eta_min)
            r = presence_prob(e, ups, q)
            sp = shape_params(r, q)
            l1 = lam1[f, act] * np.sqrt(shape[j])
            z = custom_threshold(yv, l1, 2.0 * l1, sp.alpha, sp.beta)
            out[f, j] = z
            amp2[act] = z * z
            eta[act] = e
            q_sum[act] += q
        xi_sb[:] = xi_sum / lengths
        q_mean[f] = q_sum / lengths
        if params[P_UPDATE] > 0.5:
            mask = q_mean[f] > params[P_UPDATE_Q]
            rate = params[P_UPDATE_RATE]
            blended = np.maximum(rate * sigma_n_sq + (1.0 - rate) * sig_y, params[P_EPS_POW])
            sigma_n_sq[:] = np.where(mask, blended, sigma_n_sq)

    return out, q_mean, lam1, noise_track


def _config_from_params(params, w_local, w_global, cls):
    return cls(kappa=float(params[P_KAPPA]), kappa_dd=float(params[P_KAPPA_DD]),
               eta_min=float(params[P_ETA_MIN]),
               xi_min_db=10.0 * np.log10(params[P_XI_MIN]),
               xi_max_db=10.0 * np.log10(params[P_XI_MAX]),
               xi_peak_db=10.0 * np.log10(params[P_XI_PEAK]),
               w_local=int(w_local), w_global=int(w_global), q_max=float(params[P_Q_MAX]))


def enhance_frames(y, offsets, lengths, sigma_n_sq, xi, amp2, eta, xi_sb,
                   w_local, w_global, params, shape=None):
    """Threshold packed PWP coefficients frame by frame.

    ``sigma_n_sq``, ``xi``, ``amp2``, ``eta`` and ``xi_sb`` are per-subband
    state arrays updated in place. Returns ``(out, q_mean, lambda1,
    noise_power)`` with one row per frame.
    """
    y = np.ascontiguousarray(y, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    lengths = np.ascontiguousarray(lengths, dtype=np.int64)
    params = np.ascontiguousarray(params, dtype=np.float64)
    shape = np.ones(y.shape[1]) if shape is None else np.ascontiguousarray(shape, dtype=np.float64)
    fn = _enhance_frames_nb if _accel.use_numba() else _enhance_frames_np
    return fn(y, offsets, lengths, sigma_n_sq, xi, amp2, eta, xi_sb,
              int(w_local), int(w_global), params, shape)
