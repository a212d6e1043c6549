"""Ramp profiles for plateau smearing functions.

Both ramps interpolate 1 -> 0 over s in [0, 1]:

  smooth_bump    r(s) = h(1-s)/(h(1-s)+h(s)),  h(t) = exp(-1/t)   (C-infinity)
  raised_cosine  r(s) = (1 + cos(pi s))/2                          (C^1)

First and second derivatives are closed-form; the variance engines rely on
them, so no finite differencing anywhere.
"""

import numpy as np

_T_FLOOR = 1.5e-3  # below this exp(-1/t) underflows harmlessly to 0


def _h(t):
    t = np.asarray(t, float)
    out = np.zeros_like(t)
    m = t > _T_FLOOR
    out[m] = np.exp(-1.0 / t[m])
    return out


def _hp(t):
    t = np.asarray(t, float)
    out = np.zeros_like(t)
    m = t > _T_FLOOR
    out[m] = np.exp(-1.0 / t[m]) / t[m] ** 2
    return out


def _hpp(t):
    t = np.asarray(t, float)
    out = np.zeros_like(t)
    m = t > _T_FLOOR
    out[m] = np.exp(-1.0 / t[m]) * (1.0 - 2.0 * t[m]) / t[m] ** 4
    return out


def _bump_ramp(s):
    a = _h(1.0 - s)
    b = _h(s)
    den = a + b
    den = np.where(den == 0.0, 1.0, den)
    r = a / den
    return np.where(s <= 0.0, 1.0, np.where(s >= 1.0, 0.0, r))


def _bump_ramp_d1(s):
    a = _h(1.0 - s)
    b = _h(s)
    ap = -_hp(1.0 - s)
    bp = _hp(s)
    den = a + b
    den = np.where(den == 0.0, 1.0, den)
    r = (ap * b - a * bp) / den**2
    return np.where((s <= 0.0) | (s >= 1.0), 0.0, r)


def _bump_ramp_d2(s):
    a = _h(1.0 - s)
    b = _h(s)
    ap = -_hp(1.0 - s)
    bp = _hp(s)
    app = _hpp(1.0 - s)
    bpp = _hpp(s)
    den = a + b
    den = np.where(den == 0.0, 1.0, den)
    num = ap * b - a * bp
    nump = app * b - a * bpp
    r = (nump * den - 2.0 * num * (ap + bp)) / den**3
    return np.where((s <= 0.0) | (s >= 1.0), 0.0, r)


def _cos_ramp(s):
    r = 0.5 * (1.0 + np.cos(np.pi * np.clip(s, 0.0, 1.0)))
    return np.where(s <= 0.0, 1.0, np.where(s >= 1.0, 0.0, r))


def _cos_ramp_d1(s):
    r = -0.5 * np.pi * np.sin(np.pi * np.clip(s, 0.0, 1.0))
    return np.where((s <= 0.0) | (s >= 1.0), 0.0, r)


def _cos_ramp_d2(s):
    r = -0.5 * np.pi**2 * np.cos(np.pi * np.clip(s, 0.0, 1.0))
    return np.where((s <= 0.0) | (s >= 1.0), 0.0, r)


RAMPS = {
    "smooth_bump": (_bump_ramp, _bump_ramp_d1, _bump_ramp_d2),
    "raised_cosine": (_cos_ramp, _cos_ramp_d1, _cos_ramp_d2),
}


def ramp(profile, order=0):
    """Ramp function (or its order-th derivative) for a named profile."""
    try:
        return RAMPS[profile][order]
    except KeyError:
        raise KeyError(f"unknown ramp profile {profile!r}") from None
