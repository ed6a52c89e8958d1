"""Scalar features of P(t) traces used to compare models.

Frequencies are angular (rad per unit time).  Spectra use a Hann window on
the mean-subtracted trace so that leakage from the slow Rabi oscillation
does not pollute bands near 2 omega.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d, uniform_filter1d
from scipy.signal import find_peaks

ENVELOPE_WINDOW = 10.0
REVIVAL_THRESHOLD = 0.75
REVIVAL_SEPARATION = 50.0


def _spectrum(times, p):
    x = (p - p.mean()) * np.hanning(len(p))
    dt = times[1] - times[0]
    power = np.abs(np.fft.rfft(x)) ** 2
    omega = 2 * np.pi * np.fft.rfftfreq(len(x), dt)
    return omega, power


def frequency_bin(times) -> float:
    """Angular spacing of the DFT grid for this sampling."""
    return 2 * np.pi / (len(times) * (times[1] - times[0]))


def dominant_frequency(times, p) -> float:
    """Location of the largest non-DC spectral peak, refined by a parabola
    through the peak bin and its neighbours (on magnitude)."""
    omega, power = _spectrum(times, p)
    mag = np.sqrt(power)
    k = int(np.argmax(mag[1:])) + 1
    if k + 1 >= len(mag):
        return float(omega[k])
    y0, y1, y2 = mag[k - 1], mag[k], mag[k + 1]
    denom = y0 - 2 * y1 + y2
    shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
    return float(omega[k] + shift * (omega[1] - omega[0]))


def band_power(times, p, lo: float, hi: float) -> float:
    omega, power = _spectrum(times, p)
    mask = (omega >= lo) & (omega <= hi)
    return float(power[mask].sum())


def _samples(span, times):
    return max(1, int(round(span / (times[1] - times[0]))))


def upper_envelope(times, p, window: float = ENVELOPE_WINDOW) -> np.ndarray:
    """Running maximum over ``window`` time units, then a moving average of
    the same width."""
    w = _samples(window, times)
    return uniform_filter1d(maximum_filter1d(p, w, mode="nearest"), w, mode="nearest")


def revival_maxima(
    times,
    p,
    threshold: float = REVIVAL_THRESHOLD,
    window: float = ENVELOPE_WINDOW,
    separation: float = REVIVAL_SEPARATION,
) -> np.ndarray:
    """Times of interior local maxima of the smoothed envelope above ``threshold``.

    The t = t_start edge is never a candidate, so the initial excitation
    does not count as a revival.
    """
    env = upper_envelope(times, p, window)
    peaks, _ = find_peaks(env, height=threshold, distance=_samples(separation, times))
    return times[peaks]


def quiet_intervals(times, p, span: float = 50.0, tol: float = 0.05):
    """Merged intervals of length >= ``span`` on which max(P) - min(P) < ``tol``.

    Bounding max - min limits the oscillation as well as the drift, which
    an upper envelope alone would not.
    """
    w = _samples(span, times)
    if w >= len(p):
        return []
    # window [i, i + w) -> filters centred at i + w // 2
    spread = maximum_filter1d(p, w, mode="nearest") - minimum_filter1d(p, w, mode="nearest")
    centres = np.arange(w // 2, len(p) - (w - w // 2) + 1)
    quiet = spread[centres] < tol
    intervals = []
    start = None
    for c, q in zip(centres, quiet):
        lo, hi = c - w // 2, c - w // 2 + w - 1
        if q:
            if start is None:
                start, end = lo, hi
            else:
                end = hi
        elif start is not None:
            intervals.append((float(times[start]), float(times[end])))
            start = None
    if start is not None:
        intervals.append((float(times[start]), float(times[end])))
    return intervals


def longest_quiet_span(times, p, span: float = 50.0, tol: float = 0.05, before: float = np.inf) -> float:
    """Length of the longest quiet interval lying entirely before ``before``."""
    best = 0.0
    for lo, hi in quiet_intervals(times, p, span, tol):
        hi = min(hi, before)
        best = max(best, hi - lo)
    return best
