"""Independent reference computations used to freeze and check expected values.

Nothing here imports the solver paths it is used to check.
"""
import math

import numpy as np
from scipy.optimize import brentq
from scipy.spatial.transform import Rotation

MU_B_OVER_H = 13.9962  # MHz/mT


def triplet_matrix(b, theta_deg, d, gamma):
    t = math.radians(theta_deg)
    bz, bx = gamma * b * math.cos(t), gamma * b * math.sin(t)
    s = bx / math.sqrt(2.0)
    return np.array([[d + bz, s, 0.0], [s, 0.0, s], [0.0, s, d - bz]])


def cardano_eigenvalues(a):
    """Roots of the characteristic cubic of a real symmetric 3x3 matrix.

    Trigonometric closed form, then two Newton steps on det(A - x I) to
    polish near-degenerate roots. Returned ascending.
    """
    a = np.asarray(a, dtype=float)
    c2 = np.trace(a)
    c1 = (
        a[0, 0] * a[1, 1] + a[0, 0] * a[2, 2] + a[1, 1] * a[2, 2]
        - a[0, 1] ** 2 - a[0, 2] ** 2 - a[1, 2] ** 2
    )
    c0 = np.linalg.det(a)
    q = c2 / 3.0
    p2 = sum((a[i, i] - q) ** 2 for i in range(3)) + 2 * (a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2)
    p = math.sqrt(p2 / 6.0)
    if p == 0.0:
        return np.array([q, q, q])
    bmat = (a - q * np.eye(3)) / p
    r = np.clip(np.linalg.det(bmat) / 2.0, -1.0, 1.0)
    phi = math.acos(r) / 3.0
    roots = [q + 2 * p * math.cos(phi + 2 * math.pi * k / 3) for k in range(3)]
    polished = []
    for x in roots:
        for _ in range(2):
            f = x**3 - c2 * x**2 + c1 * x - c0
            df = 3 * x**2 - 2 * c2 * x + c1
            if df == 0:
                break
            step = f / df
            if abs(step) > 1e-6 * max(p, 1.0):
                break  # double root: Newton would wander
            x -= step
        polished.append(x)
    return np.sort(polished)


def upper_frequency(b, theta_deg, d, gamma):
    e = cardano_eigenvalues(triplet_matrix(b, theta_deg, d, gamma))
    return e[1] - e[0]


def upper_resonance(f, theta_deg, d, gamma):
    """brentq on the bracket [f/gamma, 1.2 (f + D)/gamma]."""
    return brentq(
        lambda b: upper_frequency(b, theta_deg, d, gamma) - f,
        f / gamma,
        1.2 * (f + d) / gamma,
        xtol=1e-12,
    )


def mount_rotation(slant_deg, w_rotation_deg):
    """Crystal -> lab rotation built by aligning the glued face, then turning about y."""
    a = math.radians(slant_deg)
    normal_lab = [math.sin(a), math.cos(a), 0.0]
    edge_lab = [-math.cos(a), math.sin(a), 0.0]
    glued, _ = Rotation.align_vectors([normal_lab, edge_lab], [[0, 0, 1], [1, 0, 0]])
    return Rotation.from_euler("y", w_rotation_deg, degrees=True) * glued


def mount_angles(slant_deg, w_rotation_deg, field=(0.0, 0.0, 1.0)):
    rot = mount_rotation(slant_deg, w_rotation_deg)
    out = []
    for v in ([1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]):
        lab = rot.apply(np.array(v, dtype=float) / math.sqrt(3))
        c = abs(np.dot(lab, field)) / np.linalg.norm(field)
        out.append(math.degrees(math.acos(min(c, 1.0))))
    return out


def synthetic_s11(freq, f0, q_loaded, beta, gamma_d=1.0):
    """Gamma_d [1 - (2 beta/(1+beta)) / (1 + 2j Q_L (f - f0)/f0)]."""
    freq = np.asarray(freq, dtype=float)
    k = 2.0 * beta / (1.0 + beta)
    return gamma_d * (1.0 - k / (1.0 + 2j * q_loaded * (freq - f0) / f0))


def sweep_trace(f0, q_loaded, beta, gamma_d=0.9 * np.exp(0.6j), n=201, span_bw=6.0):
    bw = f0 / q_loaded
    f = np.linspace(f0 - span_bw * bw / 2, f0 + span_bw * bw / 2, n) + 0.37 * bw / n
    return f, synthetic_s11(f, f0, q_loaded, beta, gamma_d)
