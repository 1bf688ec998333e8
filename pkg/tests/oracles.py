"""Independent reference computations used by the tests.

Nothing here imports the package's scoring code.
"""

import math
from fractions import Fraction


def psi_direct(a, b, c, d):
    """Skill index evaluated literally with n**2 denominators and exact
    rational proportions; a zero expected proportion contributes 0."""
    n = a + b + c + d

    def term(cell, row, col):
        expected = Fraction(row * col, n * n)
        if expected == 0:
            return 0.0
        return float(Fraction(cell, n) - expected) / math.sqrt(expected)

    plus = term(a, a + b, a + c) + term(d, b + d, c + d)
    minus = term(b, a + b, b + d) + term(c, a + c, c + d)
    return (plus - minus) / 2


def classical_direct(a, b, c, d):
    """(pss, phi, hss, css) from the textbook forms, 0 on empty marginals."""
    ad_bc = a * d - b * c
    pss = ad_bc / ((a + c) * (b + d)) if (a + c) * (b + d) else 0.0
    prod = (a + b) * (c + d) * (a + c) * (b + d)
    phi = ad_bc / math.sqrt(prod) if prod else 0.0
    # Heidke via proportion correct vs chance
    n = a + b + c + d
    chance = ((a + b) * (a + c) + (c + d) * (b + d)) / n
    hss = (a + d - chance) / (n - chance) if n != chance else 0.0
    css = (a / (a + b) if a + b else 0.0) - (c / (c + d) if c + d else 0.0)
    return pss, phi, hss, css


def joint_direct(values, weights=None):
    if weights is None:
        weights = [1 / len(values)] * len(values)
    return math.sqrt(sum(w * (1 + v) ** 2 for w, v in zip(weights, values))) - 1


def classify_brute(prev, fc, act, half_width, banded):
    """Six-category label from first principles."""
    f_up = fc > prev
    o_up = act > prev
    if f_up != o_up:
        return "up_down" if f_up else "down_up"
    inside = (not banded) or abs(act - fc) <= half_width
    if f_up:
        return "uu_within" if inside else "uu_outside"
    return "dd_within" if inside else "dd_outside"


# mpmath (40 digits) evaluations of the skill index, frozen
PSI_FROZEN = {
    (9, 2, 1, 9): 0.71777445456901287,
    (1, 0, 0, 399): 0.54993746088859545,
    (193, 0, 0, 207): 0.99969365615344768,
    (8, 6, 3, 4): 0.13286038642282233,
    (5, 9, 5, 2): -0.33215096605705583,
    (4, 6, 7, 4): -0.23622956732651056,
    (4, 9, 5, 1): -0.48049630954879341,
    (7, 5, 4, 3): 0.011491897316043811,
    (4, 9, 6, 2): -0.42685126093508353,
    (6, 9, 5, 1): -0.38228402490742118,
}
