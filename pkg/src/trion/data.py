"""Reference constants: mass ratios, optimized exponent intervals, exact
energies and literature delta-function values.

Each interval row lists ``(lo, hi)`` bounds for Re(alpha), Im(alpha),
Re(beta), Im(beta), Re(gamma), Im(gamma) followed by the number of basis
functions the subset contributes.  Interval tables are keyed by
``(system, N)``.
"""

from __future__ import annotations

# CODATA 2018 recommended values
PROTON_ELECTRON_MASS_RATIO = 1836.15267343
DEUTERON_ELECTRON_MASS_RATIO = 3670.48296788

IntervalRow = tuple[
    tuple[float, float],
    tuple[float, float],
    tuple[float, float],
    tuple[float, float],
    tuple[float, float],
    tuple[float, float],
    int,
]

INTERVAL_TABLES: dict[tuple[str, int], list[IntervalRow]] = {
    ("h2plus", 128): [
        ((1.07654, 1.78066), (-0.01940, 0.05276), (0.07667, 0.88031), (-0.00034, 0.01760), (2.65129, 3.06464), (0.52900, 7.16818), 56),
        ((0.95374, 1.07476), (0.00000, 0.03316), (0.28271, 0.46185), (-0.00357, 0.00218), (2.97254, 3.65661), (2.49296, 11.55876), 36),
        ((1.30899, 1.35858), (-0.01408, 0.02912), (0.11332, 0.46886), (0.01506, 0.02934), (2.85000, 3.09541), (1.19531, 9.81965), 22),
        ((1.18347, 1.25594), (-0.05596, 0.00581), (0.21488, 0.29078), (-0.00677, 0.00112), (2.53124, 2.84387), (0.68702, 2.29223), 12),
        ((0.81427, 1.73937), (0.00000, 0.07147), (0.04726, 0.29998), (-0.01306, 0.00566), (2.02013, 4.64661), (1.11470, 1.11641), 2),
    ],
    ("h2plus", 256): [
        ((1.19075, 1.65638), (-0.02595, 0.03948), (0.03516, 1.33377), (-0.00078, 0.01667), (2.98179, 3.28156), (0.02937, 7.39889), 112),
        ((1.02251, 1.03871), (0.00000, 0.00381), (0.31684, 0.38798), (-0.00389, 0.00222), (3.65150, 3.68554), (2.68553, 11.57492), 72),
        ((1.35418, 1.43248), (-0.01929, 0.02702), (0.15301, 0.47203), (0.01553, 0.03148), (2.75186, 3.71197), (0.47651, 12.16416), 44),
        ((1.13639, 1.14046), (-0.05515, 0.00557), (0.20079, 0.25503), (-0.00662, 0.00092), (3.38954, 3.51040), (0.87464, 2.76446), 24),
        ((0.79078, 1.62120), (0.03811, 0.07337), (0.14785, 0.24217), (-0.01397, 0.00599), (2.60898, 5.49922), (1.16318, 1.17671), 4),
    ],
    ("hdplus", 128): [
        ((0.99855, 1.36647), (-0.05423, 0.06681), (0.33903, 0.41092), (-0.02864, 0.02492), (2.94950, 3.05629), (0.88001, 8.74844), 44),
        ((0.13197, 0.90499), (-0.02043, 0.00050), (0.82133, 1.38484), (0.00000, 0.00000), (2.62231, 2.84177), (2.13254, 10.78452), 44),
        ((1.14875, 1.15717), (-0.00035, 0.00984), (0.33390, 0.36618), (-0.01329, 0.01905), (2.75207, 3.49929), (0.83619, 4.08752), 20),
        ((0.00000, 0.46873), (-0.00765, 0.00112), (1.08927, 1.44436), (-0.03147, 0.01546), (2.63231, 3.16904), (1.03728, 4.64237), 20),
    ],
    ("helium", 128): [
        ((1.74188, 2.25322), (0.18652, 0.46520), (1.28024, 2.53851), (-0.02126, 0.37233), (0.11632, 0.21375), (0.01845, 0.30082), 52),
        ((3.00721, 5.11414), (-0.00008, 0.00098), (1.81077, 3.05217), (-0.23520, 0.63307), (0.19661, 0.79442), (-0.01931, 0.86401), 42),
        ((0.05586, 19.36455), (0.15767, 0.48686), (2.58347, 13.02001), (0.00000, 0.31394), (1.21826, 4.29668), (-0.38445, 1.82136), 34),
    ],
    ("hminus", 128): [
        ((0.14510, 1.31809), (-0.04241, 0.12121), (1.03474, 1.08192), (-0.02314, 0.19099), (0.04439, 0.04621), (-0.01740, 0.04416), 52),
        ((1.35801, 4.29001), (-0.14619, 0.74523), (1.05935, 4.45260), (-0.00718, 0.25993), (0.05716, 0.96584), (-0.11928, 0.65945), 42),
        ((7.30700, 31.99866), (0.21476, 0.88766), (20.81734, 26.21358), (0.29711, 0.33078), (0.35002, 3.58686), (-0.38968, 1.65546), 34),
    ],
}

# Exact nonrelativistic ground-state energies (hartree), all digits significant.
EXACT_ENERGIES = {
    "h2plus": -0.597139063080,
    "hdplus": -0.597897968103,
    "helium": -2.903724377034119,
    "hminus": -0.527751016544377,
}

# Classical variational energies obtained with the optimized N=128 draws
# (and N=256 for h2plus); kept for reporting only.
OPTIMIZED_DRAW_ENERGIES = {
    ("h2plus", 128): -0.597139058413,
    ("h2plus", 256): -0.597139063056,
    ("hdplus", 128): -0.597897235547,
    ("helium", 128): -2.903724376970,
    ("hminus", 128): -0.527751016439,
}

# Literature delta-function expectation values for the molecular ground state.
# In HD+ "r1" is the electron-deuteron vector and "r2" the electron-proton one.
DELTA_REFERENCES = {
    ("h2plus", "r1"): 0.20673647629,
    ("h2plus", "r2"): 0.20673647629,
    ("hdplus", "r1"): 0.20734814178,
    ("hdplus", "r2"): 0.20704259948,
}
