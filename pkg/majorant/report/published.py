"""Reference values from the published computation, shown beside ours in reports."""

from __future__ import annotations

# (k, order) -> approximate d^(order)(k)
POSITIVITY = {
    (3, 1): 0.014012641,
    (3, 2): 0.08760174,
    (4, 1): 0.0062067,
    (4, 2): 0.05413417,
    (4, 3): 0.22557089,
}

# (k, order) -> printed sup |H^IV| bound used for the low-order checks
POSITIVITY_FOURTH_BOUNDS = {
    (3, 1): 2.3e10,
    (3, 2): 7e10,
    (4, 1): 1.6e12,
    (4, 2): 7e12,
    (4, 3): 5.4e13,
}

# Coefficient tables: table number -> (k, center)
TABLES = {1: (3, 3.5), 2: (4, 4.25), 3: (4, 4.75)}

FOURTH_BOUNDS = {
    3.5: [3.3e12, 9.1e12, 2.5e13, 6.8e13, 1.9e14, 4.8e14, 2.8e15, 2.6e16, 2.7e17, 2.9e18,
          3.4e19],
    4.25: [1.23e15, 5.32e15, 2.29e16, 9.80e16, 4.18e17, 1.77e18, 7.47e18, 3.14e19],
    4.75: [4.98e15, 2.13e16, 9.07e16, 3.85e17, 1.63e18, 6.83e18, 2.86e19],
}

N_STAR = {
    3.5: [383, 415, 378, 310, 239, 169, 142, 128, 115, 101, 88],
    4.25: [499, 494, 492, 486, 486, 466, 302, 188],
    4.75: [378, 373, 339, 323, 305, 207, 134],
}

COEFFICIENTS = {
    3.5: [
        -8.097236891, -37.59530251, -141.3912224, -468.2134571, -1423.831595,
        -4074.963995, -11148.7318, -29465.89339, -75792.43387, -190751.6522,
        -471634.7482,
    ],
    4.25: [
        -11.99030682, -64.72801527, -273.5687453, -1000.494741, -3319.462864,
        -10266.25853, -30113.02268, -84761.00164,
    ],
    4.75: [
        -111.5230149, -432.5730847, -1509.259877, -4867.920658, -14785.12009,
        -42842.09045, -119563.5221,
    ],
}

# Left-endpoint values p^(i)(a) of the sign chains, keyed by the model center
SIGN_CHAIN = {
    3.5: [
        -0.068458667 + 0.068, -4.00969183, -23.12291565, -93.80789264, -324.0046433,
        -978.7532737, -3144.062078, -5587.909055,
    ],
}
P_AT_LEFT = {3.5: -0.068458667, 4.25: -2.2178666857, 4.75: -39.9655627058}
CHAIN_LAST = {4.75: (5, -12951.20993)}
DISCRIMINANT = -3.511e10

RATIO_MAXIMA = {(3, "plus"): 3699.0, (3, "minus"): 3865.0}
RATIO_BOUNDS = {(3, "plus"): 3700.0, (3, "minus"): 3900.0}
MINIMA = {(4, "plus"): 0.0946, (4, "minus"): 0.02776, (3, "minus"): 0.282}
REMAINDERS = {3.5: 0.011, 4.25: 0.21, 4.75: 9.1}
