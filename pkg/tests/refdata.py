"""Frozen reference values used as numeric oracles by the test suite.

``SINGLE_VS_MULTI`` holds per-instance results of a published benchmark study
of the same system family: for four network sizes and ten instances each,
the overall objective and the three per-scenario component values under
single-beam and multi-beam antenna technology.  Row layout:

    (overall_sb, overall_mb, fa_sb, fa_mb, fb_sb, fb_mb, fc_sb, fc_mb)

``BASELINE_MIN_MEAN`` holds the scenario component decompositions
(f_min, f_mean) of the same study's baseline configuration, and
``BASELINE_F`` the corresponding composed component values, for scenarios A
and B at sizes 10 and 15 (plus the first size-10 row of scenario C).  These
pin down the component composition arithmetic and the trade-off coefficient
p = 1/39 to publication precision.
"""

SINGLE_VS_MULTI = {
    10: [
        (58.4576, 45.8327, 160.0000, 120.1850, 33.1407, 27.5494, 58.4232, 45.6803),
        (58.4576, 44.7354, 160.0000, 107.1110, 33.1407, 27.4191, 58.4232, 45.5965),
        (58.4576, 38.4504, 160.0000, 54.4444, 33.1407, 34.3580, 58.4232, 38.4974),
        (58.4576, 47.0703, 160.0000, 120.5190, 33.1407, 31.0148, 58.4232, 45.9169),
        (58.4576, 53.8214, 16.00000, 107.5190, 33.1407, 32.8012, 58.4232, 57.6193),
        (58.4576, 44.1254, 160.0000, 120.4440, 33.1407, 25.1056, 58.4232, 44.0955),
        (58.4576, 50.6161, 160.0000, 120.5190, 33.1407, 32.9000, 58.4232, 50.7364),
        (58.4576, 41.5601, 160.0000, 54.2593, 33.1407, 30.6728, 58.4232, 45.4163),
        (58.4719, 47.7473, 60.9074, 120.3700, 53.8889, 27.6481, 60.4590, 48.7190),
        (58.4576, 41.7270, 160.0000, 55.2222, 33.1407, 30.6630, 58.4232, 45.5720),
    ],
    15: [
        (46.2707, 36.2287, 81.2143, 54.2976, 41.3095, 30.8488, 44.3833, 36.6601),
        (44.6879, 35.2272, 160.0000, 107.4050, 23.7673, 19.7792, 40.7342, 33.9290),
        (44.6879, 34.2585, 160.0000, 54.6786, 23.7673, 31.0036, 40.7342, 33.3334),
        (44.6879, 33.0844, 160.0000, 54.3571, 23.7673, 27.6012, 40.7342, 33.1669),
        (44.6879, 33.0520, 160.0000, 41.1667, 23.7673, 30.8429, 40.7342, 33.1423),
        (46.3375, 40.7919, 81.0952, 41.1667, 41.4048, 40.7381, 44.4591, 40.7720),
        (44.6879, 36.3009, 160.0000, 41.3095, 23.7673, 34.1825, 40.7342, 36.7341),
        (44.6879, 34.1301, 160.0000, 54.2500, 23.7673, 30.9202, 40.7342, 33.2201),
        (44.6879, 37.9785, 160.0000, 107.4760, 23.7673, 20.7670, 40.7342, 37.8971),
        (46.4886, 38.9918, 81.1429, 61.0119, 41.5714, 27.4619, 44.6154, 42.0043),
    ],
    20: [
        (45.8989, 33.3545, 81.1579, 60.8246, 41.4912, 27.7939, 43.6954, 32.7011),
        (36.5940, 31.7469, 160.0000, 54.5263, 16.8122, 27.7807, 31.0591, 30.8826),
        (34.3389, 31.6918, 81.1579, 54.6491, 28.3684, 27.7032, 31.4718, 30.8165),
        (32.8353, 32.4574, 81.2105, 61.3070, 24.2368, 27.9825, 31.0877, 31.0887),
        (34.2139, 31.9851, 81.2281, 54.7982, 28.2175, 28.0146, 31.3353, 31.1186),
        (36.5940, 32.7510, 160.0000, 41.1754, 16.8122, 30.9474, 31.0591, 32.5998),
        (37.4280, 31.6522, 61.4649, 54.3246, 33.3211, 27.6974, 36.4768, 30.7956),
        (34.2534, 32.8614, 81.2281, 54.3158, 28.2632, 27.8026, 31.3767, 32.7089),
        (32.9055, 31.7425, 81.2807, 41.4035, 24.3070, 27.6579, 31.1579, 32.5771),
        (34.3314, 33.9791, 81.3684, 54.4825, 28.3333, 31.1649, 31.4508, 32.8233),
    ],
    30: [
        (27.5305, 25.1695, 81.4138, 54.6897, 21.5057, 21.1845, 23.8075, 23.4720),
        (24.1305, 27.5827, 81.2874, 61.2989, 17.6736, 23.6839, 20.2143, 25.3176),
        (21.6817, 22.2681, 81.0345, 61.1839, 14.8976, 17.3379, 17.6546, 19.8686),
        (24.0397, 25.8771, 81.5517, 61.1092, 13.5421, 21.4239, 22.0996, 23.6997),
        (32.0735, 24.7545, 61.7529, 54.7586, 28.2931, 21.2665, 30.2537, 22.7479),
        (2.3452, 25.2939, 2.8448, 61.1379, 2.2900, 21.3236, 2.3103, 22.7985),
        (22.5855, 22.3195, 61.6207, 61.4368, 17.6420, 17.3661, 20.1778, 19.9065),
        (2.3257, 22.5007, 3.0575, 61.3103, 2.2452, 17.9899, 2.2744, 19.9048),
        (27.6073, 24.8529, 81.2759, 61.2874, 21.6059, 20.2057, 23.8994, 22.6221),
        (27.8671, 25.0972, 61.7241, 54.7989, 23.9531, 21.0918, 25.5919, 23.3872),
    ],
}

# (f_min, f_mean) of the baseline configuration per instance
BASELINE_MIN_MEAN = {
    ("A", 10): [
        (117.00, 124.22), (104.00, 121.33), (52.00, 95.33), (117.00, 137.22),
        (104.00, 137.22), (117.00, 134.33), (117.00, 137.22), (52.00, 88.11),
        (117.00, 131.44), (52.00, 125.67),
    ],
    ("A", 15): [
        (52.00, 89.61), (104.00, 132.79), (52.00, 104.46), (52.00, 91.93),
        (39.00, 84.50), (39.00, 84.50), (39.00, 90.07), (52.00, 87.75),
        (104.00, 135.57), (58.50, 97.96),
    ],
    ("B", 10): [
        (26.00, 60.43), (26.00, 55.35), (32.50, 72.46), (29.25, 68.83),
        (31.20, 62.45), (23.40, 66.52), (31.20, 66.30), (29.25, 55.48),
        (26.00, 64.28), (29.25, 55.11),
    ],
    ("B", 15): [
        (29.25, 62.35), (18.57, 47.10), (29.25, 68.39), (26.00, 62.45),
        (29.25, 62.12), (39.00, 67.79), (32.50, 65.62), (29.25, 65.14),
        (19.50, 49.41), (26.00, 57.01),
    ],
}

# composed component values of the same baseline rows
BASELINE_F = {
    ("A", 10): [120.19, 107.11, 54.44, 120.52, 107.52, 120.44, 120.52, 54.26, 120.37, 55.22],
    ("A", 15): [54.30, 107.41, 54.68, 54.36, 41.17, 41.17, 41.31, 54.25, 107.48, 61.01],
    ("B", 10): [27.55, 27.42, 34.36, 31.01, 32.80, 25.11, 32.90, 30.67, 27.65, 30.66],
    ("B", 15): [30.85, 19.78, 31.00, 27.60, 30.84, 40.74, 34.18, 30.92, 20.77, 27.46],
}

# first size-10 row of scenario C: (f_min, f_mean, f) under the
# table-reconciliation convention p_eff = p * (|V| - 1)
SCENARIO_C_SIZE10_ROW1 = (43.88, 7.82, 45.68)

BASELINE_WEIGHTS = (1, 13), (4, 13), (8, 13)  # (w_a, w_b, w_c_norm) numerator/denominator
