"""Reference values frozen from scripts/compute_oracles.py.

They come from plain loops written without the package; regenerate with
``python3 scripts/compute_oracles.py``.
"""

# (s, s1) with 0 <= s1 - s*sqrt(2) <= 1, s, s1 <= 3
A_ALPHA_N1_S3_UNIT = [(0, 0), (0, 1), (1, 2), (2, 3)]
A_ALPHA_N2_S200_UNIT_COUNT = 119

# (hits, total) of [0,1]^2 at eps 0.1 for alpha = (-sqrt2, -sqrt3)
A_ALPHA_UNIT_COVER = {50: (29, 100), 100: (48, 100), 200: (63, 100), 400: (81, 100), 800: (93, 100)}
# same on [-2,2]^2
A_ALPHA_WIDE_COVER = {400: (1284, 1600), 800: (1488, 1600), 1600: (1600, 1600)}

# generators (1,0), (sqrt2, sqrt3) on [-2,2]^2 at eps 0.1
Z_MODULE_COVER = {2: (10, 1600), 4: (12, 1600), 8: (12, 1600), 50: (12, 1600)}

A_ALPHA_BETA_DISC_COUNT_S50 = 96
A2_POLYDISC_COVER_S100 = (2704, 2704)
B_COVER_K32 = (400, 400)

SIN_GUARD_100 = 0.0158663685241695266827519722104
SIN_GUARD_200 = 0.00657229348731017326066592745273

G_THETA_COVER_K25_S200 = (1538, 1600)
SCALAR_LOG_COVER = {40: (25, 28), 50: (28, 28)}
SIGNED_SPECTRUM_COVER_K40 = (40, 40)

PROJECTION_111 = (0.494120636598319491767400774917301114433954065786712990790667,
                  0.380426844130949865888360377799996829162809628858951749937186,
                  1.35771072832366205705485584428592840758541285486455478353875)
