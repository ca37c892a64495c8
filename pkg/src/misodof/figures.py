"""CSIT patterns and marginal profiles used in the worked examples.

Where only the marginals of an example are fixed, the grid below is one
pattern with exactly those marginals; the slot ordering is illustrative.
"""

from fractions import Fraction

from .core import CsitPattern, MarginalProfile

# Same marginals (2/3, 1/6, 1/6), different joint structure.
FIG7_A = CsitPattern.from_columns(["PPP", "PPP", "PPP", "PPP", "DDN", "NND"])
FIG7_B = CsitPattern.from_columns(["DPP", "NPP", "PDP", "PNP", "PPD", "PPN"])
FIG7_MARGINALS = MarginalProfile.symmetric(Fraction(2, 3), Fraction(1, 6), 3)

# Fixed CSIT (user 1 always delayed, others never known) vs alternating.
FIG2_FIXED = CsitPattern.from_columns(["DNN"])
FIG2_ALTERNATING = CsitPattern.from_columns(["DNN", "NDN", "NND"])

# Three-slot example: perfect CSIT of users 1 and 2 and delayed CSIT of
# user 3 in the first slot, nothing afterwards.
FIG5 = CsitPattern.from_columns(["PPD", "NNN", "NNN"])

# No delayed CSIT; lambda_P = (1/4, 1/2, 1) and (1/4, 1/2, 1/2).
FIG6_A = CsitPattern.from_columns(["PPP", "NPP", "NNP", "NNP"])
FIG6_B = CsitPattern.from_columns(["PPP", "NPP", "NNN", "NNN"])

# lambda_P = 1/3, lambda_N = 2/3 for every user in both.
FIG10_A = CsitPattern.from_columns(["PPP", "NNN", "NNN"])
FIG10_B = CsitPattern.from_columns(["PNN", "NPN", "NNP"])

PATTERNS = {
    "fig2-fixed": FIG2_FIXED,
    "fig2-alternating": FIG2_ALTERNATING,
    "fig5": FIG5,
    "fig6a": FIG6_A,
    "fig6b": FIG6_B,
    "fig7a": FIG7_A,
    "fig7b": FIG7_B,
    "fig10a": FIG10_A,
    "fig10b": FIG10_B,
}
