"""
Choosing r: the security-margin arithmetic
==========================================

Compressing an n-bit raw key to r final bits when at most t bits leaked
leaves the margin s = n - t - r, and the eavesdropper's expected
information about the final key is bounded by 2**-s / ln 2 bits.  Every
extra margin bit halves the bound, and every margin bit costs exactly
one bit of final key.  This script prints the trade-off and shows the
two equivalent ways to pin down a parameter set.
"""

from qpa import PaParams, final_key_length, leakage_bound, supported_lengths

# --------------------------------------------------------------------
# 1. The leakage bound halves per margin bit.

print("%8s %24s" % ("s", "leakage bound (bits)"))
for s in (1, 8, 16, 32, 64, 96, 128, 256):
    print("%8d %24.6e" % (s, leakage_bound(s)))

# --------------------------------------------------------------------
# 2. A session budget.  Take the largest supported transform length
#    and assume half the raw key leaked during reconciliation.

n = supported_lengths()[-1]
t = n // 2
print("\nn = %d raw bits, t = %d assumed leaked" % (n, t))
print("%8s %12s %24s" % ("s", "final r", "leakage bound (bits)"))
for s in (32, 64, 96, 128):
    r = final_key_length(n, t, s)
    print("%8d %12d %24.6e" % (s, r, leakage_bound(s)))

# --------------------------------------------------------------------
# 3. PaParams accepts whichever pair of values the operator knows and
#    derives the rest, refusing inconsistent combinations.

by_margin = PaParams.from_security(n, t=t, s=64)
by_length = PaParams.from_final_length(n, r=by_margin.r, t=t)
print("\nfrom_security:     %r" % by_margin)
print("from_final_length: %r" % by_length)
assert by_margin == by_length

# --------------------------------------------------------------------
# 4. The same arithmetic guards the pipeline at run time: asking for
#    more final bits than the margin allows is refused before any
#    transform work happens (privacy_amplify(..., t=..., s_min=...)).

try:
    PaParams.from_security(n, t=n - 16, s=32)
except Exception as err:
    print("\ninfeasible request refused: %s" % err)
