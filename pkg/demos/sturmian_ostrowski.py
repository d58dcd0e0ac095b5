"""Sturmian words from a slope and Ostrowski digits.

The slope is given by its continued fraction, the intercept by Ostrowski
digits.  The directive sequence over lambda/rho generates the same word as the
floor formula with intercept -chi - 2*eta.
"""
import random

import mpmath

from sadic import ContinuedFraction, ostrowski_decode, ostrowski_encode, sturmian_directive, sturmian_prefix
from sadic.formats import format_lasso
from sadic.sturmian import directed_prefix, random_digits, word_intercept

cf = ContinuedFraction.parse("2; 1, 3")
print("slope eta =", mpmath.nstr(cf.mp(), 20), " convergents:", cf.convergents(6)[1:])

rng = random.Random(11)
digits = random_digits(cf, rng)
chi = ostrowski_decode(digits)
print("digits:", digits.digits(12), "...  chi =", mpmath.nstr(chi, 20))

seq = sturmian_directive(cf, digits)
print("directive:", format_lasso(seq.pre, seq.period))
w = directed_prefix(seq, 60)
print("directed word:", "".join(map(str, w)))
print("floor formula:", "".join(map(str, sturmian_prefix(cf, word_intercept(digits), 60))))

# the encoder recovers the digits; 40 of them leave a tail of about 1/q_40
b = ostrowski_encode(cf, chi, 40)
with mpmath.workdps(50):
    err = abs(ostrowski_decode(b, cf) - chi)
print("re-encoded:", b[:12], "...  40-digit truncation error", mpmath.nstr(err, 3))
