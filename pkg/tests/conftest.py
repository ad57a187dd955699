"""Shared test configuration.

Library routines set their own working precision internally; this ambient
setting only governs test-side literals and comparisons, which must not
round below the tolerances under test.
"""
from mpmath import mp

mp.prec = 600
