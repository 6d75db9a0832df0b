"""Exact algebra for algebraic 2-complexes over C_n x C_inf.

Subpackages/modules: ``rings`` (ring tower), ``matlin`` (matrices, Smith
form, elementary factorization), ``modclass`` (the M(A) module calculus),
``complexes`` (Fox calculus, Ext^3 classifier, unit realization),
``ideals`` (maximal ideal candidates of Z[C_n]), ``certificates`` and ``cli``.
"""

__version__ = "0.1.0"
