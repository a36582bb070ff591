"""Exact finite-level computations on the Bruhat-Tits building of GL_n over Q_p:
filtration subgroups, principal series models, coefficient-system resolutions
and character constancy."""

__version__ = "0.1.0"
