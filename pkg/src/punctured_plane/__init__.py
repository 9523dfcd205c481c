"""Quantum free particle on the plane with one point removed.

Subpackages cover the quasi-periodic angular sectors, the deficiency-index
classification and boundary-condition families of the radial problem, the
resulting bound-state spectra, the special-function core, and an independent
numerical oracle that re-derives every closed form by quadrature and
boundary matching.
"""

__version__ = "0.1.0"
