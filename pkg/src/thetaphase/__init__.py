"""Theta-function analytic representations of quantum states.

Two phase spaces, one analytic language:

* finite systems on Z(d) (odd d), represented on a torus cell of side
  sqrt(2*pi*d) -- module ``torus`` with operators in ``finite`` and
  coherent-state machinery in ``coherent``;
* a particle on the circle with integer momenta, represented on the strip
  [0, 2*pi) x R -- module ``strip`` with operators in ``circle``.

``phasespace`` holds Wigner/Weyl functions for both, ``verify`` the full
identity-residual suites, and ``cli`` the command-line front end.
"""

from .theta import ThetaConfig, jacobi_residual, theta3, theta3_du

__version__ = "0.1.0"

__all__ = ["ThetaConfig", "theta3", "theta3_du", "jacobi_residual", "__version__"]
