"""levyhomog: numerical laboratory for scaling limits of 1D jump-diffusions
in stationary ergodic random media.

Subsystems
----------
environment   concrete samplable media (coefficients a, V, c and derivatives)
measures      symmetric Levy measure families
jump_kernel   jump coefficient gamma by tail inversion, drifts, compensators
simulate      Euler scheme for the jump-diffusion, ensembles, time averages
scaling       rates delta(eps), limiting Levy exponents, ECF diagnostics
corrector     resolvent/corrector solver and effective diffusivities
cli           config-driven experiment runner
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
