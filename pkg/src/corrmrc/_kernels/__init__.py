"""Hot integrand kernels with a compiled core and a NumPy fallback.

The compiled extension is preferred when importable; set the environment
variable CORRMRC_PURE_PYTHON=1 to force the fallback (used by the parity
tests and the kernel benchmark).  Both implementations share the exact
same formulas and must agree to roundoff.
"""
import os

from . import _fallback

BACKEND = "python"
integrand_lower = _fallback.integrand_lower
integrand_upper = _fallback.integrand_upper

if not os.environ.get("CORRMRC_PURE_PYTHON"):
    try:
        from . import _compiled

        integrand_lower = _compiled.integrand_lower
        integrand_upper = _compiled.integrand_upper
        BACKEND = "compiled"
    except ImportError:  # extension not built; fallback stays active
        pass
