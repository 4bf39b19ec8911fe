"""Integral identities: parameters, integrands, right-hand sides and verification."""

from .ellipticity import *  # noqa: F401,F403
from .ellipticity import __all__ as _ell_all
from .params import *  # noqa: F401,F403
from .params import __all__ as _params_all
from .rho import *  # noqa: F401,F403
from .rho import __all__ as _rho_all
from .sides import *  # noqa: F401,F403
from .sides import __all__ as _sides_all
from .driver import *  # noqa: F401,F403
from .driver import __all__ as _driver_all

__all__ = list(_params_all) + list(_sides_all) + list(_rho_all) + list(_ell_all) + list(_driver_all)
