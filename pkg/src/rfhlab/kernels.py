"""Backend selection for the hot loops.

The compiled extension ``rfhlab._ckernels`` is used when it imports; otherwise
the numpy fallback in ``rfhlab._pykernels`` takes over. Set
``RFHLAB_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("RFHLAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

psi_table = _impl.psi_table
hermite_table = _impl.hermite_table
psi_series = _impl.psi_series
# numpy's vectorised sin/cos/pow beat a scalar libm loop here, and sharing
# one implementation keeps simulated paths identical across backends
cms_symmetric = _pykernels.cms_symmetric

__all__ = ["BACKEND", "psi_table", "hermite_table", "psi_series", "cms_symmetric"]
