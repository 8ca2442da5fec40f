"""Collaborative PAC learning algorithms with exact-error instances.

Thin wrapper over the C++ extension module; see the project README for the
full CLI and library documentation.
"""

try:
    from ._collabpac import *  # noqa: F401,F403  (installed wheel layout)
    from ._collabpac import __doc__ as _ext_doc
except ImportError:  # in-tree build: extension on PYTHONPATH next to build dir
    from _collabpac import *  # noqa: F401,F403
    from _collabpac import __doc__ as _ext_doc

__version__ = "0.1.0"
