"""Select the compiled kernels when importable, else the pure-Python ones."""
import os

from . import _kernels_py

python_kernels = _kernels_py

try:
    if os.environ.get("FRACSTEFAN_PURE_PYTHON"):
        raise ImportError("compiled kernels disabled by FRACSTEFAN_PURE_PYTHON")
    from . import _kernels as compiled_kernels
except ImportError:
    compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
NAME = "compiled" if compiled_kernels is not None else "python"
