"""Build script: compiles the optional _kernels._native extension.

The package works without the extension (a pure-Python fallback is
selected at import time), so any failure here downgrades to a warning
instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "emolysis._kernels._native",
                sources=["src/emolysis/_kernels/_native.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    sys.stderr.write(
        f"emolysis: native kernel build skipped ({exc}); "
        "pure-Python fallback will be used\n"
    )

setup(ext_modules=ext_modules)
