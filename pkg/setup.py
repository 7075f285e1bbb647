"""Build script for the compiled integrator core.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed build here should not block installation in
environments without a C toolchain: set REEBTK_SKIP_EXT=1 to install
pure-Python only.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("REEBTK_SKIP_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "reebtk._kernels",
                sources=["src/reebtk/_kernels.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
