"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time); set STEINW1_PURE=1 to skip the
build explicitly.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("STEINW1_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/steinw1/_kernels/_fast.pyx"],
            language_level="3",
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
