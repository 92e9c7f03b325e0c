"""Build script: compiles the optional sieve kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a missing compiler or Cython only degrades performance.
Set DKRATIO_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("DKRATIO_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "dkratio._kernel_cy",
                    ["src/dkratio/_kernel_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
