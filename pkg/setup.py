"""Builds the optional compiled Lanczos kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a missing Cython toolchain must not break installation.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("ndc.kernels._lanczos", ["src/ndc/kernels/_lanczos.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
