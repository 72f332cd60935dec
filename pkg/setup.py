"""Build the optional Cython kernels.

The package works without them; ``qrlab._backend`` falls back to the pure
Python implementations when ``qrlab._kernels`` cannot be imported.
"""
import os
import sys

from setuptools import setup

ext_modules = []
if not os.environ.get("QRLAB_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "qrlab._kernels",
                    ["src/qrlab/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except Exception as exc:  # pragma: no cover - build environment specific
        print(f"qrlab: skipping Cython kernels ({exc})", file=sys.stderr)
        ext_modules = []

setup(ext_modules=ext_modules)
