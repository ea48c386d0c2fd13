"""Build script: compiles the optional C kernel extension when a toolchain exists.

The package works without the extension (a numpy fallback is selected at
import); set V2VSEC_NO_EXT=1 to skip the compile step entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("V2VSEC_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "v2vsec._kernels._ergodic",
                    ["src/v2vsec/_kernels/_ergodic.pyx"],
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
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
