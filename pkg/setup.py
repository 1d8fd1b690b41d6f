"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a failed or skipped compilation is not fatal.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("trilobatto._kernels", ["src/trilobatto/_kernels.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
