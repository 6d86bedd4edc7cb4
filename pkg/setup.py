"""Build hook for the optional compiled search kernel.

The package works without the extension (a pure-Python twin of the kernel
is selected at import time), so a missing Cython or C++ toolchain only
costs speed, not functionality.
"""

from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "mlcp._kernel_cy",
                ["src/mlcp/_kernel_cy.pyx"],
                language="c++",
            )
        ],
        language_level="3",
    )

setup(ext_modules=extensions)
