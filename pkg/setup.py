"""Build script for the optional compiled simplex core.

The package is fully functional without the extension: `lckit.simplex`
falls back to the pure-Python twin when `lckit._simplex_c` is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "lckit._simplex_c",
        ["src/lckit/_simplex_c.pyx"],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
