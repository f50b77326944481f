import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HURWITZ_WEDGE_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "hurwitz_wedge.oracle._kernels",
                    ["src/hurwitz_wedge/oracle/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # no Cython: the package falls back to the pure-Python kernels
        ext_modules = []

setup(ext_modules=ext_modules)
