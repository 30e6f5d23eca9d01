"""Build hook for the optional Cython elimination kernel.

The package works without it: ``crndecomp.exactla`` falls back to the
pure-Python kernel when the extension cannot be imported.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CRNDECOMP_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "crndecomp.exactla._ckernel",
                    ["src/crndecomp/exactla/_ckernel.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
