"""Build shim: compiles the optional Cython tracing kernel.

The package works without the extension (a pure-Python kernel is selected
at import time); the compiled kernel makes real-section tracing ~100x
faster.  Set HELESHAW_SKIP_EXT=1 to skip compilation entirely.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("HELESHAW_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "heleshaw._curvetrace",
                    ["src/heleshaw/_curvetrace.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
