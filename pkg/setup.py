"""Builds the optional compiled kernels; the package works without them.

    pip install -e . --no-build-isolation
    python setup.py build_ext --inplace
"""
import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("FINHOR_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("finhor._kernels", ["src/finhor/_kernels.pyx"],
                       include_dirs=[np.get_include()],
                       extra_compile_args=["-O3"],
                       define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError as exc:
        print(f"finhor: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
