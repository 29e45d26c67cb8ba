"""Builds the optional Cython kernel; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("QPBANDS_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("qpbands._ckernels", ["src/qpbands/_ckernels.pyx"],
                       include_dirs=[np.get_include()],
                       define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                       extra_compile_args=["-O2"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
