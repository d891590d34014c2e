import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "popsize_lab.kernels._core",
                ["src/popsize_lab/kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython available: install pure-Python; the numpy fallback kernels
    # are selected automatically at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
