"""Build script for the optional compiled integrand kernels.

The package works without the extension (a NumPy fallback is selected at
import time); building it just makes the semi-numerical success-probability
pipeline several times faster.
"""
import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "corrmrc._kernels._compiled",
                ["src/corrmrc/_kernels/_compiled.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
)
