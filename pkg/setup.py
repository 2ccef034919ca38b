"""Build the optional compiled kernels.

The extension is optional: when Cython or a C compiler is missing the package
installs without it and ``toeplitz_ball._accel`` falls back to the pure-Python
kernels.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "toeplitz_ball._kernels",
                ["src/toeplitz_ball/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )

setup(ext_modules=ext_modules)
