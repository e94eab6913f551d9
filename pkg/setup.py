"""Build the optional Cython kernels; the package falls back to numpy without them."""
from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:  # pragma: no cover - pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "holonomic._kernels",
                ["src/holonomic/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
