"""Build script: compiles the scan kernels when Cython is available.

The package works without the extension; `ultracloud.kernels` falls back to
the numpy implementations in `ultracloud._fallback`.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "ultracloud._kernels",
                ["src/ultracloud/_kernels.pyx"],
                extra_compile_args=["-O3"],
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
