"""Build script: compiles the optional Cython core, falling back to pure Python.

The package is fully functional without the extension; ``herzmorrey._kernels``
selects the compiled core at import time when available.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "herzmorrey._core",
                ["src/herzmorrey/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except Exception as exc:  # noqa: BLE001 - any build-chain failure means fallback
    print(f"herzmorrey: building without compiled core ({exc})")

setup(ext_modules=ext_modules)
