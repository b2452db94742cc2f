"""Build script. The compiled kernel is optional: if Cython or a C compiler is
unavailable the package still installs and falls back to the pure lane."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("RANKEXPLAIN_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "rankexplain._kernels._ckern",
                    ["src/rankexplain/_kernels/_ckern.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level="3",
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print("skipping compiled kernels: %s" % exc)
        ext_modules = []

setup(ext_modules=ext_modules)
