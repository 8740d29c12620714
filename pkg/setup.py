"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-numpy
fallback is selected at import time); set FWLP_PURE_PYTHON=1 to skip
the build entirely.
"""
import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Degrade to the pure-Python fallback when no compiler is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # CompileError, DistutilsPlatformError, ...
            print(f"WARNING: skipping compiled kernels ({exc!r}); "
                  "falling back to pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: could not build {ext.name} ({exc!r}); "
                  "falling back to pure-Python kernels")


ext_modules = []
cmdclass = {}
if os.environ.get("FWLP_PURE_PYTHON") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension(
                "fwlp._kernels_cy",
                sources=["src/fwlp/_kernels_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )],
            language_level="3",
        )
        cmdclass = {"build_ext": optional_build_ext}
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass=cmdclass)
