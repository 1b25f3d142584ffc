"""Build script: compiles the optional Jacobi kernel extension.

The package works without the extension (a numpy/LAPACK fallback is
selected at import time), so a failed compile only prints a warning.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: building descentlab._kernels failed ({exc!r}); "
            "installing with the pure-python kernel backend only.",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print(
            "WARNING: Cython not available; skipping the compiled kernel backend.",
            file=sys.stderr,
        )
        return []
    # -fcx-limited-range: plain complex multiply/divide without the Annex G
    # inf/nan fixup calls; kernel inputs are validated finite upstream.
    ext = Extension(
        "descentlab._kernels",
        ["src/descentlab/_kernels.pyx"],
        extra_compile_args=["-O3", "-fcx-limited-range"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
