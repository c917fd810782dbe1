"""Build script: compiles the Jacobi eigensolver extension when a toolchain
is available.  The package falls back to the pure-Python kernel at import
time, so a failed extension build is not fatal."""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from setuptools.errors import CCompilerError, ExecError, PlatformError
except ImportError:  # older setuptools
    from distutils.errors import (  # type: ignore
        CCompilerError,
        DistutilsExecError as ExecError,
        DistutilsPlatformError as PlatformError,
    )

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class OptionalBuildExt(build_ext):
    """Try to build the compiled kernel; warn instead of failing."""

    def run(self):
        try:
            super().run()
        except (PlatformError, FileNotFoundError):
            self._warn()

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except (CCompilerError, ExecError, PlatformError, FileNotFoundError):
            self._warn()

    @staticmethod
    def _warn():
        print(
            "WARNING: building the compiled Jacobi kernel failed; "
            "gaussep will use the pure-Python fallback."
        )


if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "gaussep._kernels._jacobi",
                ["src/gaussep/_kernels/_jacobi.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
