"""Build script: compiles the optional native kernel extension.

The package is fully functional without the extension (a pure-Python
implementation of every kernel is selected at import time), so any build
failure here downgrades to a pure install instead of aborting.

Set DIVKIT_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"divkit: native kernel build failed ({exc}); "
                  "installing pure-Python kernels only")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"divkit: skipping {ext.name}: {exc}")


def extensions():
    if os.environ.get("DIVKIT_NO_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "divkit.kernels._native",
        sources=["src/divkit/kernels/_native.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
