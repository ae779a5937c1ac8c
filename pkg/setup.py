"""Build script for the optional compiled kernels.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); the Cython module just speeds up the dense-engine
inner loops. Any failure to cythonize or compile therefore downgrades to a
pure-Python install instead of aborting.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: compiled kernels skipped ({exc}); "
                  "using the NumPy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "using the NumPy fallback")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"warning: {exc}; compiled kernels will not be built")
        return []
    ext = Extension(
        "mqskew._ckernels",
        sources=["src/mqskew/_ckernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
