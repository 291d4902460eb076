"""Optional compiled kernel build.

The package works without the extension; _core falls back to the pure
Python kernels when defdatum._gfcore is not importable.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or cython missing
            print(f"skipping optional extension build: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"skipping optional extension {ext.name}: {exc}")


extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("defdatum._gfcore", ["src/defdatum/_gfcore.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
