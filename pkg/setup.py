import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    # the kernel is an accelerator only; a failed compile leaves the pure-Python path
    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled rank kernel not built ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: compiled rank kernel not built ({exc})")


def extensions():
    if os.environ.get("OPBAR_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension
    return cythonize(
        [Extension("opbar._rank", ["src/opbar/_rank.pyx"])],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
