from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("polycsp._ac", ["src/polycsp/_ac.pyx"])],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
except ImportError:
    # The package works without the compiled kernel; homsearch falls back to
    # the pure-Python implementation at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
