import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DEFORMARY_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python install
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("deformary._kernels", ["src/deformary/_kernels.pyx"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
