import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("EQFREE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # fall back to the pure-Python kernels
        pass
    else:
        ext_modules = cythonize(
            [Extension("eqfree._ckernels", ["src/eqfree/_ckernels.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
