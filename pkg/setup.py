import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CLONEBELL_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("clonebell._lhv_kernel", ["src/clonebell/_lhv_kernel.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
