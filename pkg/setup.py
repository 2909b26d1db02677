import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: huffre falls back to numpy at import time.
ext_modules = []
if os.environ.get("HUFFRE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "huffre._ckernels",
                    ["src/huffre/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
