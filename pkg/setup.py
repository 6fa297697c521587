"""Build the optional Cython kernels; the package falls back to pure Python without them."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SCOTTKIT_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "scottkit._kernels",
                    ["src/scottkit/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
