"""Build script for the optional compiled kernel.

The package works without the extension (a pure-Python twin of the kernel
is selected at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "swarmcdm.engine._kernels",
                ["src/swarmcdm/engine/_kernels.pyx"],
                include_dirs=[np.get_include()],
                # No -ffast-math: the pure-Python twin must produce
                # bit-identical doubles.
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
