"""Build script: compiles the Monte Carlo hot kernel as a C extension.

The package works without the extension (a pure-numpy fallback is selected
at import time), so the build degrades gracefully when no compiler or
Cython is available. Set KEYHOLE_SOP_NO_EXT=1 to skip the extension.
"""

import os

from setuptools import setup

extensions = []
if not os.environ.get("KEYHOLE_SOP_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        extensions = cythonize(
            [
                Extension(
                    "keyhole_sop._kernel",
                    ["src/keyhole_sop/_kernel.pyx"],
                    include_dirs=[numpy.get_include()],
                    # -ffp-contract=off: the kernel must round exactly like
                    # the pure-numpy path so both backends produce identical
                    # outage counts; FMA contraction would change that.
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        extensions = []

setup(ext_modules=extensions)
