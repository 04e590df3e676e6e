"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile only costs speed, not correctness.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "sievekit._kernels_cy",
                ["src/sievekit/_kernels_cy.pyx"],
                include_dirs=[numpy.get_include()],
                # fp-contract off: the psi error scan must produce the
                # same bits as the pure-Python path, so no FMA fusion.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
