import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("WEYLFLOW_NO_EXTENSION", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension(
                "weylflow._ckernels",
                ["src/weylflow/_ckernels.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
