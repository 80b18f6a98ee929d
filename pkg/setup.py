from setuptools import Extension, setup

# The compiled top-k selection kernel is optional: the package falls back to a
# pure-numpy implementation at import time if the extension is missing.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "bitextfilter._kernels",
                ["src/bitextfilter/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
