from setuptools import Extension, setup

# The compiled kernels are an optimization: the package falls back to the
# pure-numpy implementation when the extension is unavailable.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "mdsarray._kernels",
                ["src/mdsarray/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
