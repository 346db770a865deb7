from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "walshnorlund._speedups",
                ["src/walshnorlund/_speedups.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-Python fallback in walshnorlund._purecore is selected at import.
    ext_modules = []

setup(ext_modules=ext_modules)
