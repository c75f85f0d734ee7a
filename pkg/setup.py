import numpy as np
from setuptools import Extension, setup


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python install; kernels fall back to numpy
        return []
    return cythonize(
        [
            Extension(
                "somfrechet._ckernels",
                ["src/somfrechet/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )


try:
    ext_modules = _extensions()
except Exception as exc:  # noqa: BLE001 - any Cython failure leaves the numpy backend
    print(f"warning: compiled kernels disabled ({exc})")
    ext_modules = []

setup(ext_modules=ext_modules)
