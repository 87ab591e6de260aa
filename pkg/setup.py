import os

from setuptools import setup

ext_modules = []
if os.environ.get("GJL_NO_EXTENSION", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(["src/gjl/_chain.pyx"], compiler_directives={"language_level": "3"}, quiet=True)

setup(ext_modules=ext_modules)
