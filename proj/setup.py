"""Builds the pybind11 extension by driving the project's CMake configuration.

The wheel-building backends that normally wrap CMake (scikit-build-core)
are not available on this package index, so a thin build_ext shim invokes
the system cmake directly and drops the resulting _core module into the
rdrsim package.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        out_dir.mkdir(parents=True, exist_ok=True)

        import pybind11

        subprocess.run(
            [
                "cmake",
                str(source_dir),
                "-DRDR_BUILD_PYTHON=ON",
                "-DCMAKE_BUILD_TYPE=Release",
                f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
                f"-DPYTHON_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "-j"],
            cwd=build_dir,
            check=True,
        )
        built = next(build_dir.glob("_core*.so"))
        shutil.copy2(built, Path(self.get_ext_fullpath(ext.name)))


setup(
    ext_modules=[CMakeExtension("rdrsim._core")],
    cmdclass={"build_ext": CMakeBuild},
)
