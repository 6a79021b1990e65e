"""
Setup script for ThabitSolver
"""
from setuptools import setup, find_packages
from thabit_solver import __version__

setup(
    name="thabit-solver",
    version=__version__,
    description="Certified solver for Thabit and Williams numbers in Padovan, Perrin and Narayana sequences",
    author="ThabitSolver Team",
    packages=find_packages(exclude=["tests", "tests.*"]),
    include_package_data=True,
    install_requires=[
        "pyyaml>=6.0",
        "tqdm>=4.64.0",
        "python-dotenv>=1.0.0",
        "python-flint>=0.5.0",
    ],
    extras_require={
        "dev": ["pytest>=7.0.0", "pytest-cov>=4.0.0", "black>=23.0.0", "isort>=5.12.0", "flake8>=6.0.0"],
    },
    entry_points={
        "console_scripts": ["thabit-solver=thabit_solver.cli:main"],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
)
