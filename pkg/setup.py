"""Setup script for the localisation workbench package."""

from setuptools import find_packages, setup

setup(
    name="locbench",
    version="0.1.0",
    description="Finite-category localisation workbench",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy>=1.24",
        "sympy>=1.12",
        "networkx>=3.1",
        "lark>=1.1.7",
        "pyyaml>=6.0.1",
        "python-dotenv>=1.0.0",
    ],
    entry_points={
        "console_scripts": [
            "locbench=locbench.cli:main",
        ],
    },
    python_requires=">=3.8",
)
