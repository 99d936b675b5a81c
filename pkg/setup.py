from setuptools import setup
setup(
    name="fso-quantum-links",
    version="0.1.0",
    packages=["src", "src.scenarios"],
    install_requires=[
        "numpy",
        "pandas",
        "scipy>=1.6",
    ],
    extras_require={
        "test": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": ["fso-links=src.cli:main"],
    },
)
