from setuptools import setup, find_packages

setup(
    name="padroes-132",
    version="0.1.0",
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=[
        "numpy>=1.20.0",
        "scipy>=1.7.0",
        "pandas>=1.5.0",
        "python-dotenv>=1.0.0",
        "tqdm>=4.60.0",
        "rich>=13.0.0",
        "jsonschema>=4.0.0",
    ],
    extras_require={
        "dev": ["pytest>=7.0", "pytest-cov>=4.0", "pytest-timeout>=2.0", "hypothesis>=6.0"],
    },
    entry_points={
        "console_scripts": ["padroes132=padroes132.cli:main"],
    },
    author="Desenvolvedor",
    author_email="dev@example.com",
    description="Funções geradoras de permutações que evitam 1-3-2 restritas por padrões generalizados",
    keywords="permutações, padrões generalizados, funções geradoras, Chebyshev, combinatória",
    python_requires=">=3.8",
)
