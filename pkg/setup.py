from setuptools import setup, find_packages

setup(
    name="ncsim",
    version="0.3.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"src": ["reporting/templates/*.j2"]},
    python_requires=">=3.9",
    install_requires=[
        "pydantic>=2.5",
        "python-dotenv",
        "PyYAML",
        "numpy",
        "networkx",
        "pandas",
        "plotly",
        "jinja2",
        "psutil",
    ],
    extras_require={
        "test": ["pytest", "pytest-asyncio", "pytest-cov", "pytest-mock"],
    },
    entry_points={"console_scripts": ["ncsim=src.main:main"]},
)
