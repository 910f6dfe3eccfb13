from setuptools import setup, find_packages

setup(
    name='HKL',
    version='1.0',
    description='Heisenberg Kepler Laboratory: Kepler dynamics on the Heisenberg group and on lattices',
    packages=find_packages(),
    install_requires=['numpy', 'scipy', 'matplotlib'],
    extras_require={'test': ['pytest']},
    entry_points={'console_scripts': ['hkl=hkl.cli.main:main']},
    maintainer='Pierre Seize',
    maintainer_email='pierre.seize@gmail.com',
)
