from setuptools import setup, find_packages

setup(
    name='stapde',
    version='0.1.0',
    packages=find_packages(exclude=['examples', 'examples.*']),
    package_data={'stapde.fdtd': ['obstacle_presets.ini']},
    url='',
    license='',
    description='Clifford-algebra and spacetime-algebra residual networks trained as surrogates of FDTD Maxwell solutions',
    python_requires='>=3.8',
    install_requires=['numpy', 'scikit-image', 'coloredlogs', 'tabulate', 'babel', 'SQLAlchemy']
)
