import os
from setuptools import setup

__currdir__ = os.getcwd()
__readme__ = os.path.join(__currdir__, 'README.md')

setup(
    name='modlie',
    version='0.1.0',
    description='Exact computations in restricted Lie algebras over prime fields: Witt-type algebras, tori, weight '
                'spaces and automorphisms.',
    long_description=open(__readme__).read(),
    packages=['modlie'],
    python_requires='>=3.7, <4',
    install_requires=[
        'numpy',
        'sympy',
        'pandas',
        'openpyxl',
        'mock',
        'hypothesis'
    ],
    entry_points={
        'console_scripts': ['modlie=modlie.cli:main']
    }
)
