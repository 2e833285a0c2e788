# Always prefer setuptools over distutils
from setuptools import setup, find_packages
import pathlib

import codecs
import os.path


def read(rel_path):
    here = os.path.abspath(os.path.dirname(__file__))
    with codecs.open(os.path.join(here, rel_path), 'r') as fp:
        return fp.read()


def get_version(rel_path):
    for line in read(rel_path).splitlines():
        if line.startswith('__version__'):
            delim = '"' if '"' in line else "'"
            return line.split(delim)[1]
    else:
        raise RuntimeError("Unable to find version string.")


here = pathlib.Path(__file__).parent.resolve()

# Get the long description from the README file
long_description = (here / 'README.md').read_text(encoding='utf-8')

setup(
    name='gwb',  # Required

    # Versions should comply with PEP 440:
    # https://www.python.org/dev/peps/pep-0440/
    version=get_version("src/gwb/__init__.py"),  # Required

    description='A workbench for exponential-algebraic geometry: '
                'rotundity, predimension and numeric witnesses',  # Optional

    long_description=long_description,  # Optional
    long_description_content_type='text/markdown',  # Optional

    # Classifiers help users find your project by categorizing it.
    #
    # For a list of valid classifiers, see https://pypi.org/classifiers/
    classifiers=[  # Optional
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3 :: Only',
    ],

    keywords='exponential algebra, groebner bases, rotundity, '
             'schanuel, lll, power series',  # Optional

    # When your source code is in a subdirectory under the project root, e.g.
    # `src/`, it is necessary to specify the `package_dir` argument.
    package_dir={'': 'src'},  # Optional

    packages=find_packages(where='src'),  # Required

    python_requires='>=3.8, <4',

    # sympy provides the polynomial rings, Groebner-friendly domains and exact
    # matrices; mpmath the multiprecision verification; numpy the Newton solves.
    install_requires=[
        'more-itertools',
        'mpmath>=1.2',
        'numpy>=1.20',
        'sympy>=1.12',
    ],

    # List additional groups of dependencies here, for example:
    #
    #   $ pip install gwb[dev]
    extras_require={  # Optional
        'dev': ['check-manifest', 'flake8'],
        'test': ['coverage', 'pytest'],
    },

    package_data={  # Optional
        'gwb': [],
    },

    data_files=[],  # Optional

    # `gwb <verb> <inputs> [options]`
    entry_points={  # Optional
        'console_scripts': [
            'gwb=gwb.cli:main',
        ],
    },
)
