#-------------------------------------------------------------------------------
# bigforest: setup.py
#
# Setup/installation script.
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from setuptools import setup


try:
    with open('README.rst', 'rt') as readme:
        description = '\n' + readme.read()
except IOError:
    # maybe running setup.py from some other dir
    description = ''


setup(
    # metadata
    name='bigforest',
    description='Random forests for big data: resampling variants, '
                'out-of-bag error estimates and online forests',
    long_description=description,
    license='Public domain',
    version='0.1',
    platforms='Cross Platform',
    classifiers = [
        'Programming Language :: Python :: 3',
        ],
    python_requires='>=3.8',

    install_requires=[
        'construct >= 2.10',
        'joblib >= 1.0',
        'numpy >= 1.20',
        'pandas >= 1.3',
        ],

    # All packages and sub-packages must be listed here
    packages=[
        'bigforest',
        'bigforest.common',
        'bigforest.data',
        'bigforest.tree',
        'bigforest.resample',
        'bigforest.forest',
        'bigforest.online',
        'bigforest.eval',
        'bigforest.cli',
        ],

    scripts=['scripts/bigforest.py'],
)
