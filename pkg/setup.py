from setuptools import setup

_adelim_version = '0.9.0'

setup(name = 'adelim',
    version = _adelim_version,
    description = 'Higher-order adiabatic elimination of Lindblad models with complete-positivity diagnostics',
    python_requires = '>=3.8',
    install_requires = ['numpy >= 1.20',
                        'scipy >= 1.6',
                        'pyparsing >= 2.4'],
    tests_require = ['pytest'],
    packages = ['adelim',
                    'adelim.engine',
                    'adelim.schemes',
                    'adelim.toolbox',
                    'adelim.test',
                        'adelim.test.engine',
                        'adelim.test.schemes',
                        'adelim.test.toolbox',
                ],
    entry_points = {'console_scripts': ['adelim = adelim.cli:main']},
    license = 'LGPL',
)
