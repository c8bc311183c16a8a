from setuptools import setup, find_packages

setup(
    name='surround_tools',
    version='0.1',
    license='MIT',
    description='Exact solver, scripted strategies and cop-number tables for surrounding cops and robber games',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    packages=find_packages(where="src"),  # Tells setuptools to look for packages in the src directory
    package_dir={"": "src"},  # Tells setuptools that package sources are under src
    install_requires=[      # Specify package outside standard libraries included in Python
        'numpy>=1.24',
        'networkx>=3.2',    # graph atlas, matchings and test oracles
        'pandas>=1.0',      # Specify versions if needed, means version 1 or higher
        'rapidfuzz>=3.8',
        'python-dotenv>=1.0',
        'argcomplete>=3.0'
    ],
    extras_require={
        'test': ['pytest>=8.0', 'hypothesis>=6.0'],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: MIT License',
        'Environment :: Console',  # Indicates that this package is suitable for console environments
        'Topic :: Scientific/Engineering :: Mathematics',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11'
    ],
    python_requires='>=3.10',
    entry_points={
        'console_scripts': [
            'st=surround_tools.cli:main'
        ]
    },
)
