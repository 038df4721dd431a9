from setuptools import setup, find_packages
import os

version = '0.1'

tests_require = ['hypothesis', 'pytest', 'coverage', 'flake8']

setup(name='django-agent-rendezvous',
      version=version,
      description="Simulator for deterministic rendezvous and team problems "
      "of asynchronous mobile agents in anonymous port-labeled graphs",
      long_description=open(os.path.join(
          os.path.dirname(__file__), 'README.rst')).read(),
      classifiers=[
          'Development Status :: 3 - Alpha',
          'Environment :: Console',
          'Framework :: Django',
          'Intended Audience :: Science/Research',
          'Natural Language :: English',
          'Operating System :: OS Independent',
          'Programming Language :: Python',
          'Programming Language :: Python :: 3',
          'Topic :: Scientific/Engineering',
      ],
      keywords='mobile agents rendezvous asynchronous graphs simulation',
      license='GPL',
      packages=find_packages(exclude=['ez_setup', 'examples', 'tests']),
      include_package_data=True,
      zip_safe=False,
      python_requires='>=3.6',
      install_requires=[
          'Django>=3.1', 'djangorestframework',

          # Dashed command names for the console script
          'inflection',

          # Topology atlas and the rooted isomorphism oracle
          'networkx',
      ],
      tests_require=tests_require,
      extras_require=dict(tests=tests_require),
      entry_points="""
      # -*- Entry points: -*-
      [console_scripts]
      agent-rendezvous = agent_rendezvous.cli:main
      """,
      )
