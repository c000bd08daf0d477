#  Copyright 2026 The constrained-hc authors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing,
#  software distributed under the License is distributed on an
#  "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
#  KIND, either express or implied.  See the License for the
#  specific language governing permissions and limitations
#  under the License.

import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="constrained_hc_tool",
    version="0.1.0",
    description="Hierarchical clustering with triplet constraints",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=[
        'constrainedhc',
        'constrainedhc.utils'
    ],
    package_data={
        'constrainedhc': ['data/zoo.data'],
    },
    python_requires='>=3.8',
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Programming Language :: Python :: 3 :: Only",
        "License :: OSI Approved :: Apache Software License",
    ],
    install_requires=[
        'invoke >= 2.0',
        'pyyaml >= 6.0',
        'requests >= 2.28',
        'numpy >= 1.22',
        'networkx >= 2.8',
    ],
    extras_require={
        'tests': [
            'pytest >= 7.0',
            'hypothesis >= 6.0',
        ],
    },
    entry_points={
        'console_scripts': ['chc = constrainedhc.__main__:run'],
    }
)
