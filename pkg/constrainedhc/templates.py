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

# Published Zoo results: animals, OPT, unconstrained noisy, constrained noisy, improvement %.
zoo_reference_rows = (
    (20, 1137, 1286, 1142, 12.63),
    (50, 23088, 25216, 23443, 7.68),
    (80, 89256, 99211, 90419, 9.85),
    (100, 171290, 190205, 173499, 9.75),
)

zoo_table_header = \
    '{:>8} {:>14} {:>16} {:>16} {:>12}'.format('animals', 'OPT', 'unconstrained', 'constrained',
                                               'improvement')

zoo_table_row = '{:>8} {:>14.2f} {:>16.2f} {:>16.2f} {:>11.2f}%'

zoo_measured_row = '{:>8} {:>14.2f} {:>16.2f} {:>16.2f} {:>11.2f}%  (this run)'

densest_demo_row = \
    'n={n:<4} crdc={crdc_reward:<14.6g} crrc mean={crrc_mean:<14.6g} ratio={ratio:.4f}'
