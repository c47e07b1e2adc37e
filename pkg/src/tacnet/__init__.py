"""Design workbench for rooted-tree tactical wireless networks.

Modules: :mod:`instance` (benchmark generation), :mod:`topology` (trees,
loads, validation), :mod:`radio` (channel/frequency/beam configuration),
:mod:`phy` (interference-aware throughput), :mod:`objective` (scenario
fitness), :mod:`hubselect` (master-hub candidate strategies), :mod:`search`
(tabu search), :mod:`stats` (nonparametric comparison), :mod:`experiments`
(sensitivity sweeps and reports), :mod:`cli` (command line).
"""

__version__ = "0.1.0"
