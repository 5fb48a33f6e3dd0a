"""Team recommendation engine: match researcher profiles to calls for proposals.

Four methods of increasing sophistication (M0 random, M1 string matching,
M2 taxonomy matching, M3 boosted bandit) produce candidate teams per call,
scored by a configurable goodness metric.
"""

__version__ = "0.1.0"
