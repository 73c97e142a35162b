"""
Experiment suites for mixdisc

Randomized checks of the inequalities and identities behind the estimator,
one CSV row per repetition.
"""

from .coordinator import ExperimentCoordinator

__all__ = ['ExperimentCoordinator']
