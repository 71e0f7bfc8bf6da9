"""Review minimization and its effect on a content-based recommender."""

__version__ = "0.1.0"
