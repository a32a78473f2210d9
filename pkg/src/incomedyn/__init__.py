"""Bayesian inference for time-varying parametric income distributions.

The package fits GB2-family income distributions to annual income
panels under three dynamic specifications (independent years, Gaussian
random-walk parameter evolution, and a horseshoe-shrinkage random
walk), then derives posterior summaries of inequality, poverty,
stochastic dominance, predictive fit, and forecasts.
"""

__version__ = "0.1.0"
