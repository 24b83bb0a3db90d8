"""
fedloc: personalized federated learning (FedAvg, FedAMP) with Bayesian fusion
of client posteriors for WiFi RSS indoor localization.
"""

__version__ = "0.1.0"
