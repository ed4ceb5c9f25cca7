"""Kontsevich graph weights, deformed Campbell-Hausdorff series and Kashiwara-Vergne checks."""
__version__ = "0.1.0"
