"""CVV-Pro: online learning under adversarially time-varying constraints"""

__version__ = "0.1.0"
