"""CVV-Pro Test Suite"""
