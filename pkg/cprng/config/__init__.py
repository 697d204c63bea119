"""
Runtime settings for the generator and its experiments.
"""
