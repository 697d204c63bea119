"""
cprng - chaotic pseudo-random numbers from weakly coupled tent maps.
"""
