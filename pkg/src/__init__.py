"""
Curve closure by arc rearrangement.
"""
