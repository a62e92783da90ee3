"""
Multiwinner Committee Elections

Top-k-counting committee scoring rules, the fixed-majority characterization and
winner determination algorithms with a brute-force oracle.
"""

__version__ = "0.1.0"
