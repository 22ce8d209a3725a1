"""
Test suite for the chunk list, oracle and bench
"""
