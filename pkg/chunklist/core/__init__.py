"""
Core library plumbing: configuration, logging, errors, monitoring, worker pools
"""
