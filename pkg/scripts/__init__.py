"""
Maintenance scripts for trace corpora
"""
