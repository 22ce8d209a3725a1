"""
Domain modules: chunk list, sequential oracle, benchmark harness
"""
