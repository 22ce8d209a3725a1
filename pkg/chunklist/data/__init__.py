"""
Pydantic models: list options, operation traces, benchmark config and reports
"""
