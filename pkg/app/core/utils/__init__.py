"""
Core utility modules
"""
