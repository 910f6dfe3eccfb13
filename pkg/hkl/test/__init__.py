r"""
The testing module
"""
