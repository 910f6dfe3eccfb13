"""
Miscellaneous
"""
from . import counter
from . import log
