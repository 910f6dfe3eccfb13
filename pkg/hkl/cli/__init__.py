r"""
Command line front end. Every run writes its products and a ``manifest.json`` holding the resolved configuration in
the output directory.
"""

from .commands import COMMANDS, run
from .config import RunConfig, read_config_file, resolve, write_manifest
