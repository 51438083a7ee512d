"""
Точка входа CLI klab
"""

import logging

from src.commands.cli import cli
from src.core.config import LOG_LEVEL

logging.basicConfig(level=LOG_LEVEL, format="%(levelname)s %(name)s: %(message)s")


if __name__ == "__main__":
    cli()
