"""Entry point for the good command."""

import sys

from good_cli.cli import main

if __name__ == "__main__":
    sys.exit(main())
