import sys

from adelim.cli import main

if __name__ == "__main__":
    sys.exit(main())
