import sys

from qpbands.cli import main

sys.exit(main())
