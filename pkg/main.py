import sys

from mebart.cli import main

sys.exit(main())
