import sys

from ipek.cli import main

sys.exit(main())
