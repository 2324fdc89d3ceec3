import sys

from topocoarse.cli import main

sys.exit(main())
