import sys

from relcommit.cli import main

sys.exit(main())
