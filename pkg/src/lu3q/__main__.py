import sys

from lu3q.cli import main

sys.exit(main())
