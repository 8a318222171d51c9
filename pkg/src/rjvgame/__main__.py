import sys

from rjvgame.cli import main

sys.exit(main())
