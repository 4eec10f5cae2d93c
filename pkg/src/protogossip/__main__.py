"""``python -m protogossip``."""

import sys

from protogossip.cli import main

sys.exit(main())
