import sys

from helpfulness.cli import main

sys.exit(main())
