import sys

from huopm.cli import main

sys.exit(main())
