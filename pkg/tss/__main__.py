import sys

from tss.cli.main import main

sys.exit(main())
