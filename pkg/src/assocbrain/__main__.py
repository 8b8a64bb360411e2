import sys

from assocbrain.cli import main

sys.exit(main())
