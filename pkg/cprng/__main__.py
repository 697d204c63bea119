import sys

from cprng.main import main

sys.exit(main())
