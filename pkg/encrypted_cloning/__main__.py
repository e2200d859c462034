import sys

from encrypted_cloning.cli import main

sys.exit(main())
