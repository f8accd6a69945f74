import sys

from sieve_bands.cli import main

sys.exit(main())
