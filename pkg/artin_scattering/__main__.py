import sys

from artin_scattering.cli import main

sys.exit(main())
