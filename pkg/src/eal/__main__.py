"""Allow ``python -m eal``."""

from .cli import main

raise SystemExit(main())
