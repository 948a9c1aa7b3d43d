"""dequad: cuadratura tanh-sinh.

Punto de entrada principal; equivale al comando ``dequad``.
"""

import sys

from dequad.cli import main

if __name__ == "__main__":
    sys.exit(main())
