import sys

from padroes132.cli import main
from padroes132.error_handler import ErrorHandler

if __name__ == "__main__":
    ErrorHandler("padroes132").install_global_handler()
    sys.exit(main())
