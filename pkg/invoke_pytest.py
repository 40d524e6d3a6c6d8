"""
Unit tests at Windows environments required to invoke from a py module,
because the sweep command runs its members in worker processes.
"""

import multiprocessing
import sys

import pytest


if __name__ == "__main__":
    multiprocessing.freeze_support()
    sys.exit(pytest.main())
