import sys
from pathlib import Path

# make tests/_util.py and tests/fixtures/ importable regardless of cwd
TESTS_DIR = Path(__file__).parent
for entry in (TESTS_DIR, TESTS_DIR / "fixtures"):
    if str(entry) not in sys.path:
        sys.path.insert(0, str(entry))
