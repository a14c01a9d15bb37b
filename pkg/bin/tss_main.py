import sys
from pathlib import Path

# allow running from a source checkout without installing
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from tss.cli.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
