from __future__ import annotations

"""
Command-line entrypoint:
`python -m backend.app eval-eta --z 2 --s 1 --m 3`

The real application code lives in `app/backend/`; it is exposed here by adding
that directory to `sys.path`.
"""

import sys
from pathlib import Path

# Make `app/backend` importable as top-level modules (commands/, services/, settings.py, app.py, etc.)
BACKEND_DIR = Path(__file__).resolve().parents[1] / "app" / "backend"
sys.path.insert(0, str(BACKEND_DIR))

# The CLI lives in app/backend/app.py (module name: `app`)
import app as _backend_app_module  # type: ignore  # noqa: E402

main = _backend_app_module.main

if __name__ == "__main__":
    sys.exit(main())
