import pathlib
import sys

# make helpers.py importable regardless of pytest's import mode
sys.path.insert(0, str(pathlib.Path(__file__).parent))
