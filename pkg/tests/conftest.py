import sys
from pathlib import Path

# Test modules import shared oracles from each other (tests/ is flat).
sys.path.insert(0, str(Path(__file__).parent))
