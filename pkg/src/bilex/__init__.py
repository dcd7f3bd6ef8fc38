"""Translation lexicon acquisition from raw parallel corpora (bitexts)."""

__version__ = "0.1.0"
