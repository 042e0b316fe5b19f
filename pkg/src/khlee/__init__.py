"""Khovanov-Lee complexes of tangles, their red/green splitting in the
Karoubi envelope of the dotted cobordism category, and cross-checks of
Lee's degeneration against brute-force homology."""

__version__ = "0.1.0"
