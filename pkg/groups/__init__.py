"""Finitely presented groups: words, Tietze moves, low-index subgroups and H1."""
