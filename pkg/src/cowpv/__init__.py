"""Thompson's group V, the groups V_(G, theta), and their co-word problem automata."""

__version__ = "0.1.0"
