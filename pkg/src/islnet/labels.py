"""The canonical 35 gesture class labels: digits 1-9 followed by A-Z.

Lexicographic byte order of these names equals this list's order, so a
directory scan of a canonically laid-out dataset reproduces it exactly.
"""

CANONICAL_LABELS = [str(d) for d in range(1, 10)] + [chr(c) for c in range(65, 91)]


def default_labels(class_count: int) -> list:
    """Canonical names when the count matches, positional names otherwise."""
    if class_count == len(CANONICAL_LABELS):
        return list(CANONICAL_LABELS)
    return [str(i) for i in range(class_count)]
