"""Small shared helpers for gap and period scanning."""


def checkpoints_geometric(n, samples):
    """``samples`` geometrically spaced marks in [2, n], deduplicated,
    always ending at ``n``."""
    if n < 2:
        return [n]
    marks = []
    for i in range(1, samples + 1):
        mark = round(n ** (i / samples))
        mark = max(mark, 2)
        if not marks or mark > marks[-1]:
            marks.append(mark)
    if marks[-1] != n:
        marks.append(n)
    return marks
