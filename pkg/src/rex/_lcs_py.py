"""Pure-Python LCS alignment; reference for the compiled ``_lcs_ext`` kernel."""

from __future__ import annotations

DIAG, UP, LEFT = 0, 1, 2


def lcs_pairs(a: str, b: str) -> list[tuple[int, int]]:
    """Index pairs ``(i, j)`` of one longest common subsequence, ascending.

    Equal characters are always matched diagonally; otherwise ties prefer
    skipping a character of ``a``.  The compiled kernel makes the same choices.
    """
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return []
    prev = [0] * (m + 1)
    moves = []
    for i in range(n):
        ai = a[i]
        cur = [0] * (m + 1)
        row = bytearray(m)
        for j in range(m):
            if ai == b[j]:
                cur[j + 1] = prev[j] + 1
                row[j] = DIAG
            elif prev[j + 1] >= cur[j]:
                cur[j + 1] = prev[j + 1]
                row[j] = UP
            else:
                cur[j + 1] = cur[j]
                row[j] = LEFT
        moves.append(row)
        prev = cur

    pairs = []
    i, j = n, m
    while i > 0 and j > 0:
        move = moves[i - 1][j - 1]
        if move == DIAG:
            i -= 1
            j -= 1
            pairs.append((i, j))
        elif move == UP:
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return pairs
