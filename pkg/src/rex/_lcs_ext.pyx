# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled LCS alignment kernel.  Must agree exactly with ``_lcs_py``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

cdef enum:
    DIAG = 0
    UP = 1
    LEFT = 2


def lcs_pairs(str a, str b):
    cdef Py_ssize_t n = len(a), m = len(b)
    cdef Py_ssize_t i, j
    cdef Py_UCS4 ai
    cdef int *prev
    cdef int *cur
    cdef int *tmp
    cdef unsigned char *moves
    cdef unsigned char move
    if n == 0 or m == 0:
        return []

    prev = <int *> malloc((m + 1) * sizeof(int))
    cur = <int *> malloc((m + 1) * sizeof(int))
    moves = <unsigned char *> malloc(n * m)
    if prev == NULL or cur == NULL or moves == NULL:
        free(prev)
        free(cur)
        free(moves)
        raise MemoryError()
    try:
        memset(prev, 0, (m + 1) * sizeof(int))
        cur[0] = 0
        for i in range(n):
            ai = a[i]
            for j in range(m):
                if ai == b[j]:
                    cur[j + 1] = prev[j] + 1
                    moves[i * m + j] = DIAG
                elif prev[j + 1] >= cur[j]:
                    cur[j + 1] = prev[j + 1]
                    moves[i * m + j] = UP
                else:
                    cur[j + 1] = cur[j]
                    moves[i * m + j] = LEFT
            tmp = prev
            prev = cur
            cur = tmp
            cur[0] = 0

        pairs = []
        i, j = n, m
        while i > 0 and j > 0:
            move = moves[(i - 1) * m + (j - 1)]
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
    finally:
        free(prev)
        free(cur)
        free(moves)
