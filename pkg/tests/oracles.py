"""Independent reference implementations used only by the tests."""

from __future__ import annotations

from itertools import combinations


def single_linkage_clusters(stamps: list[int], threshold: int) -> list[list[int]]:
    """Connected components of the graph joining any two points within
    ``threshold`` of each other (brute force, O(n^2) union-find).

    This is the definition of single-linkage clusters cut at ``threshold``;
    it never looks at consecutive gaps.
    """
    parent = list(range(len(stamps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(len(stamps)), 2):
        if abs(stamps[i] - stamps[j]) <= threshold:
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(stamps)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def lcs_length_bruteforce(a: str, b: str) -> int:
    """Length of the longest common subsequence by exhaustive search over
    subsequences of the shorter string (tiny inputs only)."""
    if len(a) > len(b):
        a, b = b, a

    def is_subseq(s, t):
        it = iter(t)
        return all(ch in it for ch in s)

    for size in range(len(a), -1, -1):
        for idx in combinations(range(len(a)), size):
            if is_subseq("".join(a[i] for i in idx), b):
                return size
    return 0


def repl_replay(sources: list[str]) -> object:
    """Evaluate sources the way a REPL would, with ``_`` bound to the last
    value; an assignment ``v = e`` evaluates to the assigned value."""
    env: dict = {}
    value = None
    for src in sources:
        env["_"] = value
        if "=" in src and src.split("=", 1)[0].strip().isidentifier() and "==" not in src:
            name, expr = src.split("=", 1)
            value = eval(expr, env)
            env[name.strip()] = value
        else:
            value = eval(src, env)
    return value


def script_replay(statements: list[str], subject: str) -> object:
    """Run rewritten statements as a plain script (no ``_``) and read ``subject``."""
    env: dict = {}
    for stmt in statements:
        exec(stmt, env)
    return env[subject]


def set_partitions(items: list) -> list[list[list]]:
    """Every partition of ``items`` into non-empty blocks."""
    if not items:
        return [[]]
    head, rest = items[0], items[1:]
    out = []
    for part in set_partitions(rest):
        out.append([[head]] + part)
        for k in range(len(part)):
            out.append(part[:k] + [[head] + part[k]] + part[k + 1:])
    return out


def min_setup_statements(needs: dict[int, set]) -> int:
    """Fewest setup statements over all groupings of tests into contexts,
    where a context must set up everything any of its tests needs."""
    best = None
    for part in set_partitions(sorted(needs)):
        cost = sum(len(set().union(*(needs[t] for t in block))) for block in part)
        best = cost if best is None else min(best, cost)
    return best or 0
