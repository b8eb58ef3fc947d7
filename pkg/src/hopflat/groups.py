"""Multiplication tables for the small groups used throughout the test fleet."""

import itertools


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def z2_table():
    return cyclic_table(2)


def z4_table():
    return cyclic_table(4)


def z2xz2_table():
    # index 2a + b for (a, b) in Z2 x Z2
    table = []
    for a, b in itertools.product(range(2), range(2)):
        row = []
        for c, d in itertools.product(range(2), range(2)):
            row.append(2 * ((a + c) % 2) + ((b + d) % 2))
        table.append(row)
    return table


def s3_table():
    """Symmetric group on three letters; permutations in lexicographic order."""
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = []
    for p in perms:
        row = []
        for q in perms:
            comp = tuple(p[q[k]] for k in range(3))  # p after q
            row.append(index[comp])
        table.append(row)
    return table


GROUP_TABLES = {
    "Z2": z2_table,
    "Z4": z4_table,
    "Z2xZ2": z2xz2_table,
    "S3": s3_table,
}
