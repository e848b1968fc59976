"""Dense square matrices over an exact field, as tuples of row tuples."""

from __future__ import annotations

from typing import Sequence

from .fields import FieldSpec, Scalar

Matrix = tuple[tuple[Scalar, ...], ...]


def as_matrix(rows: Sequence[Sequence], field: FieldSpec) -> Matrix:
    m = tuple(tuple(field.coerce(c) for c in row) for row in rows)
    if any(len(row) != len(m) for row in m):
        raise ValueError("matrix must be square")
    return m


def identity(size: int, field: FieldSpec) -> Matrix:
    return tuple(
        tuple(field.one if i == j else field.zero for j in range(size)) for i in range(size)
    )


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Matrix, b: Matrix, field: FieldSpec) -> Matrix:
    cols = transpose(b)
    out = []
    for row in a:
        out.append(
            tuple(sum((x * y for x, y in zip(row, col)), field.zero) for col in cols)
        )
    return tuple(out)


def inverse(m: Matrix, field: FieldSpec) -> Matrix:
    """Gauss-Jordan inverse; raises ``ValueError`` if ``m`` is singular."""
    size = len(m)
    aug = [list(row) + list(e) for row, e in zip(m, identity(size, field))]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col]), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = field.one / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[size:]) for row in aug)


def is_invertible(m: Matrix, field: FieldSpec) -> bool:
    try:
        inverse(m, field)
    except ValueError:
        return False
    return True
