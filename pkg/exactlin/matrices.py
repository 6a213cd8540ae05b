"""Exact integer/rational matrices and the sparse JSON exchange format."""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

Number = Union[int, Fraction]


def format_number(value: Number) -> str:
    """Decimal string for an int, "p/q" for a non-integral rational."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_number(text: str) -> Number:
    value = Fraction(text)
    return value.numerator if value.denominator == 1 else value


def _domain_matrix(rows: Sequence[Sequence[Number]], cols: int) -> DomainMatrix:
    elements = [[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in row] for row in rows]
    return DomainMatrix(elements, (len(rows), cols), QQ)


def _to_fraction(element) -> Fraction:
    value = QQ.to_sympy(element)
    return Fraction(int(value.p), int(value.q))


def rational_rank(rows: Sequence[Sequence[Number]], cols: int = None) -> int:
    """Rank over Q."""
    if not rows:
        return 0
    cols = len(rows[0]) if cols is None else cols
    if cols == 0:
        return 0
    return _domain_matrix(rows, cols).rank()


def rational_inverse(rows: Sequence[Sequence[Number]]) -> List[List[Fraction]]:
    size = len(rows)
    if size == 0:
        return []
    inverse = _domain_matrix(rows, size).inv().to_Matrix()
    return [[Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(size)] for i in range(size)]


def rational_det(rows: Sequence[Sequence[Number]]) -> Fraction:
    if not rows:
        return Fraction(1)
    return _to_fraction(_domain_matrix(rows, len(rows)).det())


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    matrix = DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), len(rows)), ZZ)
    return int(matrix.det())


@dataclass(frozen=True)
class IntMatrix:
    """Dense matrix of Python ints (arbitrary precision); immutable."""
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise ValueError(f"Entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in row) for row in rows]
        if cols is None:
            if not rows:
                raise ValueError("Column count required for a matrix without rows")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int = None) -> "IntMatrix":
        if not columns:
            return cls.from_rows([[] for _ in range(rows or 0)], 0)
        return cls.from_rows(list(zip(*columns)))

    @classmethod
    def identity(cls, size: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(size)] for i in range(size)], size)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls.from_rows([[0] * cols for _ in range(rows)], cols)

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_columns = other.columns()
        product = [[sum(a * b for a, b in zip(row, col)) for col in other_columns] for row in self.entries]
        return IntMatrix.from_rows(product, other.cols)

    def apply(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Matrix times column vector."""
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.entries)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("Determinant of a non-square matrix")
        return integer_det(self.entries)

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def to_sparse(self) -> "SparseMatrix":
        return SparseMatrix.from_dense(self.entries, self.cols)

    def to_json(self) -> dict:
        return self.to_sparse().to_json()

    @classmethod
    def from_json(cls, payload: dict) -> "IntMatrix":
        sparse = SparseMatrix.from_json(payload)
        return cls.from_rows(sparse.to_dense(), sparse.cols)


@dataclass
class SparseMatrix:
    """Sparse exact matrix keyed by (row, col); zero entries are never stored."""
    rows: int
    cols: int
    data: Dict[Tuple[int, int], Number] = field(default_factory=dict)

    def __post_init__(self):
        self.data = {key: value for key, value in self.data.items() if value != 0}

    @classmethod
    def from_dense(cls, rows: Iterable[Sequence[Number]], cols: int) -> "SparseMatrix":
        data = {}
        count = 0
        for i, row in enumerate(rows):
            count += 1
            for j, value in enumerate(row):
                if value:
                    data[(i, j)] = value
        return cls(count, cols, data)

    def get(self, i: int, j: int) -> Number:
        return self.data.get((i, j), 0)

    def add(self, i: int, j: int, value: Number):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"Entry ({i}, {j}) outside {self.rows}x{self.cols}")
        total = self.data.get((i, j), 0) + value
        if total:
            self.data[(i, j)] = total
        else:
            self.data.pop((i, j), None)

    def to_dense(self) -> List[List[Number]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.data.items():
            dense[i][j] = value
        return dense

    def column_entries(self, j: int) -> Dict[int, Number]:
        return {i: value for (i, jj), value in self.data.items() if jj == j}

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.data.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        by_row: Dict[int, List[Tuple[int, Number]]] = {}
        for (k, j), value in other.data.items():
            by_row.setdefault(k, []).append((j, value))
        product = SparseMatrix(self.rows, other.cols)
        for (i, k), left in self.data.items():
            for j, right in by_row.get(k, ()):
                product.add(i, j, left * right)
        return product

    def is_zero(self) -> bool:
        return not self.data

    def is_integral(self) -> bool:
        return all(Fraction(v).denominator == 1 for v in self.data.values())

    def to_int_matrix(self) -> IntMatrix:
        if not self.is_integral():
            raise ValueError("Matrix has non-integral entries")
        return IntMatrix.from_rows([[int(x) for x in row] for row in self.to_dense()], self.cols)

    def rank(self) -> int:
        """Rank over Q."""
        return rational_rank(self.to_dense(), self.cols)

    def to_json(self) -> dict:
        entries = [[i, j, format_number(value)] for (i, j), value in sorted(self.data.items())]
        return {"rows": self.rows, "cols": self.cols, "entries": entries}

    @classmethod
    def from_json(cls, payload: dict) -> "SparseMatrix":
        data = {(int(i), int(j)): parse_number(text) for i, j, text in payload["entries"]}
        return cls(int(payload["rows"]), int(payload["cols"]), data)
