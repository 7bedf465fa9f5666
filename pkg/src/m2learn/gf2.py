"""Linear algebra over GF(2).

Vectors and dense matrix rows are packed into Python ints: entry ``j``
(0-based) of a row lives in bit ``j``.  A sparse matrix keeps, for each row,
the sorted 1-based column indices holding a 1, so the dense row
``0 1 0 0 0 1`` becomes ``(2, 6)``.

The public operations (:func:`mat_mul`, :func:`dot`, :func:`rank`,
:func:`solve_linear`) accept either matrix representation and always agree.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterable, Sequence, Union

import numpy as np

# Rows with fewer ones than this fraction of their width are stored sparsely
# by :func:`matrix`.
SPARSE_DENSITY_THRESHOLD = 0.25


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def _check_bits(values: Iterable[int], where: str) -> list[int]:
    out = []
    for j, b in enumerate(values):
        if b not in (0, 1):
            raise ValueError(f"{where}: entry {j + 1} is {b!r}, expected 0 or 1")
        out.append(int(b))
    return out


def _pack(bits: Sequence[int]) -> int:
    word = 0
    for j, b in enumerate(bits):
        if b:
            word |= 1 << j
    return word


def _unpack(word: int, length: int) -> list[int]:
    return [(word >> j) & 1 for j in range(length)]


def _iter_ones(word: int):
    while word:
        low = word & -word
        yield low.bit_length() - 1
        word ^= low


def parity(word: int) -> int:
    return bin(word).count("1") & 1


class Gf2Vector:
    """Immutable bit vector of fixed length."""

    __slots__ = ("length", "bits")

    def __init__(self, length: int, bits: int = 0):
        if length < 1:
            raise ValueError("vector length must be >= 1")
        if bits < 0 or bits >> length:
            raise ValueError(f"packed bits do not fit in length {length}")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("Gf2Vector is immutable")

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "Gf2Vector":
        return cls(len(values), _pack(_check_bits(values, "vector")))

    @classmethod
    def zeros(cls, length: int) -> "Gf2Vector":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> "Gf2Vector":
        """Standard basis vector with a 1 at 0-based ``index``."""
        if not 0 <= index < length:
            raise IndexError(index)
        return cls(length, 1 << index)

    def to_list(self) -> list[int]:
        return _unpack(self.bits, self.length)

    def to_sparse(self) -> tuple[int, ...]:
        return tuple(j + 1 for j in _iter_ones(self.bits))

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        if j < 0:
            j += self.length
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __iter__(self):
        return iter(self.to_list())

    def __xor__(self, other: "Gf2Vector") -> "Gf2Vector":
        if self.length != other.length:
            raise DimensionError(f"length {self.length} vs {other.length}")
        return Gf2Vector(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def is_zero(self) -> bool:
        return self.bits == 0

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Vector):
            return NotImplemented
        return self.length == other.length and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.length, self.bits))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())

    def __repr__(self) -> str:
        return f"Gf2Vector({self})"


class Gf2Matrix:
    """Dense matrix; each row is a packed int."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[int]):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative shape")
        rows = tuple(rows)
        if len(rows) != nrows:
            raise DimensionError(f"expected {nrows} rows, got {len(rows)}")
        for r in rows:
            if r < 0 or r >> ncols:
                raise ValueError(f"row does not fit in {ncols} columns")
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Gf2Matrix is immutable")

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence[int]], ncols: int | None = None) -> "Gf2Matrix":
        if ncols is None:
            ncols = len(lists[0]) if lists else 0
        rows = []
        for i, row in enumerate(lists):
            if len(row) != ncols:
                raise DimensionError(f"row {i + 1} has {len(row)} entries, expected {ncols}")
            rows.append(_pack(_check_bits(row, f"row {i + 1}")))
        return cls(len(lists), ncols, rows)

    @classmethod
    def from_array(cls, array) -> "Gf2Matrix":
        arr = np.asarray(array)
        if arr.ndim != 2:
            raise DimensionError("expected a 2-d array")
        return cls.from_lists(arr.astype(int).tolist(), ncols=arr.shape[1])

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Gf2Matrix":
        return cls(nrows, ncols, [0] * nrows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def to_lists(self) -> list[list[int]]:
        return [_unpack(r, self.ncols) for r in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8).reshape(self.nrows, self.ncols)

    def to_dense(self) -> "Gf2Matrix":
        return self

    def to_sparse(self) -> "SparseGf2Matrix":
        return SparseGf2Matrix(
            self.ncols, [tuple(j + 1 for j in _iter_ones(r)) for r in self.rows]
        )

    def row(self, i: int) -> Gf2Vector:
        return Gf2Vector(self.ncols, self.rows[i])

    def column(self, j: int) -> Gf2Vector:
        return Gf2Vector(self.nrows, _pack([(r >> j) & 1 for r in self.rows]))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return (self.rows[i] >> j) & 1

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self.ncols, self.nrows, transpose_rows(self.rows, self.ncols))

    @property
    def T(self) -> "Gf2Matrix":
        return self.transpose()

    def density(self) -> float:
        cells = self.nrows * self.ncols
        return sum(bin(r).count("1") for r in self.rows) / cells if cells else 0.0

    def __matmul__(self, other):
        if isinstance(other, Gf2Vector):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def __rmatmul__(self, other):
        if isinstance(other, Gf2Vector):
            return vec_mat(other, self)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Gf2Matrix, SparseGf2Matrix)):
            return NotImplemented
        other = other.to_dense()
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.rows))

    def __str__(self) -> str:
        return "\n".join(" ".join(map(str, row)) for row in self.to_lists())

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.nrows}x{self.ncols})"


class SparseGf2Matrix:
    """Row-sparse matrix: row ``i`` is the tuple of 1-based columns holding a 1."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, ncols: int, rows: Sequence[Sequence[int]]):
        checked = []
        for i, cols in enumerate(rows):
            cols = tuple(cols)
            for a, b in zip(cols, cols[1:]):
                if a >= b:
                    raise ValueError(f"row {i + 1}: column indices must strictly increase")
            if cols and (cols[0] < 1 or cols[-1] > ncols):
                raise ValueError(f"row {i + 1}: column index outside [1, {ncols}]")
            checked.append(cols)
        object.__setattr__(self, "nrows", len(checked))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", tuple(checked))

    def __setattr__(self, name, value):
        raise AttributeError("SparseGf2Matrix is immutable")

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def to_dense(self) -> Gf2Matrix:
        return Gf2Matrix(
            self.nrows, self.ncols, [sum(1 << (c - 1) for c in cols) for cols in self.rows]
        )

    def to_sparse(self) -> "SparseGf2Matrix":
        return self

    def to_lists(self) -> list[list[int]]:
        return self.to_dense().to_lists()

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        cols = self.rows[i]
        k = bisect_left(cols, j + 1)
        return int(k < len(cols) and cols[k] == j + 1)

    def transpose(self) -> "SparseGf2Matrix":
        out: list[list[int]] = [[] for _ in range(self.ncols)]
        for i, cols in enumerate(self.rows, start=1):
            for c in cols:
                out[c - 1].append(i)
        return SparseGf2Matrix(self.nrows, out)

    def density(self) -> float:
        cells = self.nrows * self.ncols
        return sum(len(c) for c in self.rows) / cells if cells else 0.0

    def __matmul__(self, other):
        if isinstance(other, Gf2Vector):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Gf2Matrix, SparseGf2Matrix)):
            return NotImplemented
        return self.to_dense() == other

    def __hash__(self) -> int:
        return hash(self.to_dense())

    def __repr__(self) -> str:
        return f"SparseGf2Matrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.rows))})"


AnyMatrix = Union[Gf2Matrix, SparseGf2Matrix]


def matrix(lists: Sequence[Sequence[int]], ncols: int | None = None) -> AnyMatrix:
    """Build a matrix, choosing the sparse form for low-density input."""
    dense = Gf2Matrix.from_lists(lists, ncols)
    if dense.nrows and dense.ncols and dense.density() < SPARSE_DENSITY_THRESHOLD:
        return dense.to_sparse()
    return dense


def transpose_rows(rows: Sequence[int], ncols: int) -> list[int]:
    out = [0] * ncols
    for i, r in enumerate(rows):
        bit = 1 << i
        for j in _iter_ones(r):
            out[j] |= bit
    return out


def xor_rows(word: int, rows: Sequence[int]) -> int:
    """Row vector ``word`` times the matrix whose packed rows are ``rows``."""
    acc = 0
    while word:
        low = word & -word
        acc ^= rows[low.bit_length() - 1]
        word ^= low
    return acc


# -- sparse kernels --------------------------------------------------------

def _sparse_xor(a: Iterable[int], b: Iterable[int]) -> set[int]:
    return set(a).symmetric_difference(b)


def _sparse_vec_mat(cols: Iterable[int], m: SparseGf2Matrix) -> tuple[int, ...]:
    acc: set[int] = set()
    for k in cols:
        acc.symmetric_difference_update(m.rows[k - 1])
    return tuple(sorted(acc))


def _sparse_eliminate(rows: list[set[int]], tags: list[int] | None = None):
    """Gauss-Jordan on index sets; returns (reduced rows, pivot column per row).

    ``tags`` is an optional parallel list of int bit-tags XORed along with the
    rows (used for augmented right-hand sides).
    """
    rows = [set(r) for r in rows]
    tags = list(tags) if tags is not None else [0] * len(rows)
    pivots: list[int] = []
    done = 0
    for col in sorted(set().union(*rows)) if rows else []:
        src = next((i for i in range(done, len(rows)) if col in rows[i]), None)
        if src is None:
            continue
        rows[done], rows[src] = rows[src], rows[done]
        tags[done], tags[src] = tags[src], tags[done]
        for i in range(len(rows)):
            if i != done and col in rows[i]:
                rows[i].symmetric_difference_update(rows[done])
                tags[i] ^= tags[done]
        pivots.append(col)
        done += 1
    return rows, tags, pivots


# -- operations ------------------------------------------------------------

def mat_mul(a: AnyMatrix, b: AnyMatrix) -> AnyMatrix:
    """Product over GF(2).  Two sparse operands give a sparse result."""
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.nrows}x{a.ncols} by {b.nrows}x{b.ncols}")
    if isinstance(a, SparseGf2Matrix) and isinstance(b, SparseGf2Matrix):
        return SparseGf2Matrix(b.ncols, [_sparse_vec_mat(r, b) for r in a.rows])
    a, b = a.to_dense(), b.to_dense()
    return Gf2Matrix(a.nrows, b.ncols, [xor_rows(r, b.rows) for r in a.rows])


def vec_mat(v: Gf2Vector, m: AnyMatrix) -> Gf2Vector:
    """Row vector times matrix."""
    if v.length != m.nrows:
        raise DimensionError(f"vector of length {v.length} times {m.nrows}x{m.ncols} matrix")
    if isinstance(m, SparseGf2Matrix):
        cols = _sparse_vec_mat(v.to_sparse(), m)
        return Gf2Vector(m.ncols, sum(1 << (c - 1) for c in cols))
    return Gf2Vector(m.ncols, xor_rows(v.bits, m.rows))


def mat_vec(m: AnyMatrix, v: Gf2Vector) -> Gf2Vector:
    """Matrix times column vector."""
    if v.length != m.ncols:
        raise DimensionError(f"{m.nrows}x{m.ncols} matrix times vector of length {v.length}")
    if isinstance(m, SparseGf2Matrix):
        ones = set(v.to_sparse())
        bits = [len(ones.intersection(cols)) & 1 for cols in m.rows]
    else:
        bits = [parity(r & v.bits) for r in m.rows]
    return Gf2Vector(m.nrows, _pack(bits))


def dot(a: Union[Gf2Vector, Sequence[int]], b: Union[Gf2Vector, Sequence[int]]) -> int:
    """Inner product.  Plain sequences are read as 1-based sparse rows."""
    if isinstance(a, Gf2Vector) and isinstance(b, Gf2Vector):
        if a.length != b.length:
            raise DimensionError(f"length {a.length} vs {b.length}")
        return parity(a.bits & b.bits)
    a_cols = a.to_sparse() if isinstance(a, Gf2Vector) else a
    b_cols = b.to_sparse() if isinstance(b, Gf2Vector) else b
    return len(set(a_cols).intersection(b_cols)) & 1


def rank(m: AnyMatrix) -> int:
    if isinstance(m, SparseGf2Matrix):
        return len(_sparse_eliminate(list(m.rows))[2])
    return len(_echelon(list(m.rows))[1])


def is_invertible(m: AnyMatrix) -> bool:
    return m.nrows == m.ncols and rank(m) == m.nrows


def _echelon(rows: list[int], tags: list[int] | None = None):
    """Dense Gauss-Jordan, leftmost pivot first.

    Returns (reduced rows, pivot columns, tags) where tags were XORed in step
    with the rows.
    """
    rows = list(rows)
    tags = list(tags) if tags is not None else [0] * len(rows)
    pivots: list[int] = []
    done = 0
    ncols = max((r.bit_length() for r in rows), default=0)
    for col in range(ncols):
        bit = 1 << col
        src = next((i for i in range(done, len(rows)) if rows[i] & bit), None)
        if src is None:
            continue
        rows[done], rows[src] = rows[src], rows[done]
        tags[done], tags[src] = tags[src], tags[done]
        prow, ptag = rows[done], tags[done]
        for i in range(len(rows)):
            if i != done and rows[i] & bit:
                rows[i] ^= prow
                tags[i] ^= ptag
        pivots.append(col)
        done += 1
        if done == len(rows):
            break
    return rows, pivots, tags


def solve_linear(m: AnyMatrix, rhs: Gf2Vector) -> Gf2Vector | None:
    """Solve ``m @ x == rhs``; ``None`` when the system is inconsistent.

    Free variables are set to 0, so the answer is the same whichever
    representation ``m`` uses.
    """
    if m.nrows != rhs.length:
        raise DimensionError(f"{m.nrows} equations but right-hand side of length {rhs.length}")
    tags = [(rhs.bits >> i) & 1 for i in range(m.nrows)]
    if isinstance(m, SparseGf2Matrix):
        rows, tags, pivots = _sparse_eliminate(list(m.rows), tags)
        pivots = [c - 1 for c in pivots]
        consistent = all(t == 0 for r, t in zip(rows, tags) if not r)
    else:
        rows, pivots, tags = _echelon(list(m.rows), tags)
        consistent = all(t == 0 for r, t in zip(rows, tags) if not r)
    if not consistent:
        return None
    x = 0
    for k, col in enumerate(pivots):
        if tags[k]:
            x |= 1 << col
    return Gf2Vector(m.ncols, x) if m.ncols else None


def inverse_rows(rows: Sequence[int], n: int) -> list[int] | None:
    """Inverse of a square packed-row matrix, or ``None`` if singular."""
    reduced, pivots, tags = _echelon(list(rows), [1 << i for i in range(n)])
    if len(pivots) != n:
        return None
    # reduced row k has its single pivot at column pivots[k] == k after full
    # reduction of a nonsingular matrix
    return tags


def inverse(m: AnyMatrix) -> Gf2Matrix | None:
    m = m.to_dense()
    if m.nrows != m.ncols:
        raise DimensionError("only square matrices have inverses")
    inv = inverse_rows(m.rows, m.nrows)
    return None if inv is None else Gf2Matrix(m.nrows, m.nrows, inv)


class Gf2Basis:
    """Incrementally grown set of linearly independent vectors.

    Alongside the vectors it keeps a reduced echelon copy (ordered by pivot)
    where every echelon row remembers which original vectors it combines, so a
    dependent vector can be expressed in the original basis.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("ambient dimension must be >= 1")
        self.dim = dim
        self.vectors: list[int] = []
        self._pivots: list[int] = []          # sorted pivot bit positions
        self._rows: dict[int, tuple[int, int]] = {}  # pivot -> (row, combination)

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def basis_vectors(self) -> list[Gf2Vector]:
        return [Gf2Vector(self.dim, v) for v in self.vectors]

    @property
    def echelon(self) -> list[tuple[int, Gf2Vector]]:
        """(pivot column, reduced row) pairs in increasing pivot order."""
        return [(p, Gf2Vector(self.dim, self._rows[p][0])) for p in self._pivots]

    def reduce(self, word: int) -> tuple[int, int]:
        """Reduce a packed vector; returns (remainder, combination used)."""
        combo = 0
        rows = self._rows
        while word:
            low = word & -word
            hit = rows.get(low.bit_length() - 1)
            if hit is None:
                break
            word ^= hit[0]
            combo ^= hit[1]
        return word, combo

    def try_extend_bits(self, word: int) -> tuple[bool, int]:
        """Packed form of :meth:`try_extend`; coordinates come back packed."""
        rem, combo = self.reduce(word)
        if rem == 0:
            return False, combo
        k = len(self.vectors)
        self.vectors.append(word)
        pivot = (rem & -rem).bit_length() - 1
        self._rows[pivot] = (rem, combo ^ (1 << k))
        self._pivots.insert(bisect_left(self._pivots, pivot), pivot)
        return True, 1 << k

    def try_extend(self, v: Gf2Vector) -> tuple[bool, Gf2Vector | None]:
        """Add ``v`` if it is outside the span.

        Returns ``(True, None)`` when the basis grew, otherwise ``(False,
        coords)`` with ``coords`` expressing ``v`` over the current basis.
        """
        if v.length != self.dim:
            raise DimensionError(f"vector of length {v.length} in ambient dimension {self.dim}")
        extended, combo = self.try_extend_bits(v.bits)
        if extended:
            return True, None
        return False, Gf2Vector(max(len(self.vectors), 1), combo)

    def coordinates(self, v: Gf2Vector) -> Gf2Vector | None:
        """Coordinates of ``v`` in the basis, or ``None`` if outside the span."""
        rem, combo = self.reduce(v.bits)
        if rem:
            return None
        return Gf2Vector(max(len(self.vectors), 1), combo)
