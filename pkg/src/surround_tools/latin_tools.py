from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import FieldError, LatinSquareError

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

# region finite fields

# q -> (p, e, coefficients of the monic irreducible polynomial, lowest degree first)
IRREDUCIBLE = {
    2: (2, 1, (0, 1)),
    3: (3, 1, (0, 1)),
    4: (2, 2, (1, 1, 1)),           # x^2 + x + 1
    5: (5, 1, (0, 1)),
    7: (7, 1, (0, 1)),
    8: (2, 3, (1, 1, 0, 1)),        # x^3 + x + 1
    9: (3, 2, (1, 0, 1)),           # x^2 + 1
    11: (11, 1, (0, 1)),
    13: (13, 1, (0, 1)),
    16: (2, 4, (1, 1, 0, 0, 1)),    # x^4 + x + 1
    25: (5, 2, (2, 0, 1)),          # x^2 + 2
    27: (3, 3, (1, 2, 0, 1)),       # x^3 + 2x + 1
}
SUPPORTED_ORDERS = tuple(sorted(IRREDUCIBLE))


@dataclass(frozen=True, eq=False)
class FieldTable:
    """
    GF(q) with q = p^e. Element ``x`` encodes the polynomial whose i-th coefficient is the i-th
    base-p digit of ``x``; 0 and 1 are the additive and multiplicative identities.
    """
    p: int
    e: int
    poly: Tuple[int, ...]
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.e


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _is_prime_power(n: int) -> bool:
    for p in range(2, n + 1):
        if n % p == 0:
            if not _is_prime(p):
                return False
            while n % p == 0:
                n //= p
            return n == 1
    return False


def _poly_mod(a: List[int], b: Sequence[int], p: int) -> List[int]:
    # remainder of a by monic b over GF(p), coefficients lowest degree first
    a = list(a)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return [x % p for x in a[:db]] if len(a) >= db else [x % p for x in a]


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    # brute force: no monic divisor of degree 1..deg/2
    degree = len(poly) - 1
    for d in range(1, degree // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_mod(list(poly), divisor, p)):
                return False
    return True


def _digits(x: int, p: int, e: int) -> List[int]:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def _number(digits: Sequence[int], p: int) -> int:
    return sum(d * p ** i for i, d in enumerate(digits))


def verify_field_axioms(f: FieldTable) -> None:
    """
    Exhaustively checks the field axioms on the tables.

    :raises FieldError: Naming the first violated axiom.
    """
    q = f.q
    a, b, c = np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing='ij')
    add, mul = f.add, f.mul
    checks = {
        'additive commutativity': np.array_equal(add, add.T),
        'multiplicative commutativity': np.array_equal(mul, mul.T),
        'additive associativity': np.array_equal(add[add[a, b], c], add[a, add[b, c]]),
        'multiplicative associativity': np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]),
        'distributivity': np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]]),
        'additive identity': np.array_equal(add[0], np.arange(q)),
        'multiplicative identity': np.array_equal(mul[1], np.arange(q)),
        'additive inverses': bool(np.all((add == 0).sum(axis=1) == 1)),
        'multiplicative inverses': bool(np.all((mul[1:, 1:] == 1).sum(axis=1) == 1)),
    }
    for name, ok in checks.items():
        if not ok:
            raise FieldError(f'GF({q}) tables violate {name}')


def build_field(q: int) -> FieldTable:
    """
    Builds and verifies the addition and multiplication tables of GF(q).

    :param q: A supported prime power.
    :return: The verified field.
    :raises FieldError: If ``q`` is not a prime power or is not in the built-in table.

    >>> f = build_field(4)
    >>> int(f.mul[2, 2])  # x * x = x + 1
    3
    """
    if q not in IRREDUCIBLE:
        reason = 'not a prime power' if not _is_prime_power(q) else 'unsupported order'
        raise FieldError(f'GF({q}): {reason}; supported orders are {", ".join(map(str, SUPPORTED_ORDERS))}')
    p, e, poly = IRREDUCIBLE[q]
    if e > 1 and not _is_irreducible(poly, p):
        raise FieldError(f'built-in polynomial {poly} for GF({q}) is reducible')

    elements = [_digits(x, p, e) for x in range(q)]
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for x, y in product(range(q), repeat=2):
        dx, dy = elements[x], elements[y]
        add[x, y] = _number([(u + v) % p for u, v in zip(dx, dy)], p)
        prod = [0] * (2 * e - 1)
        for i, u in enumerate(dx):
            for j, v in enumerate(dy):
                prod[i + j] += u * v
        mul[x, y] = _number(_poly_mod(prod, poly, p) if e > 1 else [prod[0] % p], p)

    f = FieldTable(p=p, e=e, poly=poly, add=add, mul=mul)
    verify_field_axioms(f)
    logger.debug(f'built GF({q}) over GF({p}) with polynomial {poly}')
    return f

# endregion

# region latin squares


@dataclass(frozen=True)
class LatinSquare:
    """k x k grid of symbols; validity is checked by :func:`is_latin`, not at construction."""
    grid: Tuple[Tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.grid)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> 'LatinSquare':
        return cls(grid=tuple(tuple(int(x) for x in row) for row in rows))

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.grid]


@dataclass(frozen=True)
class MolsFamily:
    order: int
    squares: Tuple[LatinSquare, ...]


def _check_shape(sq: LatinSquare) -> int:
    k = sq.order
    if k < 1 or any(len(row) != k for row in sq.grid):
        raise LatinSquareError(f'grid is not square: row lengths {[len(r) for r in sq.grid]}')
    if any(not 0 <= x < k for row in sq.grid for x in row):
        raise LatinSquareError(f'grid of order {k} has symbols outside 0..{k - 1}')
    return k


def is_latin(sq: LatinSquare) -> bool:
    """
    True iff every row and every column is a permutation of ``0..k-1``.

    :raises LatinSquareError: If the grid is not k x k with symbols in range.

    >>> is_latin(LatinSquare.from_rows([[0, 1], [0, 1]]))
    False
    """
    k = _check_shape(sq)
    arr = np.array(sq.grid)
    full = np.arange(k)
    rows_ok = all(np.array_equal(np.sort(arr[i]), full) for i in range(k))
    cols_ok = all(np.array_equal(np.sort(arr[:, j]), full) for j in range(k))
    return rows_ok and cols_ok


def juxtapose(a: LatinSquare, b: LatinSquare) -> List[List[Tuple[int, int]]]:
    """
    Cellwise pairing of two squares of equal order.

    :raises LatinSquareError: On order mismatch.
    """
    if a.order != b.order:
        raise LatinSquareError(f'order mismatch: {a.order} and {b.order}')
    return [[(a.grid[i][j], b.grid[i][j]) for j in range(a.order)] for i in range(a.order)]


def are_orthogonal(a: LatinSquare, b: LatinSquare) -> bool:
    """True iff the juxtaposition holds k^2 distinct ordered pairs."""
    cells = juxtapose(a, b)
    return len({pair for row in cells for pair in row}) == a.order ** 2


def generate_mols(k: int) -> MolsFamily:
    """
    k-1 mutually orthogonal Latin squares ``L_s[i][j] = s*i + j`` over GF(k), one per nonzero ``s``.

    :raises FieldError: If ``k`` is not a supported prime power.

    >>> generate_mols(2).squares[0].to_list()
    [[0, 1], [1, 0]]
    """
    if k < 2:
        raise FieldError(f'MOLS need order at least 2, got {k}')
    f = build_field(k)
    i = np.arange(k)[:, None]
    j = np.arange(k)[None, :]
    squares = tuple(LatinSquare.from_rows(f.add[f.mul[s, i], j].tolist()) for s in range(1, k))
    return MolsFamily(order=k, squares=squares)


def format_square(sq: LatinSquare) -> str:
    width = len(str(sq.order - 1))
    return '\n'.join(' '.join(str(x).rjust(width) for x in row) for row in sq.grid)


def format_juxtaposition(a: LatinSquare, b: LatinSquare) -> str:
    return '\n'.join(' '.join(f'({x},{y})' for x, y in row) for row in juxtapose(a, b))


def square_parts(sq: LatinSquare) -> Dict[int, List[Tuple[int, int]]]:
    """Cells holding each symbol, row by row."""
    parts: Dict[int, List[Tuple[int, int]]] = {n: [] for n in range(sq.order)}
    for r, row in enumerate(sq.grid):
        for c, x in enumerate(row):
            parts[x].append((r, c))
    return parts

# endregion
