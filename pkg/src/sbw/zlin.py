"""Exact linear algebra over the integers.

Hermite and Smith normal forms with accumulated unimodular transforms,
integer kernels, integer linear solving, and canonical presentations of
finitely generated abelian groups.  All arithmetic uses Python's
arbitrary-precision integers; nothing here is ever floating point.

Conventions
-----------
* ``hermite_normal_form`` is row-style: ``U @ M = H`` with ``H`` in row
  echelon form, pivots positive, and entries above each pivot reduced
  into ``[0, pivot)``.  This makes ``H`` a unique canonical form, so
  subgroups of Z^n represented by row spans can be compared directly.
* ``cokernel`` interprets the columns of ``M`` as relations inside
  ``Z^rows``, i.e. it presents ``Z^rows / colspan(M)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _gcd_transform(a: int, b: int) -> tuple[int, int, int, int, int]:
    """Coefficients (g, s, t, p, q) of a determinant-one 2x2 transform.

    Rows (r1, r2) carrying leading entries (a, b) map to
    (s*r1 + t*r2, -q*r1 + p*r2) with new leading entries (g, 0).
    When a divides b this is a plain shear (t = 0), which keeps
    elimination loops from re-dirtying already clean rows.
    """
    if a != 0 and b % a == 0:
        return a, 1, 0, 1, b // a
    g, s, t = xgcd(a, b)
    return g, s, t, a // g, b // g


class IntMatrix:
    """A dense integer matrix stored as a list of row lists."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data=None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [[0] * cols for _ in range(rows)]
        else:
            data = [list(r) for r in data]
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError("data shape does not match (rows, cols)")
            self.data = data

    @classmethod
    def from_rows(cls, rows_data, cols: int | None = None) -> "IntMatrix":
        rows_data = [list(r) for r in rows_data]
        if rows_data:
            cols = len(rows_data[0])
        elif cols is None:
            cols = 0
        return cls(len(rows_data), cols, rows_data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.data[i][i] = 1
        return m

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, self.data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         [[self.data[i][j] for i in range(self.rows)]
                          for j in range(self.cols)])

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matmul")
        out = IntMatrix(self.rows, other.cols)
        for i in range(self.rows):
            row = self.data[i]
            orow = out.data[i]
            for k, a in enumerate(row):
                if a:
                    brow = other.data[k]
                    for j in range(other.cols):
                        orow[j] += a * brow[j]
        return out

    def matvec(self, v) -> list[int]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum(a * b for a, b in zip(row, v)) for row in self.data]

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.data)

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {self.data})"


@dataclass
class AbGroupPresentation:
    """Canonical form of a finitely generated abelian group.

    ``rank`` free generators plus cyclic factors of orders ``torsion``
    (each >= 2, forming a divisibility chain d_1 | d_2 | ...).
    ``basis_change`` is the unimodular transform from the raw generators
    of the ambient free module to the canonical generators.
    """

    rank: int
    torsion: list[int] = field(default_factory=list)
    basis_change: IntMatrix | None = None

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return (self.rank, tuple(self.torsion))

    def describe(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def hermite_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular, ``U @ M = H``, ``H`` in row
    echelon form with positive pivots and the entries above each pivot
    reduced into ``[0, pivot)``.  Empty matrices pass through.
    """
    A = M.copy()
    m, n = A.rows, A.cols
    U = IntMatrix.identity(m)
    a, u = A.data, U.data
    r = 0
    for j in range(n):
        if r >= m:
            break
        pivot = next((i for i in range(r, m) if a[i][j]), None)
        if pivot is None:
            continue
        if pivot != r:
            a[r], a[pivot] = a[pivot], a[r]
            u[r], u[pivot] = u[pivot], u[r]
        for i in range(r + 1, m):
            if not a[i][j]:
                continue
            _, s, t, p, q = _gcd_transform(a[r][j], a[i][j])
            # 2x2 unimodular transform on rows r and i (determinant +1).
            a[r], a[i] = ([s * x + t * y for x, y in zip(a[r], a[i])],
                          [-q * x + p * y for x, y in zip(a[r], a[i])])
            u[r], u[i] = ([s * x + t * y for x, y in zip(u[r], u[i])],
                          [-q * x + p * y for x, y in zip(u[r], u[i])])
        if a[r][j] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][j] // a[r][j]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return A, U


def hnf_rows(rows: list[list[int]], cols: int) -> list[list[int]]:
    """HNF of the lattice spanned by ``rows``, with zero rows dropped."""
    if not rows:
        return []
    H, _ = hermite_normal_form(IntMatrix.from_rows(rows, cols))
    return [r for r in H.data if any(r)]


def reduce_mod_rows(v: list[int], hnf: list[list[int]]) -> list[int]:
    """Canonical representative of ``v`` modulo the row span ``hnf``.

    ``hnf`` must be in row-style Hermite form (as from :func:`hnf_rows`).
    """
    v = list(v)
    for row in hnf:
        j = next(k for k, x in enumerate(row) if x)
        q = v[j] // row[j]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return v


def _apply_row_op(op, a, u, uinv):
    """Apply an elementary row op to ``a`` and ``u``; undo it on ``uinv`` columns."""
    kind = op[0]
    if kind == "swap":
        _, i, j = op
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]
    elif kind == "neg":
        _, i = op
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]
    else:  # ("comb", i, j, s, t, p, q): rows (i,j) <- (s*i+t*j, -q*i+p*j), det +1
        _, i, j, s, t, p, q = op
        a[i], a[j] = ([s * x + t * y for x, y in zip(a[i], a[j])],
                      [-q * x + p * y for x, y in zip(a[i], a[j])])
        u[i], u[j] = ([s * x + t * y for x, y in zip(u[i], u[j])],
                      [-q * x + p * y for x, y in zip(u[i], u[j])])
        # inverse of [[s, t], [-q, p]] is [[p, -t], [q, s]]; applied on columns.
        for row in uinv:
            row[i], row[j] = p * row[i] + q * row[j], -t * row[i] + s * row[j]


def _smith_with_transforms(M: IntMatrix):
    """Internal SNF returning (U, D, V, Uinv, Vinv) with U M V = D."""
    A = M.copy()
    m, n = A.rows, A.cols
    U, V = IntMatrix.identity(m), IntMatrix.identity(n)
    Uinv, Vinv = IntMatrix.identity(m), IntMatrix.identity(n)

    def row_op(op):
        _apply_row_op(op, A.data, U.data, Uinv.data)

    def col_swap(i, j):
        for row in A.data:
            row[i], row[j] = row[j], row[i]
        for row in V.data:
            row[i], row[j] = row[j], row[i]
        Vinv.data[i], Vinv.data[j] = Vinv.data[j], Vinv.data[i]

    def col_neg(i):
        for row in A.data:
            row[i] = -row[i]
        for row in V.data:
            row[i] = -row[i]
        Vinv.data[i] = [-x for x in Vinv.data[i]]

    def col_comb(i, j, s, t, p, q):
        # cols (i,j) <- (s*i+t*j, -q*i+p*j); inverse applied to Vinv rows.
        for row in A.data:
            row[i], row[j] = s * row[i] + t * row[j], -q * row[i] + p * row[j]
        for row in V.data:
            row[i], row[j] = s * row[i] + t * row[j], -q * row[i] + p * row[j]
        ri, rj = Vinv.data[i], Vinv.data[j]
        Vinv.data[i] = [p * x + q * y for x, y in zip(ri, rj)]
        Vinv.data[j] = [-t * x + s * y for x, y in zip(ri, rj)]

    def clear_position(k):
        """Drive the submatrix at (k, k) to have its only nonzero at (k, k)."""
        while True:
            # Clear column k below row k.
            for i in range(k + 1, m):
                if A.data[i][k]:
                    _, s, t, p, q = _gcd_transform(A.data[k][k], A.data[i][k])
                    row_op(("comb", k, i, s, t, p, q))
            # Clear row k right of column k.
            dirty = False
            for j in range(k + 1, n):
                if A.data[k][j]:
                    _, s, t, p, q = _gcd_transform(A.data[k][k], A.data[k][j])
                    col_comb(k, j, s, t, p, q)
                    dirty = True
            if not dirty and all(A.data[i][k] == 0 for i in range(k + 1, m)):
                return

    r = min(m, n)
    for k in range(r):
        # Find a nonzero entry in the trailing submatrix.
        found = None
        for i in range(k, m):
            for j in range(k, n):
                if A.data[i][j]:
                    found = (i, j)
                    break
            if found:
                break
        if not found:
            break
        i, j = found
        if i != k:
            row_op(("swap", k, i))
        if j != k:
            col_swap(k, j)
        clear_position(k)
        if A.data[k][k] < 0:
            row_op(("neg", k))

    # Enforce the divisibility chain d_1 | d_2 | ... among nonzero entries.
    while True:
        violation = None
        for i in range(r):
            di = A.data[i][i]
            for j in range(i + 1, r):
                dj = A.data[j][j]
                if di == 0 and dj != 0:
                    violation = (i, j)
                    break
                if di != 0 and dj % di != 0:
                    violation = (i, j)
                    break
            if violation:
                break
        if not violation:
            break
        i, j = violation
        if A.data[i][i] == 0:
            row_op(("swap", i, j))
            col_swap(i, j)
            continue
        # Fold d_j into column i and re-diagonalize from i.
        col_comb(i, j, 1, 1, 1, 0)  # col_i += col_j
        clear_position(i)
        if A.data[i][i] < 0:
            row_op(("neg", i))
        for k2 in range(i + 1, r):
            if A.data[k2][k2] < 0:
                row_op(("neg", k2))

    return U, A, V, Uinv, Vinv


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns ``(U, D, V)`` with ``U @ M @ V = D``.

    ``D`` is diagonal with nonnegative entries satisfying d_1 | d_2 | ...;
    ``U`` and ``V`` are unimodular.
    """
    U, D, V, _, _ = _smith_with_transforms(M)
    return U, D, V


def cokernel(M: IntMatrix) -> AbGroupPresentation:
    """Present ``Z^rows / colspan(M)`` in canonical invariant-factor form."""
    U, D, _, _, _ = _smith_with_transforms(M)
    m = M.rows
    diag = [D.data[i][i] for i in range(min(m, M.cols))]
    nonzero = [d for d in diag if d != 0]
    return AbGroupPresentation(
        rank=m - len(nonzero),
        torsion=[d for d in nonzero if d >= 2],
        basis_change=U,
    )


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """A Z-basis for ``{x : M x = 0}``, returned as matrix columns."""
    _, D, V, _, _ = _smith_with_transforms(M)
    m, n = M.rows, M.cols
    free = [j for j in range(n) if j >= m or D.data[j][j] == 0]
    return IntMatrix(n, len(free),
                     [[V.data[i][j] for j in free] for i in range(n)])


def left_kernel_rows(rows: list[list[int]], cols: int) -> list[list[int]]:
    """Rows spanning ``{u : u @ A = 0}`` for ``A`` given by ``rows``."""
    A = IntMatrix.from_rows(rows, cols)
    K = kernel_basis(A.transpose())
    return [[K.data[i][j] for i in range(K.rows)] for j in range(K.cols)]


def solve_integer(M: IntMatrix, b: list[int]) -> list[int] | None:
    """Solve ``M x = b`` over the integers; ``None`` when no solution exists."""
    if len(b) != M.rows:
        raise ValueError("right-hand side length mismatch")
    U, D, V, _, _ = _smith_with_transforms(M)
    c = U.matvec(b)
    m, n = M.rows, M.cols
    y = [0] * n
    for i in range(m):
        d = D.data[i][i] if i < n else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return V.matvec(y)


def determinant(M: IntMatrix) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = [row[:] for row in M.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k]), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
