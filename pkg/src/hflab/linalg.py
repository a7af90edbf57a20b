"""Sparse exact linear algebra over Q(zeta_N).

Vectors are ``dict[int, CycloScalar]`` with zero entries omitted.  Matrices
are stored column-wise since almost every map here is produced as "image of
basis vector j".  Subspaces are kept in reduced row-echelon form with leading
coefficient 1, which makes subspace equality a comparison of row tuples.
"""

from __future__ import annotations

from .errors import NotAnAlgebra, ShapeError, TheoremViolation
from .scalars import CycloScalar


# -- vectors -----------------------------------------------------------------

def vec_add(u: dict, v: dict, c=None) -> dict:
    """Return u + c*v (c defaults to 1)."""
    out = dict(u)
    for k, x in v.items():
        if c is not None:
            x = c * x
        y = out.get(k)
        if y is None:
            out[k] = x
        else:
            y = y + x
            if y:
                out[k] = y
            else:
                del out[k]
    return out


def vec_iadd(out: dict, v: dict, c=None) -> None:
    for k, x in v.items():
        if c is not None:
            x = c * x
        y = out.get(k)
        if y is None:
            if x:
                out[k] = x
        else:
            y = y + x
            if y:
                out[k] = y
            else:
                del out[k]


def vec_scale(v: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_dot(u: dict, v: dict, zero):
    if len(u) > len(v):
        u, v = v, u
    acc = zero
    for k, x in u.items():
        y = v.get(k)
        if y is not None:
            acc = acc + x * y
    return acc


# -- echelon machinery --------------------------------------------------------

class _Echelon:
    """Incrementally maintained reduced row-echelon basis."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict[int, dict] = {}

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p in sorted(k for k in v if k in self.rows):
            c = v.get(p)
            if c:
                vec_iadd(v, self.rows[p], -c)
        return v

    def add(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        inv = v[p].inverse()
        v = {k: x * inv for k, x in v.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                vec_iadd(row, v, -c)
        self.rows[p] = v
        return True

    def sorted_rows(self) -> tuple:
        return tuple((p, self.rows[p]) for p in sorted(self.rows))


# -- matrices -----------------------------------------------------------------

class ExactMatrix:
    """Sparse column-stored matrix; ``cols[j]`` maps row index -> scalar."""

    __slots__ = ("nrows", "ncols", "cols", "conductor")

    def __init__(self, nrows: int, ncols: int, cols=None, conductor: int = 1):
        self.nrows = nrows
        self.ncols = ncols
        self.conductor = conductor
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise ShapeError(f"expected {ncols} columns, got {len(cols)}")
        self.cols = [{r: x for r, x in c.items() if x} for c in cols]

    @classmethod
    def identity(cls, n: int, conductor: int = 1) -> "ExactMatrix":
        one = CycloScalar.one(conductor)
        return cls(n, n, [{i: one} for i in range(n)], conductor)

    @classmethod
    def zeros(cls, m: int, n: int, conductor: int = 1) -> "ExactMatrix":
        return cls(m, n, None, conductor)

    @classmethod
    def from_dense(cls, rows, conductor: int = 1) -> "ExactMatrix":
        from .scalars import parse_scalar
        m = len(rows)
        n = len(rows[0]) if m else 0
        cols = [{} for _ in range(n)]
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ShapeError("ragged rows")
            for j, x in enumerate(row):
                x = parse_scalar(x, conductor) if not isinstance(x, CycloScalar) else x
                if x:
                    cols[j][i] = x
        return cls(m, n, cols, conductor)

    @classmethod
    def from_rows(cls, rows: list, ncols: int, conductor: int = 1) -> "ExactMatrix":
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, x in row.items():
                cols[j][i] = x
        return cls(len(rows), ncols, cols, conductor)

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.nrows, self.ncols, [dict(c) for c in self.cols], self.conductor)

    def __getitem__(self, ij):
        i, j = ij
        x = self.cols[j].get(i)
        return x if x is not None else CycloScalar.zero(self.conductor)

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for j, c in v.items():
            if j >= self.ncols:
                raise ShapeError(f"index {j} out of range for {self.ncols} columns")
            vec_iadd(out, self.cols[j], c)
        return out

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot compose {self.shape} with {other.shape}")
        return ExactMatrix(self.nrows, other.ncols,
                           [self.apply(c) for c in other.cols], self.conductor)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ncols, self.nrows, self.rows(), self.conductor)

    T = property(transpose)

    def rows(self) -> list:
        rows = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, x in c.items():
                rows[i][j] = x
        return rows

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        """Tensor product of maps; basis (i, j) flattens to i * dim2 + j."""
        m2, n2 = other.nrows, other.ncols
        cols = []
        for a in self.cols:
            for b in other.cols:
                col = {}
                for i, x in a.items():
                    base = i * m2
                    for j, y in b.items():
                        col[base + j] = x * y
                cols.append(col)
        return ExactMatrix(self.nrows * m2, self.ncols * n2, cols, self.conductor)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in sum")
        return ExactMatrix(self.nrows, self.ncols,
                           [vec_add(a, b) for a, b in zip(self.cols, other.cols)],
                           self.conductor)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in difference")
        minus = CycloScalar.rational(-1, self.conductor)
        return ExactMatrix(self.nrows, self.ncols,
                           [vec_add(a, b, minus) for a, b in zip(self.cols, other.cols)],
                           self.conductor)

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix(self.nrows, self.ncols, [vec_scale(a, c) for a in self.cols],
                           self.conductor)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.cols)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def to_dense(self) -> list:
        zero = CycloScalar.zero(self.conductor)
        out = [[zero] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, x in c.items():
                out[i][j] = x
        return out

    def rank(self) -> int:
        ech = _Echelon()
        # eliminate over the shorter side
        vecs = self.cols if self.ncols <= self.nrows else self.rows()
        for v in vecs:
            ech.add(v)
        return len(ech.rows)

    def image(self) -> "ExactSubspace":
        return ExactSubspace.span(self.cols, self.nrows, self.conductor)

    def kernel(self) -> "ExactSubspace":
        return kernel(self)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.ncols

    def inverse(self) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise ShapeError("inverse of a non-square matrix")
        n = self.ncols
        sol = solve(self, ExactMatrix.identity(n, self.conductor))
        if sol is None:
            raise ShapeError("matrix is singular")
        return sol

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


# -- subspaces ----------------------------------------------------------------

class ExactSubspace:
    """Subspace of k^ambient stored as its reduced row-echelon basis."""

    __slots__ = ("ambient", "rows", "conductor")

    def __init__(self, ambient: int, rows=(), conductor: int = 1):
        self.ambient = ambient
        self.rows = tuple(rows)  # ((pivot, dict), ...) sorted by pivot
        self.conductor = conductor

    @classmethod
    def span(cls, vectors, ambient: int, conductor: int = 1) -> "ExactSubspace":
        ech = _Echelon()
        for v in vectors:
            if v and max(v) >= ambient:
                raise ShapeError(f"vector index {max(v)} outside ambient dim {ambient}")
            ech.add(v)
        return cls(ambient, ech.sorted_rows(), conductor)

    @classmethod
    def zero(cls, ambient: int, conductor: int = 1) -> "ExactSubspace":
        return cls(ambient, (), conductor)

    @classmethod
    def full(cls, ambient: int, conductor: int = 1) -> "ExactSubspace":
        one = CycloScalar.one(conductor)
        return cls(ambient, tuple((i, {i: one}) for i in range(ambient)), conductor)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list:
        return [r for _, r in self.rows]

    def pivots(self) -> list:
        return [p for p, _ in self.rows]

    def is_zero(self) -> bool:
        return not self.rows

    def is_full(self) -> bool:
        return len(self.rows) == self.ambient

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p, row in self.rows:
            c = v.get(p)
            if c:
                vec_iadd(v, row, -c)
        return v

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def contains_subspace(self, other: "ExactSubspace") -> bool:
        return all(self.contains(r) for r in other.basis())

    def __eq__(self, other):
        if not isinstance(other, ExactSubspace):
            return NotImplemented
        return self.ambient == other.ambient and self.rows == other.rows

    __hash__ = None

    def __add__(self, other: "ExactSubspace") -> "ExactSubspace":
        if self.ambient != other.ambient:
            raise ShapeError("ambient dimensions differ")
        return ExactSubspace.span(self.basis() + other.basis(), self.ambient, self.conductor)

    def annihilator(self) -> "ExactSubspace":
        """Functionals (in dual coordinates) vanishing on the subspace."""
        return kernel(ExactMatrix.from_rows(self.basis(), self.ambient, self.conductor))

    def intersect(self, other: "ExactSubspace") -> "ExactSubspace":
        if self.ambient != other.ambient:
            raise ShapeError("ambient dimensions differ")
        return (self.annihilator() + other.annihilator()).annihilator()

    def embed(self, offset: int, ambient: int) -> "ExactSubspace":
        """Shift coordinates by ``offset`` into a larger ambient space."""
        rows = tuple((p + offset, {k + offset: x for k, x in r.items()})
                     for p, r in self.rows)
        return ExactSubspace(ambient, rows, self.conductor)

    def __repr__(self):
        return f"ExactSubspace(dim={self.dim}, ambient={self.ambient})"


def kernel(m: ExactMatrix) -> ExactSubspace:
    ech = _Echelon()
    for r in m.rows():
        ech.add(r)
    pivots = set(ech.rows)
    one = CycloScalar.one(m.conductor)
    basis = []
    for f in range(m.ncols):
        if f in pivots:
            continue
        v = {f: one}
        for p, row in ech.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    ker = ExactSubspace.span(basis, m.ncols, m.conductor)
    if len(ech.rows) + ker.dim != m.ncols:
        raise TheoremViolation("rank-nullity failed")
    return ker


def preimage(m: ExactMatrix, target: ExactSubspace) -> ExactSubspace:
    """{v : m v in target} as a canonical subspace of the domain."""
    if target.ambient != m.nrows:
        raise ShapeError(f"target lives in dim {target.ambient}, map has {m.nrows} rows")
    if target.is_full():
        return ExactSubspace.full(m.ncols, m.conductor)
    ann = target.annihilator().basis()
    mrows = m.rows()
    funcs = []
    for u in ann:
        f: dict = {}
        for r, c in u.items():
            vec_iadd(f, mrows[r], c)
        funcs.append(f)
    return kernel(ExactMatrix.from_rows(funcs, m.ncols, m.conductor))


def image_of(m: ExactMatrix, sub: ExactSubspace) -> ExactSubspace:
    if sub.ambient != m.ncols:
        raise ShapeError("subspace does not live in the domain")
    return ExactSubspace.span([m.apply(v) for v in sub.basis()], m.nrows, m.conductor)


def solve(a: ExactMatrix, b: ExactMatrix):
    """Some X with a X = b, or None if the system is inconsistent."""
    if a.nrows != b.nrows:
        raise ShapeError("row counts differ")
    n = a.ncols
    # eliminate on augmented rows [a | b]
    arows = a.rows()
    brows = b.rows()
    ech = _Echelon()
    for ra, rb in zip(arows, brows):
        row = dict(ra)
        for j, x in rb.items():
            row[n + j] = x
        ech.add(row)
    if any(p >= n for p in ech.rows):
        return None
    cols = [{} for _ in range(b.ncols)]
    for p, row in ech.rows.items():
        for k, x in row.items():
            if k >= n:
                cols[k - n][p] = x
    return ExactMatrix(n, b.ncols, cols, a.conductor)


def solve_sparse_system(equations: list, nvars: int, conductor: int):
    """Solve rows ``(coeffs: dict, rhs)``; returns dict solution (free vars 0) or None."""
    ech = _Echelon()
    for coeffs, rhs in equations:
        row = dict(coeffs)
        if rhs:
            row[nvars] = rhs
        ech.add(row)
    if nvars in ech.rows:
        return None
    sol = {}
    for p, row in ech.rows.items():
        x = row.get(nvars)
        if x:
            sol[p] = x
    return sol


# -- Jacobson radical -------------------------------------------------------

def _mul_basis(alg, i, j) -> dict:
    return alg.mult.get((i, j), {})


def check_associative(alg) -> bool:
    D = alg.dim
    for i in range(D):
        for j in range(D):
            ij = _mul_basis(alg, i, j)
            for k in range(D):
                left: dict = {}
                for l, c in ij.items():
                    vec_iadd(left, _mul_basis(alg, l, k), c)
                right: dict = {}
                for l, c in _mul_basis(alg, j, k).items():
                    vec_iadd(right, _mul_basis(alg, i, l), c)
                if left != right:
                    return False
    return True


def algebra_product(alg, u: dict, v: dict) -> dict:
    out: dict = {}
    for i, a in u.items():
        for j, b in v.items():
            prod = alg.mult.get((i, j))
            if prod:
                vec_iadd(out, prod, a * b)
    return out


def trace_form_radical(alg, check: bool = True) -> ExactSubspace:
    """Jacobson radical of a finite-dimensional algebra in characteristic 0.

    Uses rad(A) = {x : tr(L_x L_y) = 0 for all y}.  The result is checked to
    be a two-sided nilpotent ideal.
    """
    D = alg.dim
    N = alg.conductor
    if check and not check_associative(alg):
        raise NotAnAlgebra("multiplication is not associative")
    zero = CycloScalar.zero(N)
    # tr(L_x L_y) = tr(L_{xy}) for an associative algebra
    tau = []
    for k in range(D):
        t = zero
        for i in range(D):
            c = _mul_basis(alg, k, i).get(i)
            if c is not None:
                t = t + c
        tau.append(t)
    form_rows = []
    for i in range(D):
        row = {}
        for j in range(D):
            v = zero
            for k, c in _mul_basis(alg, i, j).items():
                if tau[k]:
                    v = v + c * tau[k]
            if v:
                row[j] = v
        form_rows.append(row)
    rad = kernel(ExactMatrix.from_rows(form_rows, D, N))
    if rad.dim:
        _assert_nilpotent_ideal(alg, rad)
    return rad


def _assert_nilpotent_ideal(alg, rad: ExactSubspace) -> None:
    D = alg.dim
    basis = rad.basis()
    one_hot = [{i: CycloScalar.one(alg.conductor)} for i in range(D)]
    for r in basis:
        for e in one_hot:
            if not rad.contains(algebra_product(alg, r, e)) or \
                    not rad.contains(algebra_product(alg, e, r)):
                raise TheoremViolation("trace-form radical is not an ideal")
    power = rad
    for _ in range(D + 1):
        if power.is_zero():
            return
        power = ExactSubspace.span(
            [algebra_product(alg, p, r) for p in power.basis() for r in basis], D, alg.conductor)
    raise TheoremViolation("trace-form radical is not nilpotent")
