"""Exact integer and prime-field linear algebra on dense list-of-list matrices."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import compress

Matrix = list[list[int]]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def eye(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def matmul(A: Matrix, B: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return []
    n = ncols if ncols is not None else (len(B[0]) if B else 0)
    out = zeros(len(A), n)
    for i, row in enumerate(A):
        o = out[i]
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        o[j] += a * b
    return out


def matvec(A: Matrix, v: list[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v) if a and b) for row in A]


def transpose(A: Matrix, nrows_if_empty: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(nrows_if_empty)]
    return [list(col) for col in zip(*A)]


@dataclass
class SmithForm:
    """P @ A @ Q == D with D diagonal; P, Q unimodular (inverses kept)."""

    diag: list[int]
    P: Matrix | None
    Pinv: Matrix | None
    Q: Matrix | None
    Qinv: Matrix | None
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diag if d]


def smith(A: Matrix, ncols: int | None = None, transforms: bool = True) -> SmithForm:
    """Smith normal form over the integers.

    The nonzero diagonal entries are positive and each divides the next.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    M = [list(r) for r in A]
    # The transforms stay sparse, so they are kept as dict rows.  Pinv and Q
    # receive column operations; they are stored transposed so that every
    # update is a row operation.
    P = _sparse_eye(m) if transforms else None
    PinvT = _sparse_eye(m) if transforms else None
    QT = _sparse_eye(n) if transforms else None
    Qinv = _sparse_eye(n) if transforms else None

    def _axpy(dst, src, c, width):
        for k in compress(range(width), src):
            dst[k] += c * src[k]

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        if transforms:
            P[i], P[j] = P[j], P[i]
            PinvT[i], PinvT[j] = PinvT[j], PinvT[i]

    def col_swap(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        if transforms:
            QT[i], QT[j] = QT[j], QT[i]
            Qinv[i], Qinv[j] = Qinv[j], Qinv[i]

    def row_add(i, j, c):  # row_i += c * row_j
        if not c:
            return
        _axpy(M[i], M[j], c, n)
        if transforms:
            _saxpy(P[i], P[j], c)
            _saxpy(PinvT[j], PinvT[i], -c)

    def col_add(i, j, c, rows=None):  # col_i += c * col_j; rows: where col_j may be nonzero
        if not c:
            return
        for r in (M if rows is None else rows):
            if r[j]:
                r[i] += c * r[j]
        if transforms:
            _saxpy(QT[i], QT[j], c)
            _saxpy(Qinv[j], Qinv[i], -c)

    def negate_row(i):
        M[i] = [-x for x in M[i]]
        if transforms:
            P[i] = {k: -x for k, x in P[i].items()}
            PinvT[i] = {k: -x for k, x in PinvT[i].items()}

    t = 0
    while t < min(m, n):
        best = None
        # boundary matrices are mostly units; look for one with C-level scans first
        for i in range(t, m):
            sl = M[i][t:]
            if 1 in sl:
                best = (1, i, t + sl.index(1))
                break
            if -1 in sl:
                best = (1, i, t + sl.index(-1))
                break
        for i in range(t, m) if best is None else ():
            Mi = M[i]
            for j in range(t, n):
                v = Mi[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            piv = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // piv
                    row_add(i, t, -q)
                    if M[i][t]:
                        dirty = True
            # column t is zero off the pivot unless the row pass left residues
            rows = [M[t]] if not dirty else None
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // piv
                    col_add(j, t, -q, rows)
                    if M[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remaining entry of row/column t onto the pivot
                cand = [(abs(M[i][t]), i, t) for i in range(t + 1, m) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t + 1, n) if M[t][j]]
                _, i, j = min(cand)
                if i != t:
                    row_swap(i, t)
                else:
                    col_swap(j, t)
                continue
            bad = None
            if abs(piv) != 1:
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if M[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            row_add(t, bad, 1)
        if M[t][t] < 0:
            negate_row(t)
        t += 1
    diag = [M[i][i] for i in range(min(m, n))]
    if not transforms:
        return SmithForm(diag, None, None, None, None, (m, n))
    P, Qinv = _dense(P, m), _dense(Qinv, n)
    Pinv, Q = transpose(_dense(PinvT, m), m), transpose(_dense(QT, n), n)
    return SmithForm(diag, P, Pinv, Q, Qinv, (m, n))


def _sparse_eye(n: int) -> list[dict]:
    return [{i: 1} for i in range(n)]


def _saxpy(dst: dict, src: dict, c: int):
    for k, v in src.items():
        x = dst.get(k, 0) + c * v
        if x:
            dst[k] = x
        else:
            del dst[k]


def _dense(rows: list[dict], width: int) -> Matrix:
    out = zeros(len(rows), width)
    for o, r in zip(out, rows):
        for k, v in r.items():
            o[k] = v
    return out


def integer_rank(A: Matrix, ncols: int | None = None) -> int:
    return smith(A, ncols, transforms=False).rank


def spans_lattice(columns: list[list[int]], dim: int, moduli: list[int] | None = None) -> bool:
    """Whether the columns, together with moduli[i]*e_i, generate Z^dim."""
    cols = [list(c) for c in columns]
    for i, d in enumerate(moduli or []):
        if d:
            v = [0] * dim
            v[i] = d
            cols.append(v)
    if dim == 0:
        return True
    if not cols:
        return False
    A = [[c[i] for c in cols] for i in range(dim)]
    sf = smith(A, len(cols), transforms=False)
    return sf.rank == dim and all(d == 1 for d in sf.invariant_factors)


# -- prime fields -----------------------------------------------------------


def rref_mod(rows: Matrix, p: int, ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over GF(p); returns (nonzero rows, pivot columns)."""
    R = [[x % p for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(R)) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = pow(R[r][c], -1, p)
        R[r] = [(x * inv) % p for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                Ri, Rr = R[i], R[r]
                R[i] = [(a - f * b) % p for a, b in zip(Ri, Rr)]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R[:r], pivots


def nullspace_mod(A: Matrix, p: int, ncols: int) -> Matrix:
    """Basis (as rows) of {x : A x = 0} over GF(p)."""
    R, pivots = rref_mod(A, p, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis


def rank_mod(rows: Matrix, p: int, ncols: int) -> int:
    return len(rref_mod(rows, p, ncols)[1])


def complement_basis(sub: Matrix, whole: Matrix, p: int, ncols: int) -> Matrix:
    """Vectors of `whole` extending a basis of span(sub) to a basis of span(sub + whole)."""
    basis, pivots = rref_mod(sub, p, ncols)
    basis = [list(r) for r in basis]
    out = []
    for v in whole:
        trial, tp = rref_mod(basis + [v], p, ncols)
        if len(tp) > len(pivots):
            basis, pivots = [list(r) for r in trial], tp
            out.append([x % p for x in v])
    return out


def solve_mod(basis: Matrix, v: list[int], p: int, ncols: int) -> list[int] | None:
    """Coefficients c with sum c_i basis_i == v over GF(p), or None."""
    k = len(basis)
    # columns = basis vectors; augmented system of ncols equations in k unknowns
    A = [[basis[j][i] % p for j in range(k)] + [v[i] % p] for i in range(ncols)]
    R, pivots = rref_mod(A, p, k + 1)
    if k in pivots:
        return None
    c = [0] * k
    for row, pc in zip(R, pivots):
        c[pc] = row[k]
    return c


def in_lattice(columns: list[list[int]], dim: int, moduli: list[int] | None, v: list[int]) -> bool:
    """Whether v lies in the span of the columns together with moduli[i]*e_i."""
    cols = [list(c) for c in columns]
    for i, d in enumerate(moduli or []):
        if d:
            e = [0] * dim
            e[i] = d
            cols.append(e)
    if dim == 0 or not any(v):
        return True
    if not cols:
        return False
    A = [[c[i] for c in cols] for i in range(dim)]
    sf = smith(A, len(cols))
    # A x = v  <=>  D y = P v with y = Q^-1 x
    w = matvec(sf.P, v)
    for i in range(dim):
        d = sf.diag[i] if i < len(sf.diag) else 0
        if d == 0:
            if w[i]:
                return False
        elif w[i] % d:
            return False
    return True
