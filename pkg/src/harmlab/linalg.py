"""Linear solvers for reduced Laplacian systems.

Rows are sparse ``{column: coefficient}`` dicts.  The exact solver is plain
Gaussian elimination over ``Fraction`` without pivoting, which is safe here
because every system we build is a symmetric positive definite Laplacian
block (diagonally dominant, every component touches the boundary).
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

try:  # optional accelerator for large exact systems
    import flint  # type: ignore
except ImportError:  # pragma: no cover - depends on environment
    flint = None

FLINT_THRESHOLD = 40


class SingularSystemError(RuntimeError):
    """A zero pivot appeared; for a Laplacian block this is an internal defect."""


class ConvergenceError(RuntimeError):
    pass


def solve_exact(rows: Sequence[dict], rhs: Sequence, *, backend: str = "auto") -> list[Fraction]:
    """Solve ``A x = b`` exactly for a sparse SPD ``A``.

    ``backend`` is ``"python"``, ``"flint"`` or ``"auto"`` (FLINT for systems
    above :data:`FLINT_THRESHOLD` unknowns when it is installed).
    """
    n = len(rows)
    if backend == "flint" or (backend == "auto" and flint is not None and n > FLINT_THRESHOLD):
        if flint is None:
            raise RuntimeError("python-flint is not installed")
        return _solve_flint(rows, rhs)
    return _solve_python(rows, rhs)


def _solve_python(rows, rhs) -> list[Fraction]:
    n = len(rows)
    a = [{j: Fraction(v) for j, v in r.items() if v} for r in rows]
    b = [Fraction(x) for x in rhs]
    below: list[set] = [set() for _ in range(n)]
    for i, r in enumerate(a):
        for j in r:
            if i > j:
                below[j].add(i)
    for k in range(n):
        pr = a[k]
        piv = pr.get(k, 0)
        if piv == 0:
            raise SingularSystemError(f"zero pivot at row {k}")
        bk = b[k]
        for i in sorted(below[k]):
            ri = a[i]
            coef = ri.pop(k, 0)
            if not coef:
                continue
            fct = coef / piv
            for j, v in pr.items():
                if j == k:
                    continue
                nv = ri.get(j, 0) - fct * v
                if nv:
                    ri[j] = nv
                    if i > j:
                        below[j].add(i)
                else:
                    ri.pop(j, None)
            b[i] -= fct * bk
    x: list[Fraction] = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        s = b[k]
        for j, v in a[k].items():
            if j != k:
                s -= v * x[j]
        x[k] = s / a[k][k]
    return x


def _solve_flint(rows, rhs) -> list[Fraction]:
    n = len(rows)
    A = flint.fmpq_mat(n, n)
    B = flint.fmpq_mat(n, 1)
    for i, r in enumerate(rows):
        for j, v in r.items():
            v = Fraction(v)
            A[i, j] = flint.fmpq(v.numerator, v.denominator)
        v = Fraction(rhs[i])
        B[i, 0] = flint.fmpq(v.numerator, v.denominator)
    X = A.solve(B)
    out = []
    for i in range(n):
        q = X[i, 0]
        out.append(Fraction(int(q.p), int(q.q)))
    return out


def to_csr(rows: Sequence[dict], n: int):
    from scipy.sparse import csr_matrix

    data, ind, ptr = [], [], [0]
    for r in rows:
        for j in sorted(r):
            ind.append(j)
            data.append(float(r[j]))
        ptr.append(len(ind))
    return csr_matrix((np.array(data), np.array(ind, dtype=np.int64), np.array(ptr)), shape=(n, n))


def conjugate_gradient(A, b: np.ndarray, *, atol: float, max_iterations: int, x0=None) -> tuple[np.ndarray, int]:
    """Jacobi-preconditioned conjugate gradients with a sup-norm residual stop.

    Sequential and deterministic: the same inputs give bit-identical iterates.
    Stops when ``max|b - A x| <= atol``.
    """
    n = b.shape[0]
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    dinv = 1.0 / A.diagonal()
    r = b - A @ x
    if np.max(np.abs(r), initial=0.0) <= atol:
        return x, 0
    z = dinv * r
    p = z.copy()
    rz = float(r @ z)
    for it in range(1, max_iterations + 1):
        Ap = A @ p
        alpha = rz / float(p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        if it % 50 == 0:
            # refresh against drift of the recursive residual
            r = b - A @ x
        if np.max(np.abs(r)) <= atol:
            true_r = b - A @ x
            if np.max(np.abs(true_r)) <= atol:
                return x, it
            r = true_r
        z = dinv * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise ConvergenceError(f"no convergence within {max_iterations} iterations")


def solve_direct(A, b: np.ndarray) -> np.ndarray:
    from scipy.sparse.linalg import splu

    return splu(A.tocsc()).solve(b)
