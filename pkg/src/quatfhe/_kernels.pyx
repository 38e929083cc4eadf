# cython: language_level=3
"""Compiled arithmetic kernels.

Coefficients stay arbitrary-precision Python ints; the win over the pure
twin comes from removing interpreter dispatch in the inner loops. Layout is
identical to `_kernels_py`: flat tuples of 4*dim*dim residues, row-major,
four coefficients per entry.
"""

BACKEND_NAME = "cython"


def quat_mul(a, b, c, d, a2, b2, c2, d2, n):
    """Hamilton product of (a,b,c,d) and (a2,b2,c2,d2) mod n."""
    return (
        (a * a2 - b * b2 - c * c2 - d * d2) % n,
        (a * b2 + a2 * b + c * d2 - c2 * d) % n,
        (a * c2 - b * d2 + c * a2 + d * b2) % n,
        (a * d2 + b * c2 - c * b2 + a2 * d) % n,
    )


def mat_mul(tuple u, tuple v, Py_ssize_t dim, n):
    """Row-by-column product preserving factor order in every entry product."""
    cdef Py_ssize_t row, col, k, o1, o2, o
    cdef list out = [0] * (4 * dim * dim)
    cdef object a, b, c, d, a2, b2, c2, d2, sa, sb, sc, sd
    for row in range(dim):
        for col in range(dim):
            sa = 0
            sb = 0
            sc = 0
            sd = 0
            for k in range(dim):
                o1 = (row * dim + k) * 4
                o2 = (k * dim + col) * 4
                a = u[o1]
                b = u[o1 + 1]
                c = u[o1 + 2]
                d = u[o1 + 3]
                a2 = v[o2]
                b2 = v[o2 + 1]
                c2 = v[o2 + 2]
                d2 = v[o2 + 3]
                sa = sa + a * a2 - b * b2 - c * c2 - d * d2
                sb = sb + a * b2 + a2 * b + c * d2 - c2 * d
                sc = sc + a * c2 - b * d2 + c * a2 + d * b2
                sd = sd + a * d2 + b * c2 - c * b2 + a2 * d
            o = (row * dim + col) * 4
            out[o] = sa % n
            out[o + 1] = sb % n
            out[o + 2] = sc % n
            out[o + 3] = sd % n
    return tuple(out)


def mat_add(tuple u, tuple v, Py_ssize_t dim, n):
    cdef Py_ssize_t i, total = 4 * dim * dim
    cdef list out = [0] * total
    for i in range(total):
        out[i] = (u[i] + v[i]) % n
    return tuple(out)


def mat_sub(tuple u, tuple v, Py_ssize_t dim, n):
    cdef Py_ssize_t i, total = 4 * dim * dim
    cdef list out = [0] * total
    for i in range(total):
        out[i] = (u[i] - v[i]) % n
    return tuple(out)
