"""Pure-Python arithmetic kernels.

Fallback twin of the compiled `_kernels` extension; both expose the same
functions over the same flat layout. A dim x dim quaternion matrix is a flat
tuple of 4*dim*dim residues, row-major, four consecutive coefficients
(1, i, j, k) per entry. Coefficients are arbitrary-precision ints, reduced
into [0, n) on output.
"""

BACKEND_NAME = "python"


def quat_mul(a, b, c, d, a2, b2, c2, d2, n):
    """Hamilton product of (a,b,c,d) and (a2,b2,c2,d2) mod n."""
    return (
        (a * a2 - b * b2 - c * c2 - d * d2) % n,
        (a * b2 + a2 * b + c * d2 - c2 * d) % n,
        (a * c2 - b * d2 + c * a2 + d * b2) % n,
        (a * d2 + b * c2 - c * b2 + a2 * d) % n,
    )


def mat_mul(u, v, dim, n):
    """Row-by-column product preserving factor order in every entry product."""
    out = [0] * (4 * dim * dim)
    for row in range(dim):
        for col in range(dim):
            sa = sb = sc = sd = 0
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
                sa += a * a2 - b * b2 - c * c2 - d * d2
                sb += a * b2 + a2 * b + c * d2 - c2 * d
                sc += a * c2 - b * d2 + c * a2 + d * b2
                sd += a * d2 + b * c2 - c * b2 + a2 * d
            o = (row * dim + col) * 4
            out[o] = sa % n
            out[o + 1] = sb % n
            out[o + 2] = sc % n
            out[o + 3] = sd % n
    return tuple(out)


def mat_add(u, v, dim, n):
    return tuple((x + y) % n for x, y in zip(u, v))


def mat_sub(u, v, dim, n):
    return tuple((x - y) % n for x, y in zip(u, v))
