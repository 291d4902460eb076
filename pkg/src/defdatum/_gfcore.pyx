# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _corepy: dense polynomial kernels over F_p.

Same calling convention as the pure Python module (little-endian int
lists, no trailing zeros).
"""


def trim(list a):
    cdef Py_ssize_t n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    del a[n:]
    return a


def add(list a, list b, long p):
    if len(a) < len(b):
        a, b = b, a
    cdef list c = list(a)
    cdef Py_ssize_t i
    for i in range(len(b)):
        c[i] = (<long> c[i] + <long> b[i]) % p
    return trim(c)


def neg(list a, long p):
    cdef Py_ssize_t i
    return [(-(<long> a[i])) % p for i in range(len(a))]


def sub(list a, list b, long p):
    return add(a, neg(b, p), p)


def smul(list a, long c, long p):
    c %= p
    if c == 0:
        return []
    cdef Py_ssize_t i
    return [((<long> a[i]) * c) % p for i in range(len(a))]


def mul(list a, list b, long p):
    if not a or not b:
        return []
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef list c = [0] * (la + lb - 1)
    cdef Py_ssize_t i, j
    cdef long x
    for i in range(la):
        x = a[i]
        if x:
            for j in range(lb):
                c[i + j] = ((<long> c[i + j]) + x * (<long> b[j])) % p
    return c


def divmod_(list a, list b, long p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    cdef list r = list(a)
    cdef Py_ssize_t db = len(b) - 1, da = len(a) - 1
    if da < db:
        return [], trim(r)
    cdef long inv = pow(<object> b[db], p - 2, p)
    cdef list q = [0] * (da - db + 1)
    cdef Py_ssize_t i, j
    cdef long c
    for i in range(da - db, -1, -1):
        c = ((<long> r[i + db]) * inv) % p
        if c:
            q[i] = c
            for j in range(db + 1):
                r[i + j] = ((<long> r[i + j]) - c * (<long> b[j])) % p
    return trim(q), trim(r)


def gcd_(list a, list b, long p):
    a, b = list(a), list(b)
    while b:
        a, b = b, divmod_(a, b, p)[1]
    cdef long inv
    cdef Py_ssize_t i
    if a:
        inv = pow(<object> a[len(a) - 1], p - 2, p)
        a = [((<long> a[i]) * inv) % p for i in range(len(a))]
    return a


def powmod(list a, object e, list mod, long p):
    cdef list result = [1]
    cdef list base = divmod_(a, mod, p)[1]
    e = int(e)
    while e:
        if e & 1:
            result = divmod_(mul(result, base, p), mod, p)[1]
        base = divmod_(mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def eval_(list a, long x, long p):
    cdef long acc = 0
    cdef Py_ssize_t i
    for i in range(len(a) - 1, -1, -1):
        acc = (acc * x + (<long> a[i])) % p
    return acc
