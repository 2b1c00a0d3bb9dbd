"""Exact dense linear algebra over the rationals.

Matrices are lists of lists of ``mpq``.  Nothing here pivots on magnitude;
every pivot is chosen for exactness only.
"""

from .exactpoly import ONE, QQ, ZERO


def to_matrix(rows):
    return [[QQ(v) for v in row] for row in rows]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in bt] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def rref(a):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a):
    if not a or not a[0]:
        return 0
    # fraction-free forward elimination is enough for the rank
    m = [list(r) for r in a]
    rows, cols = len(m), len(m[0])
    rk = 0
    for c in range(cols):
        piv = next((i for i in range(rk, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk][c]
        for i in range(rk + 1, rows):
            if m[i][c]:
                f = m[i][c] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        rk += 1
        if rk == rows:
            break
    return rk


def det(a):
    n = len(a)
    m = [list(r) for r in a]
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result *= p
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def solve(a, b):
    """Solve ``a x = b`` for square nonsingular ``a``; returns None if singular."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def nullspace(a, ncols=None):
    """Basis of the right kernel; one vector per free column."""
    if not a:
        n = ncols or 0
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    red, piv = rref(a)
    n = len(a[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for r, pc in enumerate(piv):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def charpoly(a):
    """Characteristic polynomial det(lambda*I - a), coefficients low -> high.

    Faddeev-LeVerrier: the algebra is over Q so dividing by k is exact.
    """
    n = len(a)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    mk = [[ZERO] * n for _ in range(n)]
    for k in range(1, n + 1):
        am = matmul(a, mk) if k > 1 else [[ZERO] * n for _ in range(n)]
        for i in range(n):
            am[i][i] += coeffs[n - k + 1]
        mk = am
        amk = matmul(a, mk)
        coeffs[n - k] = -sum((amk[i][i] for i in range(n)), ZERO) / k
    return coeffs


class Echelon:
    """Incrementally maintained echelon basis of sparse vectors.

    Every stored row remembers how it was built from the inserted vectors,
    so a vector that reduces to zero yields an explicit linear relation.
    Entries are rationals, or ints modulo the prime ``mod`` when given.
    """

    def __init__(self, mod=None):
        self.rows = {}   # pivot -> (vec, combo); vec[pivot] == 1
        self.order = []
        self.mod = mod

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec, combo):
        vec = dict(vec)
        combo = dict(combo)
        mod = self.mod
        for pivot in self.order:
            c = vec.get(pivot)
            if not c:
                continue
            rvec, rcombo = self.rows[pivot]
            for target, src in ((vec, rvec), (combo, rcombo)):
                for k, v in src.items():
                    nv = target.get(k, 0) - c * v
                    if mod:
                        nv %= mod
                    if nv:
                        target[k] = nv
                    else:
                        target.pop(k, None)
        return vec, combo

    def insert(self, vec, label):
        """Insert ``vec``; return None if independent, else the relation.

        The relation is a dict ``{label: coeff}`` with
        ``vec == sum(coeff * inserted[label])`` over previously inserted labels.
        """
        mod = self.mod
        red, combo = self.reduce(vec, {label: 1 if mod else ONE})
        if not red:
            if mod:
                return {k: -v % mod for k, v in combo.items() if k != label}
            return {k: -v for k, v in combo.items() if k != label}
        pivot = min(red)
        if mod:
            inv = pow(red[pivot], -1, mod)
            red = {k: v * inv % mod for k, v in red.items()}
            combo = {k: v * inv % mod for k, v in combo.items()}
        else:
            inv = 1 / red[pivot]
            red = {k: v * inv for k, v in red.items()}
            combo = {k: v * inv for k, v in combo.items()}
        self.rows[pivot] = (red, combo)
        self.order.append(pivot)
        return None

    def express(self, vec):
        """Coefficients writing ``vec`` in the inserted vectors, or None."""
        red, combo = self.reduce(vec, {})
        if red:
            return None
        if self.mod:
            return {k: -v % self.mod for k, v in combo.items()}
        return {k: -v for k, v in combo.items()}
