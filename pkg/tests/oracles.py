"""Independent sympy reference computations for the reference structure.

Nothing here imports the package: the structure is rebuilt from its
defining data and every quantity is computed with sympy matrices.
"""

import itertools

import sympy as sp

X = sp.symbols("x1:5")
Y = sp.symbols("y1:5")
W = sp.Matrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def reference_gamma_lower():
    g = {}
    for p in set(itertools.permutations((0, 0, 1))):
        g[p] = sp.Integer(1)
    for p in set(itertools.permutations((1, 2, 3))):
        g[p] = X[0] * X[2] * X[3]
    return g


def gamma_upper(g):
    winv = W.inv()
    return [[[sp.expand(sum(winv[l, i] * g.get((i, j, k), 0) for i in range(4))) for k in range(4)] for j in range(4)] for l in range(4)]


def curvature(g):
    """R_{ijkl} = omega_{im} (d_k G^m_{lj} - d_l G^m_{kj} + G^m_{kp} G^p_{lj} - G^m_{lp} G^p_{kj})."""
    up = gamma_upper(g)
    r = {}
    for i, j, k, l in itertools.product(range(4), repeat=4):
        acc = 0
        for m in range(4):
            if W[i, m] == 0:
                continue
            inner = sp.diff(up[m][l][j], X[k]) - sp.diff(up[m][k][j], X[l])
            inner += sum(up[m][k][p] * up[p][l][j] - up[m][l][p] * up[p][k][j] for p in range(4))
            acc += W[i, m] * inner
        r[i, j, k, l] = sp.expand(acc)
    return r


def quadratic_invariants(g):
    """(R_{ijkl} R^{ijkl}, rho_{jl} rho^{jl}) with omega^{ik} omega_{jk} = delta and rho_{jl} = omega^{ik} R_{ijkl}."""
    r = curvature(g)
    inv = W.T.inv()
    f1 = 0
    for i, j, k, l in itertools.product(range(4), repeat=4):
        if r[i, j, k, l] == 0:
            continue
        for a, b, c, d in itertools.product(range(4), repeat=4):
            w = inv[i, a] * inv[j, b] * inv[k, c] * inv[l, d]
            if w:
                f1 += w * r[i, j, k, l] * r[a, b, c, d]
    rho = {(j, l): sp.expand(sum(inv[i, k] * r[i, j, k, l] for i in range(4) for k in range(4))) for j in range(4) for l in range(4)}
    f2 = sum(inv[j, a] * inv[l, b] * rho[j, l] * rho[a, b] for j, l, a, b in itertools.product(range(4), repeat=4))
    return sp.expand(f1), sp.expand(f2)


def _trunc(e, deg):
    e = sp.expand(e)
    if e == 0:
        return e
    poly = sp.Poly(e, *Y)
    return sp.Add(*[c * sp.Mul(*[y**k for y, k in zip(Y, m)]) for m, c in poly.terms() if sum(m) <= deg])


def cubic_normal_contraction(g, point, order=3):
    """T_{ijk}{}^{ijk} at ``point``: exponential map from the geodesic series in s,
    upper symbols in normal coordinates via a Neumann-series inverse Jacobian,
    lowered with omega~ = J^T omega J."""
    s = sp.Symbol("s")
    up = gamma_upper(g)
    top = order + 2
    coeffs = [[sp.Integer(point[l]) for l in range(4)], [Y[l] for l in range(4)]]
    for r in range(2, top + 1):
        xs = [sum(coeffs[k][l] * s**k for k in range(r)) for l in range(4)]
        vs = [sp.diff(e, s) for e in xs]
        new = []
        for l in range(4):
            e = sum(up[l][j][k].subs(dict(zip(X, xs)), simultaneous=True) * vs[j] * vs[k]
                    for j in range(4) for k in range(4) if up[l][j][k] != 0)
            c = sp.expand(e).coeff(s, r - 2) if e != 0 else 0
            new.append(sp.expand(-c / (r * (r - 1))))
        coeffs.append(new)
    phi = [sp.expand(sum(coeffs[k][l] for k in range(top + 1))) for l in range(4)]
    jac = sp.Matrix(4, 4, lambda l, a: sp.diff(phi[l], Y[a]))
    nil = jac - sp.eye(4)
    jinv, term = sp.eye(4), sp.eye(4)
    for _ in range(order + 1):
        term = (-nil * term).applyfunc(lambda e: _trunc(e, order))
        jinv = jinv + term
    sub = dict(zip(X, phi))
    new_up = {}
    for d, a, b in itertools.product(range(4), repeat=3):
        if b < a:
            new_up[d, a, b] = new_up[d, b, a]
            continue
        inner = [_trunc(sp.diff(phi[l], Y[a], Y[b]) + sum(up[l][p][q].subs(sub, simultaneous=True) * jac[p, a] * jac[q, b]
                 for p in range(4) for q in range(4) if up[l][p][q] != 0), order) for l in range(4)]
        new_up[d, a, b] = _trunc(sum(jinv[d, l] * inner[l] for l in range(4)), order)
    w_new = (jac.T * W * jac).applyfunc(lambda e: _trunc(e, order))
    origin = {y: 0 for y in Y}
    low = {(c, a, b): _trunc(sum(w_new[c, d] * new_up[d, a, b] for d in range(4)), order) for c, a, b in itertools.product(range(4), repeat=3)}
    inv = w_new.subs(origin).T.inv()
    total = 0
    for i, j, k in itertools.product(range(4), repeat=3):
        e = low[i, j, k]
        if e == 0:
            continue
        for a, b, c in itertools.product(range(4), repeat=3):
            w = inv[i, a] * inv[j, b] * inv[k, c]
            if w:
                total += w * sp.diff(e, Y[a], Y[b], Y[c]).subs(origin)
    return sp.Rational(total)
