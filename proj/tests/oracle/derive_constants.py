"""Independent derivation of the constants frozen into the C++ tests.

Uses only sympy and itertools: subset sums for theta, plain enumeration for
counts and partition functions. Run: python3 tests/oracle/derive_constants.py
"""

import itertools
import math

import sympy as sp

b, g, x = sp.symbols("b g x")

GRAPHS = {
    "triangle": (3, [(0, 1), (1, 2), (0, 2)]),
    "C4": (4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    "C5": (5, [(i, (i + 1) % 5) for i in range(5)]),
    "C6": (6, [(i, (i + 1) % 6) for i in range(6)]),
    "K4": (4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    "grid2x3": (6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]),
    "example1": (6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]),
    "path3": (3, [(0, 1), (1, 2)]),
    "B1": (1, [(0, 0)]),
    "B2": (1, [(0, 0), (0, 0)]),
    "B3": (1, [(0, 0), (0, 0), (0, 0)]),
    "parallel2": (2, [(0, 1), (0, 1)]),
    "parallel2_tail": (3, [(0, 1), (0, 1), (1, 2)]),
}


def f(n, var):
    a, c = sp.Integer(1), sp.Integer(0)
    for _ in range(n):
        a, c = c, sp.expand(var * c + a)
    return a


def degrees(n, edges, subset):
    d = [0] * n
    for k in subset:
        u, v = edges[k]
        d[u] += 1
        d[v] += 1
    return d


def subsets(m):
    for mask in range(1 << m):
        yield mask, [k for k in range(m) if mask >> k & 1]


def theta(n, edges):
    total = 0
    for _, s in subsets(len(edges)):
        term = b ** len(s)
        for d in degrees(n, edges, s):
            term *= f(d, g)
        total += term
    return sp.expand(total)


def omega(n, edges):
    t = sp.expand(theta(n, edges).subs(g, 2 * sp.I))
    e = len(edges) - n
    if e >= 0:
        q, r = sp.div(sp.Poly(t, b), sp.Poly((1 - b) ** e, b))
        assert r.is_zero
        return sp.expand(q.as_expr())
    return sp.expand(t * (1 - b) ** (-e))


def gen_loops(n, edges):
    return [mask for mask, s in subsets(len(edges)) if 1 not in degrees(n, edges, s)]


def matchings(n, edges):
    p = [0] * (n // 2 + 1)
    for _, s in subsets(len(edges)):
        used = [v for k in s for v in edges[k]]
        if len(used) == len(set(used)):
            p[len(s)] += 1
    return p


def injective_assignments(n, edges):
    inc = [[k for k, (u, v) in enumerate(edges) if i in (u, v)] for i in range(n)]
    return sum(1 for choice in itertools.product(*inc) if len(set(choice)) == n)


def log_z(n, edges, coupling, fields=None):
    fields = fields or [0.0] * n
    z = 0.0
    for xs in itertools.product((-1, 1), repeat=n):
        w = sum(coupling * xs[u] * xs[v] for u, v in edges) + sum(h * s for h, s in zip(fields, xs))
        z += math.exp(w)
    return math.log(z)


if __name__ == "__main__":
    for name, (n, e) in GRAPHS.items():
        print(f"{name}: theta = {theta(n, e)}")
        print(f"{name}: omega = {sp.Poly(omega(n, e), b).all_coeffs()[::-1]}")
        print(f"{name}: generalized loops = {len(gen_loops(n, e))}")
        if all(u != v for u, v in e):
            print(f"{name}: matchings = {matchings(n, e)}, injective = {injective_assignments(n, e)}")
    print("theta(1,g) example1 =", sp.expand(theta(*GRAPHS["example1"]).subs(b, 1)))
    print("theta(1,g) K4 =", sp.expand(theta(*GRAPHS["K4"]).subs(b, 1)))
    print("single edge J=0.5 log Z =", repr(math.log(2 * math.exp(0.5) + 2 * math.exp(-0.5))))
    print("example1 psi=e^{0.3xy} log Z =", repr(log_z(*GRAPHS["example1"], 0.3)))
    print("example1 psi=e^{0.1xy} log Z =", repr(log_z(*GRAPHS["example1"], 0.1)))
    for k in range(1, 7):
        print(f"f_{2*k}(2i) =", sp.expand(f(2 * k, 2 * sp.I)), " formula:", (2 * k - 1) * sp.I ** (2 * k - 2))
