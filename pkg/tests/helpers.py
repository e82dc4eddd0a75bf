"""Independent oracles and generators shared by the test modules.

Nothing here calls into the package's differentiation or structure code;
the oracles are written directly in numpy so they can check it.
"""

import numpy as np

from almostcomplex.expr import BinOp, Call, Imag, Neg, Num, Pow, Var, ZVar, pretty


# -- random expression corpus -----------------------------------------------------

def random_expr(rng, depth: int, dim: int = 4):
    """Random AST of depth <= ``depth`` that stays finite on [-1, 1]^dim.

    Division and negative powers only ever see denominators of the form
    (2 + abs2(.)), which are bounded away from zero.
    """
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.35:
            return Var(int(rng.integers(1, dim + 1)))
        if r < 0.7:
            return ZVar(int(rng.integers(1, dim // 2 + 1)), bool(rng.integers(2)))
        if r < 0.85:
            return Num(round(float(rng.uniform(-2, 2)), 3))
        return Imag()
    kind = rng.choice(["add", "sub", "mul", "div", "neg", "pow", "call"])
    sub = lambda: random_expr(rng, depth - 1, dim)
    if kind in ("add", "sub", "mul"):
        return BinOp({"add": "+", "sub": "-", "mul": "*"}[kind], sub(), sub())
    if kind == "div":
        return BinOp("/", sub(), BinOp("+", Num(2.0), Call("abs2", sub())))
    if kind == "neg":
        return Neg(sub())
    if kind == "pow":
        n = int(rng.integers(-2, 4))
        if n < 0:
            return Pow(BinOp("+", Num(2.0), Call("abs2", sub())), n)
        return Pow(sub(), n)
    func = str(rng.choice(["exp", "sin", "cos", "re", "im", "conj", "abs2"]))
    arg = sub()
    if func in ("exp", "sin", "cos"):
        # keep arguments of bounded size so values stay moderate
        arg = Call("sin", arg) if func == "exp" else arg
    return Call(func, arg)


def corpus(n: int, seed: int = 0, max_depth: int = 6, dim: int = 4, limit: float = 1e6):
    """n expression texts with moderate values at a probe point."""
    from almostcomplex.expr import eval_jet

    rng = np.random.default_rng(seed)
    out = []
    probe = np.full(dim, 0.3)
    while len(out) < n:
        e = random_expr(rng, int(rng.integers(1, max_depth + 1)), dim)
        j = eval_jet(e, probe, 0)
        if np.isfinite(j.value) and abs(j.value) < limit:
            out.append(pretty(e))
    return out


# -- finite differences --------------------------------------------------------------

def fd_grad(fn, p, h=1e-5):
    p = np.asarray(p, float)
    g = []
    for k in range(len(p)):
        e = np.zeros_like(p)
        e[k] = h
        g.append((fn(p + e) - fn(p - e)) / (2 * h))
    return np.array(g)


# -- the torus structure written out by hand ----------------------------------------

def torus_J(p):
    """J for alpha_1 = dz - i zw dwbar, alpha_2 = dw + i zw dzbar, built from scratch.

    Components in the (dx1, dx2, dx3, dx4) basis: dz = (1, i, 0, 0),
    dw = (0, 0, 1, i), conjugates likewise.
    """
    x1, x2, x3, x4 = p
    z, w = x1 + 1j * x2, x3 + 1j * x4
    c = z * w
    dz = np.array([1, 1j, 0, 0])
    dw = np.array([0, 0, 1, 1j])
    a1 = dz - 1j * c * dw.conj()
    a2 = dw + 1j * c * dz.conj()
    M = np.array([a1, a2, a1.conj(), a2.conj()])
    D = np.diag([1j, 1j, -1j, -1j])
    return np.real(np.linalg.solve(M, D @ M))


def standard_J(n=2):
    """J e_{2k-1} = e_{2k} for z_k = x_{2k-1} + i x_{2k}."""
    J = np.zeros((2 * n, 2 * n))
    for k in range(n):
        J[2 * k + 1, 2 * k] = 1
        J[2 * k, 2 * k + 1] = -1
    return J


def bracket_nijenhuis(Jfun, p, a, b, h=1e-5):
    """N(e_a, e_b) from vector-field brackets, each field differentiated by central differences.

    [X, Y] = DY.X - DX.Y for vector fields X, Y on R^m.
    """
    p = np.asarray(p, float)
    m = len(p)
    ea, eb = np.eye(m)[a], np.eye(m)[b]

    def jac(field):
        cols = []
        for k in range(m):
            e = np.zeros(m)
            e[k] = h
            cols.append((field(p + e) - field(p - e)) / (2 * h))
        return np.array(cols).T

    JX = lambda q: Jfun(q) @ ea
    JY = lambda q: Jfun(q) @ eb
    DJX, DJY = jac(JX), jac(JY)
    J = Jfun(p)
    br_jx_jy = DJY @ JX(p) - DJX @ JY(p)
    br_jx_y = -DJX @ eb
    br_x_jy = DJY @ ea
    return br_jx_jy - J @ br_jx_y - J @ br_x_jy
