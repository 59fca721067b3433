"""Print the [algebra] section of sl(N) in the E_ij / H_i basis.

Usage: python tools/make_sl_model.py N

Structure constants are computed from matrix commutators; the form is the
Killing form 2N tr(xy).  The rest of a model file is written by hand.
"""
import sys
from fractions import Fraction
from itertools import product


def matrices(N):
    basis = {}
    for i, j in product(range(1, N + 1), repeat=2):
        if i != j:
            m = [[0] * N for _ in range(N)]
            m[i - 1][j - 1] = 1
            basis[f"E{i}{j}"] = m
    for i in range(1, N):
        m = [[0] * N for _ in range(N)]
        m[i - 1][i - 1] = 1
        m[i][i] = -1
        basis[f"H{i}"] = m
    return basis


def mul(a, b):
    N = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(N)) for j in range(N)] for i in range(N)]


def coords(m, N):
    """Coordinates of a traceless matrix in the E_ij / H_i basis."""
    out = {}
    for i, j in product(range(N), repeat=2):
        if i != j and m[i][j]:
            out[f"E{i + 1}{j + 1}"] = Fraction(m[i][j])
    # diag(d_1..d_N) = sum c_i H_i with c_i = d_1 + ... + d_i
    c = Fraction(0)
    for i in range(N - 1):
        c += m[i][i]
        if c:
            out[f"H{i + 1}"] = c
    return out


def fmt(vec):
    parts = []
    for name, c in vec.items():
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = name if a == 1 else f"{a}*{name}"
        parts.append((sign, body))
    text = "".join(f" {s} {b}" for s, b in parts).strip()
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def main(N):
    basis = matrices(N)
    names = list(basis)
    print("[algebra]")
    print("basis: " + " ".join(names))
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            x, y = basis[names[a]], basis[names[b]]
            xy, yx = mul(x, y), mul(y, x)
            com = [[xy[i][j] - yx[i][j] for j in range(N)] for i in range(N)]
            vec = coords(com, N)
            if vec:
                print(f"bracket: {names[a]} {names[b]} = {fmt(vec)}")
    for a in range(len(names)):
        for b in range(a, len(names)):
            v = 2 * N * sum(mul(basis[names[a]], basis[names[b]])[i][i] for i in range(N))
            if v:
                print(f"form: {names[a]} {names[b]} = {v}")


if __name__ == "__main__":
    main(int(sys.argv[1]))
