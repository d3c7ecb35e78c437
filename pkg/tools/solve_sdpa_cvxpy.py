#!/usr/bin/env python3
"""Solve a sparse SDPA dual-form problem with cvxpy and write numeric blocks.

Independent of the wturan package: reads the file format directly.  Output
is the numeric solution format accepted by ``wturan flag round``:

    lambda <float>
    block <b> <dim>
    <row-major floats>

The problem is  min c^T x  s.t.  sum_i x_i F_i - F_0 >= 0 (block-diagonal).
PSD blocks are recovered as the PSD matrices  sum_i x_i F_i - F_0.
"""
import argparse
import sys
from collections import defaultdict

import cvxpy as cp
import numpy as np


def read(path):
    lines = []
    with open(path) as fh:
        for raw in fh:
            s = raw.strip()
            if not s or s[0] in '"*':
                continue
            for ch in "{}(),":
                s = s.replace(ch, " ")
            lines.append(s)
    m = int(lines[0].split()[0])
    struct = [int(v) for v in lines[2].split()]
    c = np.array([float(v) for v in lines[3].split()])
    ent = defaultdict(list)  # block -> list of (mat, i, j, val)
    for s in lines[4:]:
        a = s.split()
        mat, blk, i, j = (int(v) for v in a[:4])
        ent[blk].append((mat, i - 1, j - 1, float(a[4])))
    return m, struct, c, ent


def solve(path, solver):
    m, struct, c, ent = read(path)
    x = cp.Variable(m)
    cons = []
    psd = []
    for b, dim in enumerate(struct, start=1):
        if dim > 0:
            S = cp.Variable((dim, dim), symmetric=True)
            expr = defaultdict(lambda: 0)
            for mat, i, j, v in ent[b]:
                term = -v if mat == 0 else v * x[mat - 1]
                expr[(i, j)] = expr[(i, j)] + term
            for i in range(dim):
                for j in range(i, dim):
                    cons.append(S[i, j] == expr.get((i, j), 0))
            cons.append(S >> 0)
            psd.append(S)
        else:
            n = -dim
            rows = defaultdict(lambda: 0)
            for mat, i, _, v in ent[b]:
                term = -v if mat == 0 else v * x[mat - 1]
                rows[i] = rows[i] + term
            cons += [rows[i] >= 0 for i in range(n) if not isinstance(rows[i], (int, float))]
    prob = cp.Problem(cp.Minimize(c @ x), cons)
    prob.solve(solver=solver)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        sys.exit(f"solver status: {prob.status}")
    return prob.value, [S.value for S in psd]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("sdpa")
    ap.add_argument("-o", "--output", default="-")
    ap.add_argument("--solver", default="CLARABEL")
    args = ap.parse_args(argv)
    val, blocks = solve(args.sdpa, args.solver)
    out = [f"lambda {float(val)!r}"]
    for b, S in enumerate(blocks):
        S = (S + S.T) / 2
        out.append(f"block {b} {S.shape[0]}")
        out += [" ".join(repr(float(v)) for v in row) for row in S]
    text = "\n".join(out) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    print(f"objective {val:.10f}", file=sys.stderr)


if __name__ == "__main__":
    main()
