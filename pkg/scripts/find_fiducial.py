"""Numerically search for a Weyl-Heisenberg covariant SIC fiducial in dimension d.

Writes ``{"dim": d, "vector": [[re, im], ...]}`` suitable for ``siclab build --fiducial``.
"""
import argparse
import json

import numpy as np
from scipy.optimize import least_squares


def displacements(d):
    omega = np.exp(2j * np.pi / d)
    X = np.roll(np.eye(d), 1, axis=0)
    Z = np.diag(omega ** np.arange(d))
    ops = []
    for q in range(d):
        for p in range(d):
            if p == 0 and q == 0:
                continue
            ops.append(np.linalg.matrix_power(X, p) @ np.linalg.matrix_power(Z, q))
    return ops


def residuals(x, ops, d):
    v = x[:d] + 1j * x[d:]
    v = v / np.linalg.norm(v)
    return np.array([abs(np.vdot(v, D @ v)) ** 2 - 1.0 / (d + 1) for D in ops])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("dim", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--starts", type=int, default=200)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    d = args.dim
    ops = displacements(d)
    rng = np.random.default_rng(args.seed)
    best = None
    for _ in range(args.starts):
        x0 = rng.standard_normal(2 * d)
        res = least_squares(residuals, x0, args=(ops, d), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        err = np.max(np.abs(res.fun))
        if best is None or err < best[0]:
            best = (err, res.x)
        if err < 1e-14:
            break
    err, x = best
    v = x[:d] + 1j * x[d:]
    v = v / np.linalg.norm(v)
    v = v * np.exp(-1j * np.angle(v[0]))
    payload = {"dim": d, "vector": [[float(z.real), float(z.imag)] for z in v], "max_residual": float(err)}
    text = json.dumps(payload, indent=2)
    if args.out == "-":
        print(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")


if __name__ == "__main__":
    main()
